#include "protmeas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace protmeas {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// y5 - y4 error weights
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

class InteractionRhs {
public:
    InteractionRhs(const SystemModel& model, const CouplingSpec& spec, double p)
        : model_(model), spec_(spec), p_(p), dim_(model.dimension()) {}

    // dc/dt = -i g(t) p  u(t) .* (O (conj(u(t)) .* c)),  u_k(t) = e^{i E_k t}
    Eigen::VectorXcd operator()(double t, const Eigen::VectorXcd& c) const {
        const double g = eval_coupling(spec_, t);
        if (g == 0.0 || p_ == 0.0) return Eigen::VectorXcd::Zero(dim_);
        Eigen::VectorXcd u(dim_);
        for (int k = 0; k < dim_; ++k) {
            const double a = model_.energy(k) * t;
            u(k) = {std::cos(a), std::sin(a)};
        }
        Eigen::VectorXcd w = model_.observable() * u.conjugate().cwiseProduct(c);
        return (-kI * g * p_) * u.cwiseProduct(w);
    }

private:
    const SystemModel& model_;
    const CouplingSpec& spec_;
    double p_;
    int dim_;
};

double error_norm(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y0,
                  const Eigen::VectorXcd& y1, double atol, double rtol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

EvolutionResult integrate_exact(const SystemModel& model, const CouplingSpec& spec,
                                const IntegratorConfig& config) {
    if (!(config.relative_tolerance > 0.0) || !(config.absolute_tolerance > 0.0))
        throw std::invalid_argument("integrate_exact: tolerances must be > 0");
    if (config.max_steps <= 0) throw std::invalid_argument("integrate_exact: max_steps must be > 0");

    const int d = model.dimension();
    const double T = spec.duration();
    const InteractionRhs rhs(model, spec, config.pointer_momentum);

    double omega_max = 0.0;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) omega_max = std::max(omega_max, std::abs(model.omega(j, k)));
    // cap so a single step advances the fastest coupling phase by <= 0.1 rad
    const double h_phase = (omega_max > 0.0) ? 0.1 / omega_max : T;

    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(d);
    y(model.initial()) = 1.0;

    double t = 0.0;
    double h = std::min({T / 64.0, h_phase, T});
    long accepted = 0;
    long attempts = 0;
    double accumulated_error = 0.0;

    Eigen::VectorXcd k1 = rhs(t, y);
    while (t < T) {
        if (++attempts > config.max_steps)
            throw IntegrationError("integrate_exact: step limit exceeded");
        h = std::min({h, h_phase, T - t});
        if (h <= 0.0 || t + h == t) throw IntegrationError("integrate_exact: step underflow");

        const Eigen::VectorXcd k2 = rhs(t + C2 * h, y + h * (A21 * k1));
        const Eigen::VectorXcd k3 = rhs(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
        const Eigen::VectorXcd k4 = rhs(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        const Eigen::VectorXcd k5 =
            rhs(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        const Eigen::VectorXcd k6 =
            rhs(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        const Eigen::VectorXcd y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        const Eigen::VectorXcd k7 = rhs(t + h, y5);  // FSAL
        const Eigen::VectorXcd err =
            h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

        const double en =
            error_norm(err, y, y5, config.absolute_tolerance, config.relative_tolerance);
        if (en <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;
            ++accepted;
            accumulated_error += err.norm();
        }
        const double factor = (en == 0.0) ? 5.0 : 0.9 * std::pow(en, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }

    EvolutionResult out;
    out.final_amplitudes = y;
    out.norm_defect = std::abs(y.squaredNorm() - 1.0);
    out.integrator_steps = accepted;
    out.estimated_error = accumulated_error;
    return out;
}

ConvergenceStudy convergence_study(const SystemModel& model, const CouplingSpec& spec,
                                   const IntegratorConfig& config,
                                   const std::vector<double>& scales) {
    if (scales.size() < 3)
        throw std::invalid_argument("convergence_study: need at least 3 scales");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0)) throw std::invalid_argument("convergence_study: scales must be > 0");
        if (i > 0 && !(scales[i] < scales[i - 1]))
            throw std::invalid_argument("convergence_study: scales must be decreasing");
    }

    const int d = model.dimension();
    const int n = model.initial();

    // Conditioning on pointer momentum p is the same dynamics as observable
    // p O at p = 1, so the perturbative reference uses the effective
    // observable. First order is linear in the scale.
    const SystemModel effective(model.energies(), config.pointer_momentum * model.observable(), n);
    Eigen::VectorXcd a1 = Eigen::VectorXcd::Zero(d);
    for (int m = 0; m < d; ++m)
        if (m != n) a1(m) = first_order_amplitude(effective, spec, m);

    ConvergenceStudy study;
    for (const double eps : scales) {
        const SystemModel scaled(model.energies(), eps * model.observable(), n);
        const auto res = integrate_exact(scaled, spec, config);
        double ss = 0.0;
        for (int m = 0; m < d; ++m) {
            if (m == n) continue;
            ss += std::norm(res.final_amplitudes(m) - eps * a1(m));
        }
        study.points.push_back({eps, std::sqrt(ss)});
    }

    // log-log slope of defect vs scale
    double su = 0.0, sy = 0.0, suu = 0.0, suy = 0.0;
    for (const auto& p : study.points) {
        if (!(p.defect > 0.0))
            throw std::runtime_error("convergence_study: zero defect, slope undefined");
        const double u = std::log(p.scale);
        const double v = std::log(p.defect);
        su += u;
        sy += v;
        suu += u * u;
        suy += u * v;
    }
    const auto np = static_cast<double>(study.points.size());
    study.slope = (np * suy - su * sy) / (np * suu - su * su);
    return study;
}

PerturbativeReport compare_perturbative(const SystemModel& model, const CouplingSpec& spec,
                                        const IntegratorConfig& config) {
    PerturbativeReport report;
    report.evolution = integrate_exact(model, spec, config);

    const int n = model.initial();
    const SystemModel effective(model.energies(), config.pointer_momentum * model.observable(), n);
    const SeriesCoefficients* coeffs = spec.series_coefficients();
    const bool has_leading = !spec.is_bump();

    auto rel = [](double a, double b) {
        const double m = std::max(std::abs(a), std::abs(b));
        return (m == 0.0) ? 0.0 : std::abs(a - b) / m;
    };

    for (int m = 0; m < model.dimension(); ++m) {
        if (m == n) continue;
        TargetComparison row;
        row.target = m;
        row.exact_magnitude = std::abs(report.evolution.final_amplitudes(m));
        row.first_order_magnitude = std::abs(first_order_amplitude(effective, spec, m));
        row.exact_vs_first = rel(row.exact_magnitude, row.first_order_magnitude);
        if (has_leading) {
            const auto& c = coeffs ? *coeffs : SeriesCoefficients::none();
            row.total_leading_magnitude =
                std::abs(total_leading_amplitude(effective, c, spec.duration(), m));
            row.exact_vs_total = rel(row.exact_magnitude, *row.total_leading_magnitude);
        }
        report.targets.push_back(row);
    }
    return report;
}

}  // namespace protmeas
