#include "protmeas/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace protmeas {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

std::complex<double> phase(double arg) { return {std::cos(arg), std::sin(arg)}; }

// (-i)^ell, exact
std::complex<double> minus_i_pow(int ell) {
    switch (((ell % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

// Leading kernel K(wT): (2 pi)^{2N} (sum_n a_n n^{2N}) (wT)^{-(2N+1)} for the
// solved series of order N; -1/(wT) for the constant coupling (empty set).
double leading_kernel(const SeriesCoefficients& coefficients, double x) {
    const int N = coefficients.order();
    if (N == 0) return -1.0 / x;
    return std::pow(2.0 * std::numbers::pi, 2 * N) * coefficients.moment_d(N) *
           std::pow(x, -(2.0 * N + 1.0));
}

void check_target(const SystemModel& model, int target) {
    if (target < 0 || target >= model.dimension())
        throw std::invalid_argument("amplitude: target index out of range");
    if (target == model.initial())
        throw std::invalid_argument("amplitude: target must differ from the initial state");
}

}  // namespace

SystemModel::SystemModel(std::vector<double> energies, Eigen::MatrixXcd observable,
                         int initial_index)
    : energies_(std::move(energies)), observable_(std::move(observable)), initial_(initial_index) {
    const auto d = static_cast<Eigen::Index>(energies_.size());
    if (d < 1) throw std::invalid_argument("SystemModel: empty spectrum");
    if (observable_.rows() != d || observable_.cols() != d)
        throw std::invalid_argument("SystemModel: observable dimension mismatch");
    if (initial_ < 0 || initial_ >= static_cast<int>(energies_.size()))
        throw std::invalid_argument("SystemModel: initial index out of range");
    for (std::size_t j = 0; j < energies_.size(); ++j)
        for (std::size_t k = j + 1; k < energies_.size(); ++k)
            if (!(std::abs(energies_[j] - energies_[k]) > 0.0))
                throw std::invalid_argument("SystemModel: degenerate spectrum");
    const double herm = (observable_ - observable_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-14)
        throw std::invalid_argument("SystemModel: observable not Hermitian to 1e-14");
}

std::complex<double> first_order_amplitude(const SystemModel& model, const CouplingSpec& spec,
                                           int target) {
    check_target(model, target);
    const int n = model.initial();
    const std::complex<double> O_mn = model.observable()(target, n);
    if (O_mn == std::complex<double>{0.0, 0.0}) return {0.0, 0.0};
    const double x = model.omega(target, n) * spec.duration();

    std::complex<double> G;
    if (spec.is_bump()) {
        G = quadrature_spectrum(spec, x).value;
    } else if (spec.is_constant()) {
        G = analytic_spectrum(SeriesCoefficients::none(), x);
    } else {
        G = analytic_spectrum(*spec.series_coefficients(), x);
    }
    return -kI * O_mn * G;
}

std::complex<double> leading_order_first(const SystemModel& model,
                                         const SeriesCoefficients& coefficients, double T,
                                         int target) {
    check_target(model, target);
    const int n = model.initial();
    const std::complex<double> O_mn = model.observable()(target, n);
    const double x = model.omega(target, n) * T;
    return 2.0 * kI * O_mn * phase(x / 2.0) * std::sin(x / 2.0) * leading_kernel(coefficients, x);
}

std::complex<double> leading_order_higher(const SystemModel& model,
                                          const SeriesCoefficients& coefficients, double T,
                                          int target, int order) {
    if (order < 2) throw std::invalid_argument("leading_order_higher: order must be >= 2");
    check_target(model, target);
    const int n = model.initial();
    const auto& O = model.observable();
    const std::complex<double> O_mn = O(target, n);
    const double O_mm = O(target, target).real();
    const double O_nn = O(n, n).real();
    const double x = model.omega(target, n) * T;

    double factorial = 1.0;
    for (int k = 2; k < order; ++k) factorial *= k;
    const std::complex<double> bracket =
        std::pow(O_mm, order - 1) - std::pow(O_nn, order - 1) * phase(x);
    return -minus_i_pow(order) * (kI * O_mn / factorial) * bracket * leading_kernel(coefficients, x);
}

std::complex<double> total_leading_amplitude(const SystemModel& model,
                                             const SeriesCoefficients& coefficients, double T,
                                             int target) {
    check_target(model, target);
    const int n = model.initial();
    const auto& O = model.observable();
    const std::complex<double> O_mn = O(target, n);
    const double x = model.omega(target, n) * T;
    const double chi = (O(target, target).real() - O(n, n).real()) / x;
    return 2.0 * kI * O_mn * phase(x / 2.0) * std::sin(0.5 * x * (1.0 + chi)) *
           leading_kernel(coefficients, x);
}

namespace {

// One tensor-grid pass of the iterated time-ordered integrals at resolution M:
// B^{(j)}_k(t) = -i int_0^t g(s) sum_p e^{i w_kp s} O_kp B^{(j-1)}_p(s) ds,
// cumulative trapezoid per level; returns B^{(order)}_target(T).
std::complex<double> nested_pass(const SystemModel& model, const CouplingSpec& spec, int target,
                                 int order, int M) {
    const int d = model.dimension();
    const double T = spec.duration();
    const double h = T / M;

    std::vector<double> g(M + 1);
    for (int i = 0; i <= M; ++i) g[i] = eval_coupling(spec, i * h);

    // e^{i E_k t_i}
    std::vector<std::vector<std::complex<double>>> u(d, std::vector<std::complex<double>>(M + 1));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i <= M; ++i) {
            const double a = model.energy(k) * i * h;
            u[k][i] = {std::cos(a), std::sin(a)};
        }

    std::vector<std::vector<std::complex<double>>> B(
        d, std::vector<std::complex<double>>(M + 1, {0.0, 0.0}));
    for (int i = 0; i <= M; ++i) B[model.initial()][i] = {1.0, 0.0};

    std::vector<std::vector<std::complex<double>>> next(
        d, std::vector<std::complex<double>>(M + 1));
    for (int j = 1; j <= order; ++j) {
        for (int k = 0; k < d; ++k) {
            // integrand f_k(t_i) = g_i sum_p e^{i (E_k - E_p) t_i} O_kp B_p(t_i)
            std::vector<std::complex<double>> f(M + 1);
            for (int i = 0; i <= M; ++i) {
                std::complex<double> s{0.0, 0.0};
                for (int p = 0; p < d; ++p) {
                    const std::complex<double> O_kp = model.observable()(k, p);
                    if (O_kp == std::complex<double>{0.0, 0.0}) continue;
                    s += u[k][i] * std::conj(u[p][i]) * O_kp * B[p][i];
                }
                f[i] = g[i] * s;
            }
            next[k][0] = {0.0, 0.0};
            for (int i = 1; i <= M; ++i)
                next[k][i] = next[k][i - 1] + (0.5 * h) * (f[i - 1] + f[i]);
            for (int i = 0; i <= M; ++i) next[k][i] *= -kI;
        }
        std::swap(B, next);
    }
    return B[target][M];
}

}  // namespace

OracleResult nested_amplitude_oracle(const SystemModel& model, const CouplingSpec& spec, int target,
                                     int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("nested_amplitude_oracle: order must be in {1, 2, 3}");
    if (model.dimension() > 4)
        throw std::invalid_argument("nested_amplitude_oracle: dimension must be <= 4");
    check_target(model, target);

    double omega_max = 0.0;
    for (int j = 0; j < model.dimension(); ++j)
        for (int k = 0; k < model.dimension(); ++k)
            omega_max = std::max(omega_max, std::abs(model.omega(j, k)));

    const int M0 = std::max(512, static_cast<int>(std::ceil(8.0 * omega_max * spec.duration())));
    const std::complex<double> a0 = nested_pass(model, spec, target, order, M0);
    const std::complex<double> a1 = nested_pass(model, spec, target, order, 2 * M0);
    const std::complex<double> a2 = nested_pass(model, spec, target, order, 4 * M0);

    // two Richardson levels on the h^2 trapezoid error
    const std::complex<double> r1 = (4.0 * a1 - a0) / 3.0;
    const std::complex<double> r2 = (4.0 * a2 - a1) / 3.0;
    const std::complex<double> r3 = (16.0 * r2 - r1) / 15.0;

    OracleResult out;
    out.value = r3;
    out.est_error = std::abs(r2 - r1);
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
        throw std::runtime_error("nested_amplitude_oracle: non-finite result");
    return out;
}

double disturbance_probability(const SystemModel& model, const CouplingSpec& spec,
                               AmplitudeTier tier) {
    const int n = model.initial();
    const SeriesCoefficients* coeffs = spec.series_coefficients();
    if (tier == AmplitudeTier::total_leading && spec.is_bump())
        throw std::invalid_argument(
            "disturbance_probability: total_leading tier needs a constant or series coupling");

    double sum = 0.0;
    for (int m = 0; m < model.dimension(); ++m) {
        if (m == n) continue;
        std::complex<double> a;
        if (tier == AmplitudeTier::first_order) {
            a = first_order_amplitude(model, spec, m);
        } else {
            const auto& c = coeffs ? *coeffs : SeriesCoefficients::none();
            a = total_leading_amplitude(model, c, spec.duration(), m);
        }
        sum += std::norm(a);
    }
    return sum;
}

AmplitudeSet compute_amplitudes(const SystemModel& model, const CouplingSpec& spec, int max_order,
                                AmplitudeTier disturbance_tier) {
    AmplitudeSet set;
    set.disturbance_tier = disturbance_tier;
    const int n = model.initial();
    const bool has_leading = !spec.is_bump();
    const SeriesCoefficients* coeffs = spec.series_coefficients();
    const auto& c = coeffs ? *coeffs : SeriesCoefficients::none();

    for (int m = 0; m < model.dimension(); ++m) {
        if (m == n) continue;
        set.first_order[m] = first_order_amplitude(model, spec, m);
        if (!has_leading) continue;
        set.leading_by_order[{m, 1}] = leading_order_first(model, c, spec.duration(), m);
        for (int ell = 2; ell <= max_order; ++ell)
            set.leading_by_order[{m, ell}] = leading_order_higher(model, c, spec.duration(), m, ell);
        set.total_leading[m] = total_leading_amplitude(model, c, spec.duration(), m);
    }
    set.disturbance = disturbance_probability(model, spec, disturbance_tier);
    return set;
}

}  // namespace protmeas
