#include "protmeas/coupling.hpp"

#include "protmeas/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace protmeas {

MeasurementWindow::MeasurementWindow(double T) : duration(T) {
    if (!(T > 0.0)) throw std::invalid_argument("MeasurementWindow: duration must be > 0");
}

CouplingSpec::CouplingSpec(MeasurementWindow window, CouplingShape shape)
    : window_(window), shape_(std::move(shape)) {}

CouplingSpec CouplingSpec::constant(MeasurementWindow window) {
    return {window, ConstantShape{}};
}

CouplingSpec CouplingSpec::series(MeasurementWindow window, SeriesCoefficients coefficients) {
    if (coefficients.empty())
        throw std::invalid_argument("CouplingSpec::series: empty coefficient set");
    return {window, SeriesShape{std::move(coefficients)}};
}

CouplingSpec CouplingSpec::series(MeasurementWindow window, int order) {
    return series(window, SeriesCoefficients::solve(order));
}

CouplingSpec CouplingSpec::bump(MeasurementWindow window, int alpha, int beta) {
    if (alpha < 2) throw std::invalid_argument("CouplingSpec::bump: alpha must be >= 2");
    if (beta < 1) throw std::invalid_argument("CouplingSpec::bump: beta must be >= 1");
    const double c = bump_normalization(alpha, beta, window);
    return {window, BumpShape{alpha, beta, c}};
}

bool CouplingSpec::is_constant() const noexcept {
    return std::holds_alternative<ConstantShape>(shape_);
}

bool CouplingSpec::is_bump() const noexcept { return std::holds_alternative<BumpShape>(shape_); }

const SeriesCoefficients* CouplingSpec::series_coefficients() const noexcept {
    if (const auto* s = std::get_if<SeriesShape>(&shape_)) return &s->coefficients;
    return nullptr;
}

std::string CouplingSpec::label() const {
    if (is_constant()) return "constant";
    if (const auto* s = series_coefficients()) return "series N=" + std::to_string(s->order());
    const auto& b = std::get<BumpShape>(shape_);
    return "bump(" + std::to_string(b.alpha) + "," + std::to_string(b.beta) + ")";
}

namespace {

// exp(-beta u^{1-alpha}) with u = 1 - (2t/T - 1)^2; clamped to 0 at and below
// machine epsilon in u, where the true limit is 0 and exp underflows anyway.
double bump_raw(double t, double T, int alpha, int beta) {
    const double s = 2.0 * t / T - 1.0;
    const double u = (1.0 - s) * (1.0 + s);
    if (u <= std::numeric_limits<double>::epsilon()) return 0.0;
    return std::exp(-static_cast<double>(beta) * std::pow(u, 1.0 - alpha));
}

}  // namespace

double eval_coupling(const CouplingSpec& spec, double t) {
    const double T = spec.duration();
    if (t < 0.0 || t > T) return 0.0;

    if (spec.is_constant()) return 1.0 / T;

    if (const auto* coeffs = spec.series_coefficients()) {
        double s = 1.0;
        const auto& a = coeffs->values();
        for (int n = 1; n <= static_cast<int>(a.size()); ++n) {
            const double f = std::cos(2.0 * std::numbers::pi * n * (t - T / 2.0) / T);
            s += a[n - 1] * ((n % 2 == 1) ? f : -f);
        }
        return s / T;
    }

    const auto& b = std::get<BumpShape>(spec.shape());
    return bump_raw(t, T, b.alpha, b.beta) / b.normalization;
}

double bump_normalization(int alpha, int beta, const MeasurementWindow& window) {
    if (alpha < 2) throw std::invalid_argument("bump_normalization: alpha must be >= 2");
    if (beta < 1) throw std::invalid_argument("bump_normalization: beta must be >= 1");
    const double T = window.duration;
    // c scales linearly in T; integrate on [0, 1] and scale.
    auto f = [alpha, beta](double t) { return bump_raw(t, 1.0, alpha, beta); };
    const auto r = integrate_adaptive(f, 0.0, 1.0, 1e-13);
    if (r.value <= 0.0 || r.abs_error > 1e-12 * r.value)
        throw QuadratureError("bump_normalization: 1e-12 relative tolerance not reached");
    return T * r.value;
}

std::vector<std::pair<double, double>> coupling_samples(const CouplingSpec& spec, int count) {
    if (count < 2) throw std::invalid_argument("coupling_samples: count must be >= 2");
    const double T = spec.duration();
    std::vector<std::pair<double, double>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double t = T * static_cast<double>(i) / static_cast<double>(count - 1);
        out.emplace_back(t, eval_coupling(spec, t));
    }
    return out;
}

}  // namespace protmeas
