#include "protmeas/spectral.hpp"

#include "protmeas/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace protmeas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCancellationFloor = 1e-13;
constexpr double kResonanceGuard = 1e-6;

std::complex<double> phase(double arg) { return {std::cos(arg), std::sin(arg)}; }

}  // namespace

CancellationLimit::CancellationLimit(double omega_t_, double magnitude_)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "quadrature_spectrum: |G| = " << magnitude_ << " at omega_t = " << omega_t_
             << " is below the double-precision cancellation floor " << kCancellationFloor;
          return os.str();
      }()),
      omega_t(omega_t_),
      magnitude(magnitude_) {}

std::complex<double> analytic_spectrum(const SeriesCoefficients& coefficients, double omega_t) {
    if (omega_t == 0.0) throw std::invalid_argument("analytic_spectrum: omega_t must be nonzero");
    if (omega_t < 0.0) return std::conj(analytic_spectrum(coefficients, -omega_t));

    const double x = omega_t;
    const int N = coefficients.order();
    const std::complex<double> pref = 2.0 * phase(x / 2.0) * std::sin(x / 2.0) / x;
    if (N == 0) return pref;

    if (x > 4.0 * std::numbers::pi * N) {
        // Tail regime: the direct bracket cancels catastrophically, but its
        // power series in 1/(wT) with exact moments M_k = sum a_n n^{2k} is
        // stable at any depth (M_k vanishes exactly for k < N).
        const double r2 = (kTwoPi / x) * (kTwoPi / x);
        double bracket = 0.0;
        double rpow = std::pow(r2, N);
        for (int k = N; k <= N + 64; ++k) {
            const double term = rpow * coefficients.moment_d(k);
            bracket -= term;
            if (std::abs(term) <= 1e-30 * std::abs(bracket) || rpow == 0.0) break;
            rpow *= r2;
        }
        return pref * bracket;
    }

    // Direct form, each term evaluated in a resonance-stable way: the n-th
    // term is -a_n e^{ix/2} sin(x/2) 2x / (x^2 - (2 pi n)^2), which near
    // x = 2 pi n becomes -a_n e^{ix/2} (-1)^n [sin(d/2)/d] 2x / (4 pi n + d)
    // with d = x - 2 pi n (limit -a_n/2 at resonance).
    std::complex<double> total = pref;
    const auto& a = coefficients.values();
    for (int n = 1; n <= N; ++n) {
        const double xn = kTwoPi * n;
        const double d = x - xn;
        std::complex<double> term;
        if (std::abs(d) < kResonanceGuard) {
            const double sinc_half = (d == 0.0) ? 0.5 : std::sin(d / 2.0) / d;
            const double parity = (n % 2 == 0) ? 1.0 : -1.0;
            term = -a[n - 1] * phase(x / 2.0) * parity * sinc_half * (2.0 * x) / (4.0 * std::numbers::pi * n + d);
        } else {
            term = -a[n - 1] * phase(x / 2.0) * std::sin(x / 2.0) * (2.0 * x) / ((x - xn) * (x + xn));
        }
        total += term;
    }
    return total;
}

std::complex<double> truncated_power_series(const SeriesCoefficients& coefficients, double omega_t,
                                            int k_max) {
    const double x = omega_t;
    const int N = coefficients.order();
    if (!(x > kTwoPi * N))
        throw std::domain_error("truncated_power_series: omega_t inside the convergence radius");
    if (k_max < 0) throw std::invalid_argument("truncated_power_series: k_max must be >= 0");

    const std::complex<double> pref = 2.0 * phase(x / 2.0) * std::sin(x / 2.0) / x;
    const double r2 = (kTwoPi / x) * (kTwoPi / x);
    double sum = 0.0;
    double rpow = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        sum += rpow * coefficients.moment_d(k);
        rpow *= r2;
    }
    return pref * (1.0 - sum);
}

SpectrumValue quadrature_spectrum_unchecked(const CouplingSpec& spec, double omega_t) {
    const double T = spec.duration();
    const double omega = omega_t / T;
    auto f = [&spec](double t) { return eval_coupling(spec, t); };
    const auto r = integrate_oscillatory(f, 0.0, T, omega);
    return {r.value, r.abs_error};
}

SpectrumValue quadrature_spectrum(const CouplingSpec& spec, double omega_t) {
    auto v = quadrature_spectrum_unchecked(spec, omega_t);
    if (v.abs_error > kCancellationFloor) {
        // one refinement pass before giving up
        const double T = spec.duration();
        auto f = [&spec](double t) { return eval_coupling(spec, t); };
        const auto r = integrate_oscillatory(f, 0.0, T, omega_t / T, 128);
        v = {r.value, r.abs_error};
        if (v.abs_error > kCancellationFloor)
            throw QuadratureError("quadrature_spectrum: error estimate above 1e-13");
    }
    if (std::abs(v.value) < kCancellationFloor)
        throw CancellationLimit(omega_t, std::abs(v.value));
    return v;
}

Envelope envelope_extract(const SpectralCurve& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 8) throw UndersampledCurve("envelope_extract: fewer than 8 points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].omega_t <= 0.0)
            throw std::invalid_argument("envelope_extract: omega_t values must be > 0");
        if (i > 0 && pts[i].omega_t <= pts[i - 1].omega_t)
            throw std::invalid_argument("envelope_extract: omega_t must be strictly increasing");
    }

    const double x0 = pts.front().omega_t;
    const double x1 = pts.back().omega_t;
    if (x1 - x0 < kTwoPi)
        throw UndersampledCurve("envelope_extract: curve spans less than one 2 pi window");

    Envelope env;
    env.source = curve.source;
    std::size_t i = 0;
    for (int w = 0; x0 + kTwoPi * (w + 1) <= x1 + 1e-12; ++w) {
        const double lo = x0 + kTwoPi * w;
        const double hi = lo + kTwoPi;
        double best = 0.0;
        int count = 0;
        while (i < pts.size() && pts[i].omega_t < hi) {
            if (pts[i].omega_t >= lo) {
                best = std::max(best, std::abs(pts[i].value));
                ++count;
            }
            ++i;
        }
        if (count < 8) {
            std::ostringstream os;
            os << "envelope_extract: window [" << lo << ", " << hi << ") holds " << count
               << " points (< 8)";
            throw UndersampledCurve(os.str());
        }
        env.points.push_back({0.5 * (lo + hi), best});
    }
    return env;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& u, const std::vector<double>& y) {
    const auto n = static_cast<double>(u.size());
    double su = 0.0, sy = 0.0, suu = 0.0, suy = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i];
        sy += y[i];
        suu += u[i] * u[i];
        suy += u[i] * y[i];
    }
    const double det = n * suu - su * su;
    if (det == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
    LineFit f;
    f.slope = (n * suy - su * sy) / det;
    f.intercept = (sy - f.slope * su) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = y[i] - (f.slope * u[i] + f.intercept);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

void collect_fit_points(const Envelope& envelope, FitRange range, std::vector<double>& xs,
                        std::vector<double>& ms) {
    for (const auto& p : envelope.points) {
        if (p.omega_t < range.lo || p.omega_t > range.hi) continue;
        if (!(p.magnitude > 0.0))
            throw std::invalid_argument("fit: nonpositive magnitude in fit range");
        xs.push_back(p.omega_t);
        ms.push_back(p.magnitude);
    }
    if (xs.size() < 10)
        throw std::invalid_argument("fit: fewer than 10 envelope points in fit range");
}

}  // namespace

DecayFit fit_power_law(const Envelope& envelope, FitRange range) {
    std::vector<double> xs, ms;
    collect_fit_points(envelope, range, xs, ms);
    std::vector<double> u(xs.size()), y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        u[i] = std::log(xs[i]);
        y[i] = std::log(ms[i]);
    }
    const auto f = least_squares(u, y);
    DecayFit fit;
    fit.model = DecayModel::power_law;
    fit.exponent = f.slope;
    fit.amplitude = std::exp(f.intercept);
    fit.residual = f.rms;
    fit.range = range;
    return fit;
}

DecayFit fit_subexponential(const Envelope& envelope, int alpha, FitRange range) {
    if (alpha < 2) throw std::invalid_argument("fit_subexponential: alpha must be >= 2");
    std::vector<double> xs, ms;
    collect_fit_points(envelope, range, xs, ms);
    const double stretch = (alpha - 1.0) / alpha;
    const double pre = (alpha + 1.0) / (2.0 * alpha);
    std::vector<double> u(xs.size()), y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        u[i] = std::pow(xs[i], stretch);
        y[i] = std::log(ms[i]) + pre * std::log(xs[i]);
    }
    const auto f = least_squares(u, y);
    DecayFit fit;
    fit.model = DecayModel::subexponential;
    fit.stretch = stretch;
    fit.rate = -f.slope;
    fit.prefactor_exponent = pre;
    fit.amplitude = std::exp(f.intercept);
    fit.residual = f.rms;
    fit.range = range;
    return fit;
}

double asymptotic_bump_envelope(int alpha, double rate, double prefactor, double omega_t) {
    const double stretch = (alpha - 1.0) / alpha;
    const double pre = (alpha + 1.0) / (2.0 * alpha);
    return prefactor * std::pow(omega_t, -pre) * std::exp(-rate * std::pow(omega_t, stretch));
}

std::vector<double> window_grid(double lo, double hi, int per_window) {
    if (!(hi > lo) || lo <= 0.0) throw std::invalid_argument("window_grid: need 0 < lo < hi");
    if (per_window < 8) throw std::invalid_argument("window_grid: per_window must be >= 8");
    const double step = kTwoPi / per_window;
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>((hi - lo) / step) + 2);
    for (double x = lo; x <= hi; x += step) xs.push_back(x);
    return xs;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(hi > lo) || lo <= 0.0) throw std::invalid_argument("log_grid: need 0 < lo < hi");
    if (n < 2) throw std::invalid_argument("log_grid: need n >= 2");
    std::vector<double> xs(n);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i) xs[i] = lo * std::exp(ratio * i / (n - 1));
    return xs;
}

SpectralCurve sample_series_spectrum(const SeriesCoefficients& coefficients,
                                     const std::vector<double>& omega_ts, std::string source) {
    SpectralCurve curve;
    curve.source = std::move(source);
    curve.points.reserve(omega_ts.size());
    for (const double x : omega_ts) curve.points.push_back({x, analytic_spectrum(coefficients, x)});
    return curve;
}

SpectralCurve sample_quadrature_spectrum(const CouplingSpec& spec,
                                         const std::vector<double>& omega_ts) {
    SpectralCurve curve;
    curve.source = spec.label();
    curve.points.reserve(omega_ts.size());
    for (const double x : omega_ts) curve.points.push_back({x, quadrature_spectrum(spec, x).value});
    return curve;
}

Envelope certified_bump_envelope(const CouplingSpec& bump_spec, double lo, double hi,
                                 int per_window) {
    SpectralCurve curve;
    curve.source = bump_spec.label();
    for (const double x : window_grid(lo, hi, per_window)) {
        const auto v = quadrature_spectrum_unchecked(bump_spec, x);
        // stop where certification ends: magnitude within an order of the
        // cancellation floor, or error estimate above it
        if (std::abs(v.value) < 10.0 * kCancellationFloor || v.abs_error > kCancellationFloor)
            break;
        curve.points.push_back({x, v.value});
    }
    return envelope_extract(curve);
}

CrossoverResult find_crossover(int series_order, int alpha, int beta, double search_max) {
    const MeasurementWindow window(1.0);
    const auto bump = CouplingSpec::bump(window, alpha, beta);
    const auto coeffs = SeriesCoefficients::solve(series_order);

    const double lo = 8.0 * std::numbers::pi;  // past the main lobe
    const int per_window = 16;

    const Envelope bump_env = certified_bump_envelope(bump, lo, search_max, per_window);
    if (bump_env.points.size() < 12)
        throw std::runtime_error("find_crossover: certified bump envelope too short");
    const double cert_end = bump_env.points.back().omega_t + std::numbers::pi;

    // exact series envelope over the full search range
    const auto series_curve =
        sample_series_spectrum(coeffs, window_grid(lo, search_max, per_window), "series");
    const Envelope series_env = envelope_extract(series_curve);

    // calibrate the asymptotic bump form on the upper half of the certified data
    const double cal_lo = std::max(lo + kTwoPi, 0.5 * cert_end);
    const auto cal = fit_subexponential(bump_env, alpha, {cal_lo, cert_end});

    // Bump envelope per series window: certified data where it exists (the
    // window grids coincide by construction), asymptotic extrapolation beyond.
    const std::size_t n = series_env.points.size();
    std::vector<double> bump_mag(n);
    std::vector<bool> cert(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < bump_env.points.size()) {
            bump_mag[i] = bump_env.points[i].magnitude;
            cert[i] = true;
        } else {
            bump_mag[i] =
                asymptotic_bump_envelope(alpha, cal.rate, cal.amplitude, series_env.points[i].omega_t);
        }
    }

    std::ptrdiff_t last_at_or_above = -1;
    for (std::size_t i = 0; i < n; ++i)
        if (bump_mag[i] >= series_env.points[i].magnitude)
            last_at_or_above = static_cast<std::ptrdiff_t>(i);
    const auto star = static_cast<std::size_t>(last_at_or_above + 1);
    if (star >= n) throw std::runtime_error("find_crossover: no crossover below search_max");

    CrossoverResult r;
    r.omega_t_star = series_env.points[star].omega_t;
    r.certified = cert[star] && (last_at_or_above < 0 || cert[last_at_or_above]);
    r.bump_at_star = bump_mag[star];
    r.series_at_star = series_env.points[star].magnitude;
    return r;
}

}  // namespace protmeas
