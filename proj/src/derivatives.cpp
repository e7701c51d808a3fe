#include "protmeas/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace protmeas {

namespace {

// Fornberg weights for the m-th derivative at z from nodes xs.
std::vector<double> fd_weights(const std::vector<double>& xs, double z, int m) {
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    c[0][0] = 1.0;
    double c1 = 1.0;
    double c4 = xs[0] - z;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

// One-sided j-th derivative at the boundary using p interior nodes at
// spacing h: nodes h, 2h, ..., ph measured into the support.
double one_sided(const CouplingSpec& spec, int j, double h, int p, bool at_start) {
    const double T = spec.duration();
    std::vector<double> xs(p);
    for (int i = 0; i < p; ++i) xs[i] = (i + 1) * h;
    const auto w = fd_weights(xs, 0.0, j);
    double acc = 0.0;
    for (int i = 0; i < p; ++i) {
        const double t = at_start ? xs[i] : T - xs[i];
        acc += w[i] * eval_coupling(spec, t);
    }
    // mirroring flips the sign of odd derivatives
    if (!at_start && (j % 2 == 1)) acc = -acc;
    return acc;
}

struct HalvingResult {
    double value = 0.0;
    double error = 0.0;
    bool reliable = false;
};

HalvingResult richardson_halving(const CouplingSpec& spec, int j, int p, bool at_start) {
    const double T = spec.duration();
    // keep the whole stencil within the first half of the support
    double h = T / (2.0 * (p + 1));
    std::vector<double> values;
    for (int level = 0; level < 14; ++level) {
        values.push_back(one_sided(spec, j, h, p, at_start));
        h *= 0.5;
    }
    HalvingResult best;
    double first_diff = -1.0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double diff = std::abs(values[i] - values[i - 1]);
        if (first_diff < 0.0) first_diff = diff;
        if (diff < best_err) {
            best_err = diff;
            best.value = values[i];
            best.error = diff;
        }
    }
    // converged if the differences dropped clearly below the first one, or if
    // everything already agrees at a negligible absolute level
    const double scale = std::max(1.0, std::abs(best.value));
    best.reliable = (best_err <= 0.25 * first_diff) || (best_err <= 1e-10 * scale);
    return best;
}

}  // namespace

EndpointDerivatives endpoint_derivative_analytic(const CouplingSpec& spec, int order) {
    if (order < 0) throw std::invalid_argument("endpoint_derivative: order must be >= 0");
    if (spec.is_bump())
        throw std::invalid_argument("endpoint_derivative_analytic: no closed form for bumps");
    const double T = spec.duration();

    if (spec.is_constant()) {
        const double v = (order == 0) ? 1.0 / T : 0.0;
        return {v, v, 0.0, true};
    }

    const auto& coeffs = *spec.series_coefficients();
    if (order % 2 == 1) return {0.0, 0.0, 0.0, true};  // odd orders vanish by symmetry

    // d^j f_n at either endpoint is -(-1)^{j/2} (2 pi n / T)^j, so
    // g^{(j)}(0+) = g^{(j)}(T-) = -(-1)^{j/2} (2 pi / T)^j (1/T) sum_n a_n n^j,
    // plus the constant part for j = 0. The sum is the exact rational moment
    // of order j/2: evaluating it exactly keeps the vanishing orders exactly
    // zero instead of round-off sized.
    const int half = order / 2;
    const double s = coeffs.moment_d(half);
    const double sign = (half % 2 == 0) ? -1.0 : 1.0;
    double v = sign * std::pow(2.0 * std::numbers::pi / T, order) * s / T;
    if (order == 0) v = (1.0 - s) / T;  // g(0) = (1 - sum a_n)/T, zero for the solved set
    return {v, v, 0.0, true};
}

EndpointDerivatives endpoint_derivative_fd(const CouplingSpec& spec, int order) {
    if (order < 0) throw std::invalid_argument("endpoint_derivative: order must be >= 0");
    const int p = order + 8;  // stencil accuracy order 8
    const auto start = richardson_halving(spec, order, p, true);
    const auto end = richardson_halving(spec, order, p, false);
    return {start.value, end.value, std::max(start.error, end.error),
            start.reliable && end.reliable};
}

EndpointDerivatives endpoint_derivative(const CouplingSpec& spec, int order) {
    if (spec.is_bump()) return endpoint_derivative_fd(spec, order);
    return endpoint_derivative_analytic(spec, order);
}

}  // namespace protmeas
