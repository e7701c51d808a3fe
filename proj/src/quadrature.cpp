#include "protmeas/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace protmeas {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 15, rel_tol, &error);
    if (!std::isfinite(value)) throw QuadratureError("integrate_adaptive: non-finite result");
    return {value, error};
}

namespace {

// One pass of composite Gauss-Legendre with `panels` uniform panels.
std::complex<double> gl_pass(const std::function<double(double)>& f, double a, double b,
                             double omega, int panels) {
    using gauss = boost::math::quadrature::gauss<double, 24>;
    const auto& xs = gauss::abscissa();  // nonnegative half of the nodes
    const auto& ws = gauss::weights();

    const double width = (b - a) / panels;
    std::complex<double> acc{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
        const double mid = a + width * (p + 0.5);
        const double half = 0.5 * width;
        std::complex<double> panel{0.0, 0.0};
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double dt = half * xs[k];
            for (const double t : {mid - dt, mid + dt}) {
                panel += ws[k] * f(t) * std::complex<double>(std::cos(omega * t),
                                                             std::sin(omega * t));
                if (xs[k] == 0.0) break;  // center node appears once
            }
        }
        acc += half * panel;
    }
    return acc;
}

}  // namespace

OscillatoryResult integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                                        double omega, int min_panels) {
    // Panel width <= half an oscillation period; 24 Gauss nodes per panel
    // gives 48 nodes per period.
    const double span = b - a;
    const double periods = std::abs(omega) * span / (2.0 * std::numbers::pi);
    const int panels = std::max(min_panels, static_cast<int>(std::ceil(2.0 * periods)));

    const std::complex<double> coarse = gl_pass(f, a, b, omega, panels);
    const std::complex<double> fine = gl_pass(f, a, b, omega, 2 * panels);
    return {fine, std::abs(fine - coarse)};
}

}  // namespace protmeas
