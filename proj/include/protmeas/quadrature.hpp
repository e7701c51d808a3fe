// quadrature.hpp — adaptive and oscillatory quadrature engines
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace protmeas {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
};

// Adaptive Gauss-Kronrod on [a, b]. Throws QuadratureError if the requested
// relative tolerance cannot be met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol);

struct OscillatoryResult {
    std::complex<double> value{0.0, 0.0};
    double abs_error = 0.0;
};

// int_a^b f(t) e^{i omega t} dt by fixed panels of width <= half an
// oscillation period, Gauss-Legendre nodes per panel (>= 16 nodes per period).
// The error estimate comes from doubling the panel count.
OscillatoryResult integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                                        double omega, int min_panels = 32);

}  // namespace protmeas
