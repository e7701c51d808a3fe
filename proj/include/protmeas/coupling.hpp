// coupling.hpp — the three coupling-function families g(t) on [0, T]
#pragma once

#include "protmeas/rationals.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace protmeas {

struct MeasurementWindow {
    double duration;  // T
    explicit MeasurementWindow(double T);
};

// g(t) = 1/T on [0, T]
struct ConstantShape {};

// g(t) = (1/T) (1 + sum_n a_n f_n(t)),  f_n(t) = (-1)^{n+1} cos(2 pi n (t - T/2)/T)
struct SeriesShape {
    SeriesCoefficients coefficients;
};

// g(t) = c^{-1} exp(-beta [1 - (2t/T - 1)^2]^{1-alpha}),  0 < t < T
struct BumpShape {
    int alpha;             // >= 2
    int beta;              // >= 1
    double normalization;  // c_{alpha beta}, units of time
};

using CouplingShape = std::variant<ConstantShape, SeriesShape, BumpShape>;

class CouplingSpec {
public:
    static CouplingSpec constant(MeasurementWindow window);
    static CouplingSpec series(MeasurementWindow window, SeriesCoefficients coefficients);
    static CouplingSpec series(MeasurementWindow window, int order);
    static CouplingSpec bump(MeasurementWindow window, int alpha, int beta);

    double duration() const noexcept { return window_.duration; }
    const MeasurementWindow& window() const noexcept { return window_; }
    const CouplingShape& shape() const noexcept { return shape_; }

    bool is_constant() const noexcept;
    bool is_bump() const noexcept;
    // nullptr unless the shape is a sinusoidal series
    const SeriesCoefficients* series_coefficients() const noexcept;

    std::string label() const;  // "constant", "series N=2", "bump(2,1)"

private:
    CouplingSpec(MeasurementWindow window, CouplingShape shape);
    MeasurementWindow window_;
    CouplingShape shape_;
};

// g(t); zero outside [0, T]. The bump branch returns exactly 0 whenever the
// support factor 1 - (2t/T - 1)^2 is at or below machine epsilon.
double eval_coupling(const CouplingSpec& spec, double t);

// c_{alpha beta} = int_0^T exp(-beta [1 - (2t/T-1)^2]^{1-alpha}) dt,
// adaptive quadrature to 1e-12 relative.
double bump_normalization(int alpha, int beta, const MeasurementWindow& window);

// Uniform grid over [0, T] inclusive; count >= 2.
std::vector<std::pair<double, double>> coupling_samples(const CouplingSpec& spec, int count);

}  // namespace protmeas
