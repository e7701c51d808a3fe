// rationals.hpp — exact rational solution of the sinusoidal-series coefficient conditions
#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace protmeas {

// Coefficients a_1..a_N of the sinusoidal-series coupling, determined by
//
//   sum_n a_n         = 1
//   sum_n a_n n^{2k}  = 0   for k = 1 .. N-1.
//
// The matrix is a Vandermonde system in n^2: nonsingular for every N, but so
// ill-conditioned in floating point that the solve is done in exact rational
// arithmetic (GMP) and converted to double only afterwards.
class SeriesCoefficients {
public:
    // Solve the N x N condition system exactly. Throws std::invalid_argument
    // for order < 1.
    static SeriesCoefficients solve(int order);

    // Empty coefficient set: represents the constant coupling g = 1/T in
    // spectral formulas (no sinusoidal components).
    static SeriesCoefficients none();

    int order() const noexcept { return static_cast<int>(exact_.size()); }
    bool empty() const noexcept { return exact_.empty(); }

    const std::vector<mpq_class>& exact() const noexcept { return exact_; }
    const std::vector<double>& values() const noexcept { return values_; }

    // sum_n a_n n^{2k}, exact. moment(0) is the coefficient sum.
    mpq_class moment(int k) const;
    double moment_d(int k) const;

    // "4/3", "-1/3", ... (canonical GMP form)
    std::vector<std::string> to_strings() const;

private:
    SeriesCoefficients() = default;
    explicit SeriesCoefficients(std::vector<mpq_class> exact);

    std::vector<mpq_class> exact_;
    std::vector<double> values_;
};

}  // namespace protmeas
