// perturbation.hpp — transition amplitudes and state disturbance (hbar = 1)
#pragma once

#include "protmeas/coupling.hpp"
#include "protmeas/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace protmeas {

// Nondegenerate energies E_k, Hermitian observable O, initial eigenstate |n>.
class SystemModel {
public:
    SystemModel(std::vector<double> energies, Eigen::MatrixXcd observable, int initial_index);

    int dimension() const noexcept { return static_cast<int>(energies_.size()); }
    int initial() const noexcept { return initial_; }
    double energy(int k) const { return energies_.at(k); }
    const std::vector<double>& energies() const noexcept { return energies_; }
    // omega_{mk} = E_m - E_k
    double omega(int m, int k) const { return energies_.at(m) - energies_.at(k); }
    const Eigen::MatrixXcd& observable() const noexcept { return observable_; }

private:
    std::vector<double> energies_;
    Eigen::MatrixXcd observable_;
    int initial_;
};

// First-order amplitude A_m^{(1)} = -i O_mn G(w_mn T): analytic spectrum for
// constant/series shapes, oscillatory quadrature for bumps.
std::complex<double> first_order_amplitude(const SystemModel& model, const CouplingSpec& spec,
                                           int target);

// Leading order of A_m^{(1)} in 1/(wT) for the solved coefficient set:
//   2i O_mn e^{i wT/2} sin(wT/2) (2 pi)^{2N} (sum_n a_n n^{2N}) (wT)^{-(2N+1)},
// with the empty set standing for the constant coupling (kernel -1/wT).
std::complex<double> leading_order_first(const SystemModel& model,
                                         const SeriesCoefficients& coefficients, double T,
                                         int target);

// Leading order of the ell-th perturbative correction (ell >= 2):
//   -(-i)^ell (i O_mn/(ell-1)!) [O_mm^{ell-1} - O_nn^{ell-1} e^{i wT}] K(wT).
std::complex<double> leading_order_higher(const SystemModel& model,
                                          const SeriesCoefficients& coefficients, double T,
                                          int target, int order);

// Closed-form resummation of the leading orders over all ell:
//   2i O_mn e^{i wT/2} sin{ (wT/2) [1 + chi_mn] } K(wT),
// chi_mn = (O_mm - O_nn)/(wT). An overall phase is dropped, so only the
// magnitude is comparable across tiers.
std::complex<double> total_leading_amplitude(const SystemModel& model,
                                             const SeriesCoefficients& coefficients, double T,
                                             int target);

struct OracleResult {
    std::complex<double> value{0.0, 0.0};
    double est_error = 0.0;
};

// Brute-force evaluation of the ell-fold time-ordered nested integral
// (ell <= 3, small dimension) on refined tensor grids with Richardson
// extrapolation. Serves as the independent check of the closed forms.
OracleResult nested_amplitude_oracle(const SystemModel& model, const CouplingSpec& spec, int target,
                                     int order);

enum class AmplitudeTier { first_order, total_leading };

// sum_{m != n} |A_m|^2 for the selected tier.
double disturbance_probability(const SystemModel& model, const CouplingSpec& spec,
                               AmplitudeTier tier);

struct AmplitudeSet {
    std::map<int, std::complex<double>> first_order;
    std::map<std::pair<int, int>, std::complex<double>> leading_by_order;  // (m, ell)
    std::map<int, std::complex<double>> total_leading;
    double disturbance = 0.0;
    AmplitudeTier disturbance_tier = AmplitudeTier::first_order;
};

// Collects all amplitude tiers up to max_order (leading tiers only for
// constant/series shapes).
AmplitudeSet compute_amplitudes(const SystemModel& model, const CouplingSpec& spec, int max_order,
                                AmplitudeTier disturbance_tier);

}  // namespace protmeas
