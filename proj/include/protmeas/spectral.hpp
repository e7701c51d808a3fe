// spectral.hpp — Fourier transforms G(wT) of coupling functions, envelopes, decay fits
#pragma once

#include "protmeas/coupling.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace protmeas {

// |G| fell below the double-precision cancellation floor (1e-13): the
// oscillatory integral cancels to a value quadrature cannot certify.
class CancellationLimit : public std::runtime_error {
public:
    explicit CancellationLimit(double omega_t, double magnitude);
    double omega_t;
    double magnitude;
};

class UndersampledCurve : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpectralPoint {
    double omega_t;
    std::complex<double> value;
};

struct SpectralCurve {
    std::vector<SpectralPoint> points;  // omega_t strictly increasing, > 0
    std::string source;                 // label of the originating CouplingSpec
};

struct EnvelopePoint {
    double omega_t;
    double magnitude;
};

struct Envelope {
    std::vector<EnvelopePoint> points;
    std::string source;
};

// Closed-form G(wT) for constant (empty coefficients) and sinusoidal-series
// couplings. Within 1e-6 of a resonance wT = 2 pi n the removable-singularity
// form of the n-th term is used; far in the tail (wT > 4 pi N) the bracket is
// evaluated from its power series with exact moments, which is free of the
// catastrophic cancellation the direct form suffers there.
std::complex<double> analytic_spectrum(const SeriesCoefficients& coefficients, double omega_t);

struct SpectrumValue {
    std::complex<double> value{0.0, 0.0};
    double abs_error = 0.0;
};

// G(wT) = int_0^T e^{i w t} g(t) dt by oscillatory panel quadrature.
// Accepts any sign of omega_t (negative frequencies arise for downward
// transitions). Throws CancellationLimit when |G| < 1e-13.
SpectrumValue quadrature_spectrum(const CouplingSpec& spec, double omega_t);

// Same, without the cancellation guard: returns whatever the panels give.
// Used internally to detect where the certified window ends.
SpectrumValue quadrature_spectrum_unchecked(const CouplingSpec& spec, double omega_t);

// Power series of G(wT) in 1/(wT), truncated at k = k_max. Valid only for
// omega_t > 2 pi N; throws std::domain_error inside the convergence radius.
std::complex<double> truncated_power_series(const SeriesCoefficients& coefficients, double omega_t,
                                            int k_max);

// Oscillation-free envelope: the maximum of |G| over consecutive windows of
// width 2 pi in wT, one output point per window (at the window center).
// Throws UndersampledCurve if any window holds fewer than 8 samples.
Envelope envelope_extract(const SpectralCurve& curve);

struct FitRange {
    double lo = 0.0;
    double hi = 0.0;
};

enum class DecayModel { power_law, subexponential };

struct DecayFit {
    DecayModel model = DecayModel::power_law;
    double exponent = 0.0;            // power law: slope of log|G| vs log wT
    double stretch = 0.0;             // subexponential: (alpha-1)/alpha
    double rate = 0.0;                // subexponential: gamma
    double prefactor_exponent = 0.0;  // subexponential: (alpha+1)/(2 alpha)
    double amplitude = 0.0;           // e^{intercept}; multiplicative prefactor
    double residual = 0.0;            // RMS residual in log magnitude
    FitRange range;
    bool extrapolated = false;
};

// Least-squares line in (log wT, log magnitude). Needs >= 10 points in range,
// all magnitudes positive.
DecayFit fit_power_law(const Envelope& envelope, FitRange range);

// Least-squares fit of log m + ((alpha+1)/2alpha) log wT against wT^{(alpha-1)/alpha};
// the rate is minus the slope.
DecayFit fit_subexponential(const Envelope& envelope, int alpha, FitRange range);

// prefactor * wT^{-(alpha+1)/(2 alpha)} * exp(-rate * wT^{(alpha-1)/alpha}).
// Extends bump envelopes beyond the certified quadrature window; callers must
// label such values as extrapolation.
double asymptotic_bump_envelope(int alpha, double rate, double prefactor, double omega_t);

// Sampling helpers -----------------------------------------------------------

// Linear grid tiling [lo, hi] with `per_window` samples per 2 pi window.
std::vector<double> window_grid(double lo, double hi, int per_window);

// Log-spaced grid with n points, lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

SpectralCurve sample_series_spectrum(const SeriesCoefficients& coefficients,
                                     const std::vector<double>& omega_ts, std::string source);

SpectralCurve sample_quadrature_spectrum(const CouplingSpec& spec,
                                         const std::vector<double>& omega_ts);

// Bump envelope from certified quadrature only: sampling stops at the first
// window whose points hit the cancellation limit.
Envelope certified_bump_envelope(const CouplingSpec& bump_spec, double lo, double hi,
                                 int per_window = 16);

// Crossover search -----------------------------------------------------------

struct CrossoverResult {
    double omega_t_star = 0.0;  // first window center from which the bump
                                // envelope stays below the series envelope
    bool certified = false;     // located with certified quadrature only
    double bump_at_star = 0.0;
    double series_at_star = 0.0;
};

// Locates where the Bump(alpha,beta) envelope drops below the order-N series
// envelope for good. Searches the certified quadrature window first; beyond
// it, compares the calibrated asymptotic bump envelope (extrapolation) against
// the exact series envelope. Throws std::runtime_error if no crossover is
// found below search_max.
CrossoverResult find_crossover(int series_order, int alpha, int beta, double search_max = 2.0e4);

}  // namespace protmeas
