// derivatives.hpp — one-sided endpoint derivatives of coupling functions
#pragma once

#include "protmeas/coupling.hpp"

namespace protmeas {

struct EndpointDerivatives {
    double at_start = 0.0;  // d^j g / dt^j at t = 0+
    double at_end = 0.0;    // d^j g / dt^j at t = T-
    double error = 0.0;     // estimated truncation error (finite-difference branch)
    bool reliable = true;   // false when step-halving failed to converge
};

// Closed form for constant/series shapes: proportional to sum_n a_n (2 pi n / T)^j
// for even j, identically zero for odd j. Throws for bump shapes.
EndpointDerivatives endpoint_derivative_analytic(const CouplingSpec& spec, int order);

// One-sided interior stencils (order >= 6) with Richardson step-halving.
// Works for any shape; reports the achieved error estimate.
EndpointDerivatives endpoint_derivative_fd(const CouplingSpec& spec, int order);

// Analytic branch when available, finite differences otherwise.
EndpointDerivatives endpoint_derivative(const CouplingSpec& spec, int order);

}  // namespace protmeas
