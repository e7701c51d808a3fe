// dynamics.hpp — exact interaction-picture evolution conditioned on pointer momentum p
#pragma once

#include "protmeas/coupling.hpp"
#include "protmeas/perturbation.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace protmeas {

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-12;
    long max_steps = 10'000'000;
    double pointer_momentum = 1.0;  // p; conserved, conditions the dynamics
};

struct EvolutionResult {
    Eigen::VectorXcd final_amplitudes;  // interaction-picture c_m(T)
    double norm_defect = 0.0;           // | sum |c|^2 - 1 |
    long integrator_steps = 0;
    double estimated_error = 0.0;       // accumulated local error estimates
};

// Integrates dc_m/dt = -i g(t) p sum_k e^{i w_mk t} O_mk c_k from c = e_n to
// t = T with adaptive embedded Runge-Kutta (Dormand-Prince 5(4)). Step size is
// additionally capped so each step advances the fastest phase by <= 0.1 rad.
EvolutionResult integrate_exact(const SystemModel& model, const CouplingSpec& spec,
                                const IntegratorConfig& config);

struct ConvergencePoint {
    double scale;   // epsilon
    double defect;  // || c(T; eps O) - eps A^{(1)}(O) || over targets m != n
};

struct ConvergenceStudy {
    std::vector<ConvergencePoint> points;
    double slope = 0.0;  // log-log slope of defect vs epsilon
};

// Scales the observable by each epsilon, integrates exactly, and measures the
// defect against the first-order prediction. Scales must be positive and
// decreasing, >= 3 values.
ConvergenceStudy convergence_study(const SystemModel& model, const CouplingSpec& spec,
                                   const IntegratorConfig& config,
                                   const std::vector<double>& scales);

struct TargetComparison {
    int target = 0;
    double exact_magnitude = 0.0;
    double first_order_magnitude = 0.0;
    std::optional<double> total_leading_magnitude;  // absent for bump shapes
    double exact_vs_first = 0.0;                    // relative deviation
    std::optional<double> exact_vs_total;
};

struct PerturbativeReport {
    EvolutionResult evolution;
    std::vector<TargetComparison> targets;
};

PerturbativeReport compare_perturbative(const SystemModel& model, const CouplingSpec& spec,
                                        const IntegratorConfig& config);

}  // namespace protmeas
