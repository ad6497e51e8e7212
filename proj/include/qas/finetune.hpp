#pragma once

#include "qas/problems.hpp"

namespace qas {

struct AdamState {
    long long step = 0;      // t
    std::vector<double> first_moment;  // m
    std::vector<double> second_moment; // v
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState init(std::size_t param_count);
};

// One bias-corrected Adam update. Pure: returns the new parameters and state.
std::pair<std::vector<double>, AdamState> adam_step(const std::vector<double>& theta,
                                                    const std::vector<double>& grad,
                                                    AdamState state);

// d(cost)/d(theta_i) via two shifted evaluations per parameter:
// [C(theta_i + pi/2) - C(theta_i - pi/2)] / 2 for expectation-form costs;
// ratio-form costs combine shifted numerator/denominator expectations with
// the quotient rule (still two simulations per parameter).
std::vector<double> parameter_shift_gradient(const Circuit& circuit, const Problem& problem);

struct FineTuneTrace {
    std::vector<double> cost_trace; // index 0 is the initial cost, then one per step
    Circuit final_circuit;          // best-cost circuit seen, angles wrapped
    double final_cost = 0.0;
    double initial_cost = 0.0;
    int steps_used = 0;
    long long gradient_evals = 0;   // exactly 2 * param_count * steps_used
    long long step_cost_evals = 0;  // one per step, for the trace and early stop
    long long overhead_evals = 0;   // the initial evaluation
};

struct FineTuneOptions {
    int max_steps = 500;            // T
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double plateau_tolerance = 1e-9;
    int plateau_window = 10;
};

// Up to max_steps Adam updates of the circuit's angles; stops early after
// plateau_window consecutive steps with |cost_t - cost_{t-1}| below the
// tolerance. Angles evolve unwrapped and are wrapped once at the end.
FineTuneTrace finetune(const Circuit& circuit, const Problem& problem,
                       const FineTuneOptions& options);

FineTuneTrace finetune(const Circuit& circuit, const Problem& problem, int max_steps);

} // namespace qas
