#pragma once

#include <cstdint>
#include <optional>

#include "qas/density_matrix.hpp"

namespace qas {

// Probabilities over the four edit actions (add, swap, delete, change).
struct ActionDistribution {
    double p_add = 0.0;
    double p_swap = 0.0;
    double p_delete = 0.0;
    double p_change = 0.0;

    double sum() const { return p_add + p_swap + p_delete + p_change; }
    void validate() const;

    static ActionDistribution add_only() { return {1.0, 0.0, 0.0, 0.0}; }
};

// Full hyperparameter record for one search run. Defaults follow the
// reference configuration used across all experiments.
struct SearchConfig {
    long long iterations = 1000;          // I
    int rollout_steps = 0;                // r
    double commit_fraction = 0.05;        // rho
    double exploration = 0.4;             // c
    double pw_coefficient = 1.0;          // beta in ceil(beta * N^alpha)
    double pw_exponent = 0.3;             // alpha
    ActionDistribution action_probs{0.5, 0.2, 0.1, 0.2};
    double angle_deviation = 0.2;         // std-dev of the change perturbation
    int max_depth = 20;                   // d: p_add forced to 0 at this depth
    std::optional<int> max_cnots;         // optional analogous CNOT cutoff
    int max_adam_steps = 500;             // T
    std::uint64_t seed = 1;
    std::optional<NoiseModel> noise;
    std::optional<int> fixed_branching;   // ablation: constant branching factor
    bool normalize_rewards = false;

    void validate() const;
};

} // namespace qas
