#pragma once

#include <random>

#include "qas/circuit.hpp"
#include "qas/search_config.hpp"

namespace qas {

using Rng = std::mt19937_64;

enum class ActionKind : std::uint8_t { Add, Swap, Delete, Change };

// One sampled circuit edit. Position indices refer to the circuit the
// action was sampled against.
struct EditAction {
    ActionKind kind;
    Gate gate{};          // Add: appended gate; Swap: replacement gate
    int position = -1;    // Swap/Delete/Change
    double perturbation = 0.0; // Change: added to the angle, then wrapped

    friend bool operator==(const EditAction& a, const EditAction& b) = default;
};

// Draws an action kind from `dist` and fills its payload with uniform
// choices over the gate pool {CNOT, RX, RY, RZ}, qubits, and positions.
// Kinds that are undefined for the circuit (swap/delete on an empty
// circuit, change without parameterized gates) are resampled, up to a cap.
EditAction sample_action(const Circuit& circuit, const ActionDistribution& dist, Rng& rng,
                         double angle_deviation);

// Pure edit: returns the modified circuit, validating the action indices.
Circuit apply_action(const Circuit& circuit, const EditAction& action);

// Warm-up and cutoff logic: add-only until some tree circuit has reached
// 2n gates; p_add zeroed (mass renormalized) once the depth cap — and the
// optional CNOT cap — is hit.
ActionDistribution effective_distribution(const Circuit& circuit, const ActionDistribution& base,
                                          const SearchConfig& cfg, bool tree_has_warmed);

} // namespace qas
