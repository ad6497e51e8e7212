#include "qas/actions.hpp"

#include <cmath>

namespace qas {

void ActionDistribution::validate() const {
    for (double p : {p_add, p_swap, p_delete, p_change})
        if (p < 0.0 || p > 1.0)
            raise(ErrorCode::Config, "action probability outside [0, 1]");
    if (std::abs(sum() - 1.0) > 1e-12)
        raise(ErrorCode::Config, "action probabilities must sum to 1");
}

void SearchConfig::validate() const {
    if (iterations < 1)
        raise(ErrorCode::Config, "iterations must be >= 1");
    if (rollout_steps < 0)
        raise(ErrorCode::Config, "rollout steps must be >= 0");
    if (commit_fraction <= 0.0 || commit_fraction > 1.0)
        raise(ErrorCode::Config, "commit fraction must lie in (0, 1]");
    if (exploration < 0.0)
        raise(ErrorCode::Config, "exploration constant must be >= 0");
    if (pw_coefficient <= 0.0)
        raise(ErrorCode::Config, "progressive widening coefficient must be > 0");
    if (pw_exponent <= 0.0 || pw_exponent > 1.0)
        raise(ErrorCode::Config, "progressive widening exponent must lie in (0, 1]");
    action_probs.validate();
    if (angle_deviation <= 0.0)
        raise(ErrorCode::Config, "angle deviation must be > 0");
    if (max_depth < 1)
        raise(ErrorCode::Config, "max depth must be >= 1");
    if (max_cnots && *max_cnots < 0)
        raise(ErrorCode::Config, "max cnots must be >= 0");
    if (max_adam_steps < 0)
        raise(ErrorCode::Config, "max Adam steps must be >= 0");
    if (fixed_branching && *fixed_branching < 1)
        raise(ErrorCode::Config, "fixed branching factor must be >= 1");
    if (noise)
        noise->validate();
}

namespace {

constexpr int kResampleCap = 100;

// Eq-8 gate pool used for add/swap payloads.
constexpr GateKind kGatePool[] = {GateKind::Cnot, GateKind::Rx, GateKind::Ry, GateKind::Rz};

Gate sample_pool_gate(int n, Rng& rng) {
    // single-qubit circuits have no valid cnot; draw rotations only
    std::uniform_int_distribution<int> pick(n < 2 ? 1 : 0, 3);
    const GateKind kind = kGatePool[pick(rng)];
    if (kind == GateKind::Cnot) {
        std::uniform_int_distribution<int> qubit(0, n - 1);
        const int control = qubit(rng);
        std::uniform_int_distribution<int> other(0, n - 2);
        int target = other(rng);
        if (target >= control)
            ++target; // uniform over ordered distinct pairs
        return Gate::cnot(control, target);
    }
    std::uniform_int_distribution<int> qubit(0, n - 1);
    const int target = qubit(rng);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    return Gate{kind, target, -1, angle(rng)};
}

bool kind_is_valid(ActionKind kind, const Circuit& circuit, bool has_params) {
    switch (kind) {
    case ActionKind::Add:
        return true;
    case ActionKind::Swap:
    case ActionKind::Delete:
        return !circuit.gates.empty();
    case ActionKind::Change:
        return has_params;
    }
    return false;
}

} // namespace

EditAction sample_action(const Circuit& circuit, const ActionDistribution& dist, Rng& rng,
                         double angle_deviation) {
    dist.validate();
    const std::vector<int> params = parameterized_positions(circuit);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ActionKind kind{};
    bool found = false;
    for (int attempt = 0; attempt < kResampleCap; ++attempt) {
        const double u = unit(rng) * dist.sum();
        if (u < dist.p_add)
            kind = ActionKind::Add;
        else if (u < dist.p_add + dist.p_swap)
            kind = ActionKind::Swap;
        else if (u < dist.p_add + dist.p_swap + dist.p_delete)
            kind = ActionKind::Delete;
        else
            kind = ActionKind::Change;
        if (kind_is_valid(kind, circuit, !params.empty())) {
            found = true;
            break;
        }
    }
    if (!found)
        raise(ErrorCode::Sampling,
              "no valid action after " + std::to_string(kResampleCap) +
                  " draws (degenerate distribution for this circuit)");

    EditAction action{};
    action.kind = kind;
    switch (kind) {
    case ActionKind::Add:
        action.gate = sample_pool_gate(circuit.n, rng);
        break;
    case ActionKind::Swap: {
        std::uniform_int_distribution<int> pos(0, static_cast<int>(circuit.gates.size()) - 1);
        action.position = pos(rng);
        action.gate = sample_pool_gate(circuit.n, rng);
        break;
    }
    case ActionKind::Delete: {
        std::uniform_int_distribution<int> pos(0, static_cast<int>(circuit.gates.size()) - 1);
        action.position = pos(rng);
        break;
    }
    case ActionKind::Change: {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(params.size()) - 1);
        action.position = params[static_cast<std::size_t>(pick(rng))];
        std::normal_distribution<double> eps(0.0, angle_deviation);
        action.perturbation = eps(rng);
        break;
    }
    }
    return action;
}

Circuit apply_action(const Circuit& circuit, const EditAction& action) {
    const int gate_count = static_cast<int>(circuit.gates.size());
    auto check_position = [&](bool require_angle) {
        if (action.position < 0 || action.position >= gate_count)
            raise(ErrorCode::ActionApplication,
                  "action position " + std::to_string(action.position) +
                      " stale for circuit of " + std::to_string(gate_count) + " gates");
        if (require_angle &&
            !circuit.gates[static_cast<std::size_t>(action.position)].has_angle())
            raise(ErrorCode::ActionApplication, "change action targets a non-parameterized gate");
    };

    Circuit out = circuit;
    switch (action.kind) {
    case ActionKind::Add:
        validate_gate(action.gate, circuit.n);
        out.gates.push_back(action.gate);
        break;
    case ActionKind::Swap:
        check_position(false);
        validate_gate(action.gate, circuit.n);
        out.gates[static_cast<std::size_t>(action.position)] = action.gate;
        break;
    case ActionKind::Delete:
        check_position(false);
        out.gates.erase(out.gates.begin() + action.position);
        break;
    case ActionKind::Change: {
        check_position(true);
        Gate& g = out.gates[static_cast<std::size_t>(action.position)];
        g.angle = wrap_angle(g.angle + action.perturbation);
        break;
    }
    }
    return out;
}

ActionDistribution effective_distribution(const Circuit& circuit, const ActionDistribution& base,
                                          const SearchConfig& cfg, bool tree_has_warmed) {
    ActionDistribution dist = tree_has_warmed ? base : ActionDistribution::add_only();
    const bool depth_capped = depth(circuit) >= cfg.max_depth;
    const bool cnot_capped = cfg.max_cnots && metrics(circuit).cnot_count >= *cfg.max_cnots;
    if (depth_capped || cnot_capped) {
        const double rest = dist.p_swap + dist.p_delete + dist.p_change;
        if (rest <= 0.0)
            raise(ErrorCode::Sampling,
                  "depth cutoff reached while only gate additions are allowed");
        dist.p_add = 0.0;
        dist.p_swap /= rest;
        dist.p_delete /= rest;
        dist.p_change /= rest;
    }
    return dist;
}

} // namespace qas
