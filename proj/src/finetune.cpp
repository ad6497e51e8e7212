#include "qas/finetune.hpp"

#include <cmath>

namespace qas {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;

// Evaluates (numerator, denominator) pairs for ratio-form problems, or
// (cost, 1) for expectation-form ones, so the gradient loop below can treat
// both uniformly.
std::pair<double, double> parts_of(const Circuit& circuit, const Problem& problem) {
    if (problem.cost_form() == CostForm::Ratio)
        return problem.ratio_parts(circuit);
    return {problem.cost(circuit), 1.0};
}

std::vector<double> gradient_with_base(const Circuit& circuit, const Problem& problem,
                                       const std::pair<double, double>& base_parts) {
    const std::vector<double> theta = angles(circuit);
    std::vector<double> grad(theta.size(), 0.0);
    const bool ratio = problem.cost_form() == CostForm::Ratio;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        std::vector<double> shifted = theta;
        shifted[i] = theta[i] + kHalfPi;
        const auto plus = parts_of(with_angles(circuit, shifted), problem);
        shifted[i] = theta[i] - kHalfPi;
        const auto minus = parts_of(with_angles(circuit, shifted), problem);
        if (ratio) {
            // cost = 1 - N/D: apply the shift rule to N and D, then the
            // quotient rule at the base point.
            const double dn = (plus.first - minus.first) / 2.0;
            const double dd = (plus.second - minus.second) / 2.0;
            const auto [n0, d0] = base_parts;
            grad[i] = -(dn * d0 - n0 * dd) / (d0 * d0);
        } else {
            grad[i] = (plus.first - minus.first) / 2.0;
        }
    }
    return grad;
}

} // namespace

AdamState AdamState::init(std::size_t param_count) {
    AdamState s;
    s.first_moment.assign(param_count, 0.0);
    s.second_moment.assign(param_count, 0.0);
    return s;
}

std::pair<std::vector<double>, AdamState> adam_step(const std::vector<double>& theta,
                                                    const std::vector<double>& grad,
                                                    AdamState state) {
    if (theta.size() != grad.size() || theta.size() != state.first_moment.size() ||
        theta.size() != state.second_moment.size())
        raise(ErrorCode::Optimizer, "parameter/gradient/state length mismatch");
    state.step += 1;
    const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    std::vector<double> out = theta;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * grad[i];
        state.second_moment[i] =
            state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double m_hat = state.first_moment[i] / bias1;
        const double v_hat = state.second_moment[i] / bias2;
        out[i] = theta[i] - state.learning_rate * m_hat / (std::sqrt(v_hat) + state.eps);
    }
    return {std::move(out), std::move(state)};
}

std::vector<double> parameter_shift_gradient(const Circuit& circuit, const Problem& problem) {
    if (angles(circuit).empty())
        return {};
    const std::pair<double, double> base =
        problem.cost_form() == CostForm::Ratio ? problem.ratio_parts(circuit)
                                               : std::pair<double, double>{0.0, 1.0};
    return gradient_with_base(circuit, problem, base);
}

FineTuneTrace finetune(const Circuit& circuit, const Problem& problem,
                       const FineTuneOptions& options) {
    if (options.max_steps < 0)
        raise(ErrorCode::Optimizer, "step budget must be >= 0");

    FineTuneTrace trace;
    trace.final_circuit = circuit;

    const bool ratio = problem.cost_form() == CostForm::Ratio;
    auto evaluate = [&](const Circuit& c) -> std::pair<double, std::pair<double, double>> {
        if (ratio) {
            const auto parts = problem.ratio_parts(c);
            if (std::abs(parts.second) <= 1e-14)
                raise(ErrorCode::DegenerateInstance, "vanishing denominator during fine-tuning");
            const double cost = std::clamp(1.0 - parts.first / parts.second, 0.0, 1.0);
            return {cost, parts};
        }
        return {problem.cost(c), {0.0, 1.0}};
    };

    auto [cost, parts] = evaluate(circuit);
    trace.initial_cost = cost;
    trace.cost_trace.push_back(cost);
    trace.overhead_evals = 1;

    Circuit best = circuit;
    double best_cost = cost;

    std::vector<double> theta = angles(circuit);
    if (theta.empty() || options.max_steps == 0) {
        trace.final_cost = best_cost;
        return trace;
    }

    AdamState state = AdamState::init(theta.size());
    state.learning_rate = options.learning_rate;
    state.beta1 = options.beta1;
    state.beta2 = options.beta2;
    state.eps = options.eps;

    Circuit current = circuit; // angles kept unwrapped between steps
    double prev_cost = cost;
    int plateau = 0;
    for (int step = 0; step < options.max_steps; ++step) {
        const std::vector<double> grad = gradient_with_base(current, problem, parts);
        trace.gradient_evals += 2 * static_cast<long long>(theta.size());
        std::tie(theta, state) = adam_step(theta, grad, std::move(state));
        current = with_angles(current, theta);

        std::tie(cost, parts) = evaluate(current);
        trace.step_cost_evals += 1;
        trace.cost_trace.push_back(cost);
        trace.steps_used = step + 1;
        if (cost < best_cost) {
            best_cost = cost;
            best = current;
        }
        plateau = std::abs(cost - prev_cost) < options.plateau_tolerance ? plateau + 1 : 0;
        prev_cost = cost;
        if (plateau >= options.plateau_window)
            break;
    }

    // wrap once at the end
    std::vector<double> best_theta = angles(best);
    for (double& a : best_theta)
        a = wrap_angle(a);
    trace.final_circuit = with_angles(best, best_theta);
    trace.final_cost = best_cost;
    return trace;
}

FineTuneTrace finetune(const Circuit& circuit, const Problem& problem, int max_steps) {
    FineTuneOptions options;
    options.max_steps = max_steps;
    return finetune(circuit, problem, options);
}

} // namespace qas
