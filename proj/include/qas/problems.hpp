#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <utility>

#include "qas/density_matrix.hpp"
#include "qas/eval_counter.hpp"

namespace qas {

// How a cost function depends on the circuit, for the parameter-shift rule:
// either directly an expectation of a Hermitian observable, or a ratio of
// two such expectations (the linear-solver cost).
enum class CostForm { Expectation, Ratio };

// A problem maps circuits to costs (lower is better) and costs to rewards
// (higher is better). Every cost evaluation simulates exactly one circuit
// and increments the shared counter once. Instances are immutable after
// construction; the counter is the only shared mutable state.
class Problem {
  public:
    virtual ~Problem() = default;

    int qubit_count() const { return n_; }
    const std::optional<NoiseModel>& noise() const { return noise_; }
    EvalCounter& counter() const { return *counter_; }

    double cost(const Circuit& circuit) const;
    virtual double reward_from_cost(double cost) const = 0;
    virtual std::optional<double> optimal_cost() const { return std::nullopt; }

    virtual CostForm cost_form() const { return CostForm::Expectation; }

    // Ratio-form problems only: (numerator, denominator) with
    // cost = 1 - numerator/denominator. Counts one evaluation.
    virtual std::pair<double, double> ratio_parts(const Circuit&) const;

    // Noiseless cost of the circuit, regardless of the configured noise
    // model; used to validate designs found under noisy evaluation.
    double noiseless_cost(const Circuit& circuit) const;

  protected:
    Problem(int n, std::optional<NoiseModel> noise, std::shared_ptr<EvalCounter> counter);

    virtual double cost_of_state(const StateVector& state) const = 0;
    virtual double cost_of_density(const DensityMatrix& rho) const = 0;

    void check_circuit(const Circuit& circuit) const;

    int n_;
    std::optional<NoiseModel> noise_;
    std::shared_ptr<EvalCounter> counter_;
};

// Ground-state energy: cost = <psi|H|psi>, reward = -cost.
class VqeProblem final : public Problem {
  public:
    VqeProblem(PauliSum hamiltonian, std::optional<NoiseModel> noise,
               std::shared_ptr<EvalCounter> counter);

    const PauliSum& hamiltonian() const { return hamiltonian_; }
    double reward_from_cost(double cost) const override { return -cost; }

  private:
    double cost_of_state(const StateVector& state) const override;
    double cost_of_density(const DensityMatrix& rho) const override;

    PauliSum hamiltonian_;
};

// Local-cost linear solver on A = sum_m c_m A_m with Pauli-string A_m and
// |b> prepared by `b_prep`. Reward = exp(-10 * cost).
class VqlsProblem final : public Problem {
  public:
    VqlsProblem(std::vector<Complex> coefficients, std::vector<PauliString> unitaries,
                Circuit b_prep, std::optional<NoiseModel> noise,
                std::shared_ptr<EvalCounter> counter);

    // The 4-qubit instance A = a0*I + a1*X1 + a2*X2 + a3*Z3Z4, b = H^n|0>.
    static VqlsProblem demo_instance(double a0, double a1, double a2, double a3,
                                     std::optional<NoiseModel> noise,
                                     std::shared_ptr<EvalCounter> counter);

    double reward_from_cost(double cost) const override { return std::exp(-10.0 * cost); }
    std::optional<double> optimal_cost() const override { return 0.0; }
    CostForm cost_form() const override { return CostForm::Ratio; }
    std::pair<double, double> ratio_parts(const Circuit& circuit) const override;

    // Exposed for invariance tests: the ratio parts of an arbitrary
    // prepared state (no counter increment, no simulation).
    std::pair<double, double> ratio_parts_of_state(const StateVector& v) const;

  private:
    std::pair<double, double> ratio_parts_of_density(const DensityMatrix& rho) const;
    double cost_of_state(const StateVector& state) const override;
    double cost_of_density(const DensityMatrix& rho) const override;
    double cost_from_parts(double num, double den) const;

    std::vector<Complex> coefficients_;
    std::vector<PauliString> unitaries_;
    Circuit b_prep_;
    PauliSum a_sum_;       // combined c_m A_m
    PauliSum projector_;   // P = I/2 + (1/2n) sum_j Z_j
};

// State approximation: cost = 1 - |<phi|psi>|^2.
class OracleProblem final : public Problem {
  public:
    OracleProblem(StateVector target, double epsilon, std::optional<NoiseModel> noise,
                  std::shared_ptr<EvalCounter> counter);

    double epsilon() const { return epsilon_; }
    const StateVector& target() const { return target_; }
    double reward_from_cost(double cost) const override { return 1.0 - cost; }
    std::optional<double> optimal_cost() const override { return 0.0; }

    // fidelity >= 1 - epsilon, judged on the noiseless state of `circuit`.
    bool is_epsilon_approx(const Circuit& circuit) const;
    bool is_epsilon_approx_cost(double noiseless_cost) const;

  private:
    double cost_of_state(const StateVector& state) const override;
    double cost_of_density(const DensityMatrix& rho) const override;

    StateVector target_;
    double epsilon_;
};

// Hamiltonian file: one `<real-coefficient> <pauli-letters>` term per line,
// `#` comments allowed. All strings must have equal length.
PauliSum parse_hamiltonian(std::string_view text);
PauliSum load_hamiltonian_file(const std::string& path);

} // namespace qas
