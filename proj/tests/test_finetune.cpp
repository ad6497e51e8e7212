#include <doctest.h>

#include "qas/actions.hpp"
#include "qas/finetune.hpp"

using namespace qas;

namespace {

std::shared_ptr<EvalCounter> counter() { return std::make_shared<EvalCounter>(); }

// central finite differences on the counted cost, h = 1e-5
std::vector<double> finite_difference_gradient(const Circuit& c, const Problem& p) {
    const std::vector<double> theta = angles(c);
    std::vector<double> grad(theta.size());
    const double h = 1e-5;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        std::vector<double> shifted = theta;
        shifted[i] = theta[i] + h;
        const double plus = p.cost(with_angles(c, shifted));
        shifted[i] = theta[i] - h;
        const double minus = p.cost(with_angles(c, shifted));
        grad[i] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

Circuit random_parameterized_circuit(int n, int gates, int max_params, Rng& rng) {
    Circuit c = root_circuit(n);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    int params = 0;
    for (int i = 0; i < gates; ++i) {
        const int k = kind(rng);
        if (k == 0 && n > 1) {
            const int control = qubit(rng);
            const int target = (control + 1) % n;
            c.gates.push_back(Gate::cnot(control, target));
        } else if (params < max_params) {
            const GateKind rot =
                k == 1 ? GateKind::Rx : k == 2 ? GateKind::Ry : GateKind::Rz;
            c.gates.push_back(Gate{rot, qubit(rng), -1, angle(rng)});
            ++params;
        } else {
            c.gates.push_back(Gate::h(qubit(rng)));
        }
    }
    return c;
}

} // namespace

TEST_CASE("parameter shift on <Z> after rx recovers -sin(theta)") {
    auto c = counter();
    VqeProblem problem(parse_hamiltonian("1.0 Z\n"), std::nullopt, c);

    Circuit half;
    half.n = 1;
    half.gates = {Gate::rx(0, 1.5707963267948966)};
    const std::vector<double> g_half = parameter_shift_gradient(half, problem);
    REQUIRE(g_half.size() == 1);
    CHECK(g_half[0] == doctest::Approx(-1.0).epsilon(1e-12));

    Circuit zero;
    zero.n = 1;
    zero.gates = {Gate::rx(0, 0.0)};
    const std::vector<double> g_zero = parameter_shift_gradient(zero, problem);
    CHECK(g_zero[0] == doctest::Approx(0.0));

    Circuit no_params = root_circuit(1);
    CHECK(parameter_shift_gradient(no_params, problem).empty());
}

TEST_CASE("parameter shift matches finite differences on random vqe instances") {
    Rng rng(3);
    auto c = counter();
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 3;
        VqeProblem problem(parse_hamiltonian(n == 2 ? "1.0 ZZ\n0.4 XI\n"
                                             : n == 3 ? "1.0 ZZI\n0.4 IXZ\n"
                                                      : "1.0 ZZII\n0.4 IXZI\n"),
                           std::nullopt, c);
        const Circuit circ = random_parameterized_circuit(n, 8, 6, rng);
        const std::vector<double> shift = parameter_shift_gradient(circ, problem);
        const std::vector<double> fd = finite_difference_gradient(circ, problem);
        REQUIRE(shift.size() == fd.size());
        for (std::size_t i = 0; i < shift.size(); ++i)
            CHECK(shift[i] == doctest::Approx(fd[i]).epsilon(1e-6));
    }
}

TEST_CASE("parameter shift stays exact through noise channels") {
    Rng rng(13);
    auto c = counter();
    VqeProblem problem(parse_hamiltonian("1.0 ZZ\n0.4 XI\n"), NoiseModel{0.05, 0.02}, c);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit circ = random_parameterized_circuit(2, 8, 5, rng);
        const std::vector<double> shift = parameter_shift_gradient(circ, problem);
        const std::vector<double> fd = finite_difference_gradient(circ, problem);
        REQUIRE(shift.size() == fd.size());
        for (std::size_t i = 0; i < shift.size(); ++i)
            CHECK(shift[i] == doctest::Approx(fd[i]).epsilon(1e-6));
    }
}

TEST_CASE("parameter shift handles the vqls quotient correctly") {
    Rng rng(5);
    auto c = counter();
    VqlsProblem problem = VqlsProblem::demo_instance(0.1, 1.0, 1.0, 0.2, std::nullopt, c);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit circ = random_parameterized_circuit(4, 8, 5, rng);
        const std::vector<double> shift = parameter_shift_gradient(circ, problem);
        const std::vector<double> fd = finite_difference_gradient(circ, problem);
        REQUIRE(shift.size() == fd.size());
        for (std::size_t i = 0; i < shift.size(); ++i)
            CHECK(shift[i] == doctest::Approx(fd[i]).epsilon(1e-5));
    }
}

TEST_CASE("adam_step closed-form first update and invariants") {
    AdamState state = AdamState::init(1);
    const auto [theta, next] = adam_step({0.0}, {1.0}, state);
    CHECK(theta[0] == doctest::Approx(-0.01).epsilon(1e-7));
    CHECK(next.step == 1);

    // zero gradient leaves parameters unchanged
    AdamState fresh = AdamState::init(2);
    const auto [same, after] = adam_step({0.4, -0.2}, {0.0, 0.0}, fresh);
    CHECK(same[0] == 0.4);
    CHECK(same[1] == -0.2);

    // determinism of identical calls
    AdamState s1 = AdamState::init(1), s2 = AdamState::init(1);
    const auto r1 = adam_step({0.1}, {0.7}, s1);
    const auto r2 = adam_step({0.1}, {0.7}, s2);
    CHECK(r1.first[0] == r2.first[0]);

    CHECK_THROWS_AS(adam_step({0.1}, {0.1, 0.2}, AdamState::init(1)), Error);
}

TEST_CASE("finetune: budget zero returns the input circuit") {
    auto c = counter();
    VqeProblem problem(parse_hamiltonian("1.0 ZZ\n"), std::nullopt, c);
    Circuit circ;
    circ.n = 2;
    circ.gates = {Gate::rx(0, 0.3), Gate::cnot(0, 1)};
    const FineTuneTrace trace = finetune(circ, problem, 0);
    CHECK(trace.final_circuit == circ);
    CHECK(trace.gradient_evals == 0);
    CHECK(trace.steps_used == 0);
}

TEST_CASE("finetune drives a single rotation to the ground state") {
    auto c = counter();
    VqeProblem problem(parse_hamiltonian("1.0 Z\n"), std::nullopt, c);
    Circuit circ;
    circ.n = 1;
    circ.gates = {Gate::rx(0, 0.3)};
    const FineTuneTrace trace = finetune(circ, problem, 500);
    CHECK(trace.final_cost == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(trace.final_cost <= trace.initial_cost + 1e-12);
}

TEST_CASE("finetune stops early on a flat landscape") {
    auto c = counter();
    VqeProblem problem(parse_hamiltonian("1.0 II\n"), std::nullopt, c);
    Circuit circ;
    circ.n = 2;
    circ.gates = {Gate::rx(0, 0.3), Gate::ry(1, 1.2)};
    const FineTuneTrace trace = finetune(circ, problem, 500);
    CHECK(trace.steps_used == 10); // the plateau window
    CHECK(trace.final_cost == doctest::Approx(1.0));
}

TEST_CASE("finetune only changes angles and keeps the best circuit seen") {
    Rng rng(7);
    auto c = counter();
    VqeProblem problem(parse_hamiltonian("1.0 ZZZ\n0.5 XII\n"), std::nullopt, c);
    const Circuit circ = random_parameterized_circuit(3, 10, 6, rng);
    const FineTuneTrace trace = finetune(circ, problem, 60);

    REQUIRE(trace.final_circuit.gates.size() == circ.gates.size());
    for (std::size_t i = 0; i < circ.gates.size(); ++i) {
        CHECK(trace.final_circuit.gates[i].kind == circ.gates[i].kind);
        CHECK(trace.final_circuit.gates[i].target == circ.gates[i].target);
        CHECK(trace.final_circuit.gates[i].control == circ.gates[i].control);
        if (trace.final_circuit.gates[i].has_angle()) {
            CHECK(trace.final_circuit.gates[i].angle >= 0.0);
            CHECK(trace.final_circuit.gates[i].angle < kTwoPi);
        }
    }
    CHECK(trace.final_cost <= trace.initial_cost + 1e-12);

    // the trace starts at the initial cost and the best value is its minimum
    double minimum = trace.cost_trace.front();
    for (double v : trace.cost_trace)
        minimum = std::min(minimum, v);
    CHECK(trace.final_cost == doctest::Approx(minimum));
}

TEST_CASE("finetune evaluation accounting is exact") {
    auto c = counter();
    VqeProblem problem(parse_hamiltonian("1.0 ZZ\n0.5 XI\n"), std::nullopt, c);
    Circuit circ;
    circ.n = 2;
    circ.gates = {Gate::ry(0, 0.4), Gate::cnot(0, 1), Gate::rx(1, 2.2), Gate::rz(0, 1.0)};
    const long long l = metrics(circ).param_count;

    const long long before = c->total();
    const FineTuneTrace trace = finetune(circ, problem, 25);
    const long long used = c->total() - before;

    CHECK(trace.gradient_evals == 2 * l * trace.steps_used);
    CHECK(trace.step_cost_evals == trace.steps_used);
    CHECK(trace.overhead_evals == 1);
    CHECK(used == trace.gradient_evals + trace.step_cost_evals + trace.overhead_evals);
    CHECK(trace.cost_trace.size() == static_cast<std::size_t>(trace.steps_used) + 1);
}

TEST_CASE("the vqls quotient gradient stays exact under noise") {
    Rng rng(17);
    auto c = counter();
    VqlsProblem problem =
        VqlsProblem::demo_instance(0.1, 1.0, 1.0, 0.2, NoiseModel{0.02, 0.01}, c);
    for (int trial = 0; trial < 5; ++trial) {
        const Circuit circ = random_parameterized_circuit(4, 6, 4, rng);
        const std::vector<double> shift = parameter_shift_gradient(circ, problem);
        const std::vector<double> fd = finite_difference_gradient(circ, problem);
        REQUIRE(shift.size() == fd.size());
        for (std::size_t i = 0; i < shift.size(); ++i)
            CHECK(shift[i] == doctest::Approx(fd[i]).epsilon(1e-5));
    }
}

TEST_CASE("finetune converges on the vqls ratio cost") {
    auto c = counter();
    VqlsProblem problem = VqlsProblem::demo_instance(0.1, 1.0, 1.0, 0.2, std::nullopt, c);
    Rng rng(11);
    const Circuit circ = random_parameterized_circuit(4, 12, 8, rng);
    const FineTuneTrace trace = finetune(circ, problem, 80);
    CHECK(trace.final_cost <= trace.initial_cost + 1e-12);
    const long long l = metrics(circ).param_count;
    CHECK(trace.gradient_evals == 2 * l * trace.steps_used);
}
