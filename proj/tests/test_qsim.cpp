#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "qas/actions.hpp"
#include "qas/density_matrix.hpp"

using namespace qas;

namespace {

constexpr double kTol = 1e-10;

Circuit make_circuit(int n, std::initializer_list<Gate> gates) {
    Circuit c;
    c.n = n;
    c.gates = gates;
    return c;
}

Circuit random_circuit(int n, int gates, Rng& rng) {
    std::uniform_int_distribution<int> kind(0, 6);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    Circuit c;
    c.n = n;
    for (int i = 0; i < gates; ++i) {
        switch (kind(rng)) {
        case 0: {
            if (n < 2)
                continue;
            int control = qubit(rng), target = qubit(rng);
            if (control == target)
                target = (target + 1) % n;
            c.gates.push_back(Gate::cnot(control, target));
            break;
        }
        case 1: c.gates.push_back(Gate::rx(qubit(rng), angle(rng))); break;
        case 2: c.gates.push_back(Gate::ry(qubit(rng), angle(rng))); break;
        case 3: c.gates.push_back(Gate::rz(qubit(rng), angle(rng))); break;
        case 4: c.gates.push_back(Gate::h(qubit(rng))); break;
        case 5: c.gates.push_back(Gate::s(qubit(rng))); break;
        default: c.gates.push_back(Gate::t(qubit(rng))); break;
        }
    }
    return c;
}

PauliSum random_pauli_sum(int n, int terms, Rng& rng) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    PauliSum sum;
    for (int t = 0; t < terms; ++t) {
        PauliString s = PauliString::identity(n);
        for (int q = 0; q < n; ++q)
            s.letters[static_cast<std::size_t>(q)] = static_cast<PauliLetter>(letter(rng));
        sum.terms.push_back({Complex(coeff(rng)), s});
    }
    return sum;
}

} // namespace

TEST_CASE("zero_state puts all weight on basis index 0") {
    const StateVector one = zero_state(1);
    REQUIRE(one.amplitudes.size() == 2);
    CHECK(one.amplitudes[0] == Complex(1.0));
    CHECK(one.amplitudes[1] == Complex(0.0));

    const StateVector two = zero_state(2);
    REQUIRE(two.amplitudes.size() == 4);
    CHECK(two.amplitudes[0] == Complex(1.0));
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(two.amplitudes[i] == Complex(0.0));

    const StateVector four = zero_state(4);
    REQUIRE(four.amplitudes.size() == 16);
    CHECK(four.amplitudes[0] == Complex(1.0));

    CHECK_THROWS_AS(zero_state(0), Error);
    CHECK_THROWS_AS(zero_state(15), Error);
}

TEST_CASE("apply_gate matches the defining matrices") {
    SUBCASE("cnot truth table: |10> -> |11>") {
        StateVector state = zero_state(2);
        state.amplitudes = {0, 0, 1, 0}; // |10>
        state = apply_gate(std::move(state), Gate::cnot(0, 1));
        CHECK(std::abs(state.amplitudes[3] - Complex(1.0)) < kTol);
    }
    SUBCASE("rx(pi)|0> = -i|1>") {
        StateVector state = apply_gate(zero_state(1), Gate::rx(0, 3.14159265358979323846));
        CHECK(std::abs(state.amplitudes[1] - Complex(0, -1)) < 1e-12);
    }
    SUBCASE("h|0> is the uniform superposition") {
        StateVector state = apply_gate(zero_state(1), Gate::h(0));
        CHECK(std::abs(state.amplitudes[0] - Complex(0.70710678118654752)) < kTol);
        CHECK(std::abs(state.amplitudes[1] - Complex(0.70710678118654752)) < kTol);
    }
    SUBCASE("out-of-range index rejected") {
        StateVector state = zero_state(2);
        CHECK_THROWS_AS(apply_gate_inplace(state, Gate::h(2)), Error);
        CHECK_THROWS_AS(apply_gate_inplace(state, Gate::cnot(1, 1)), Error);
    }
}

TEST_CASE("apply_circuit composes gates in order") {
    SUBCASE("empty circuit is the zero state") {
        Circuit c;
        c.n = 2;
        const StateVector state = apply_circuit(c);
        CHECK(std::abs(state.amplitudes[0] - Complex(1.0)) < kTol);
    }
    SUBCASE("h then cnot builds the Bell state") {
        const StateVector state =
            apply_circuit(make_circuit(2, {Gate::h(0), Gate::cnot(0, 1)}));
        CHECK(std::abs(state.amplitudes[0] - Complex(0.70710678118654752)) < kTol);
        CHECK(std::abs(state.amplitudes[3] - Complex(0.70710678118654752)) < kTol);
        CHECK(std::abs(state.amplitudes[1]) < kTol);
        CHECK(std::abs(state.amplitudes[2]) < kTol);
    }
    SUBCASE("rz only rotates the phase of |0>") {
        const StateVector state = apply_circuit(make_circuit(1, {Gate::rz(0, 0.7)}));
        CHECK(std::norm(state.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pauli_expectation on eigenstates and off-diagonal cases") {
    const StateVector zero = zero_state(1);
    CHECK(pauli_expectation(zero, PauliString::parse("Z")) == doctest::Approx(1.0));
    CHECK(pauli_expectation(zero, PauliString::parse("X")) == doctest::Approx(0.0));

    const StateVector plus = apply_gate(zero_state(1), Gate::h(0));
    CHECK(pauli_expectation(plus, PauliString::parse("X")) == doctest::Approx(1.0));

    CHECK_THROWS_AS(pauli_expectation(zero, PauliString::parse("ZZ")), Error);
}

TEST_CASE("pauli_sum_expectation is linear and matches dense algebra") {
    const StateVector zz_eigen = zero_state(2);
    PauliSum zz;
    zz.terms.push_back({Complex(1.0), PauliString::parse("ZZ")});
    CHECK(pauli_sum_expectation(zz_eigen, zz) == doctest::Approx(1.0));

    PauliSum mix;
    mix.terms.push_back({Complex(0.5), PauliString::parse("Z")});
    mix.terms.push_back({Complex(0.5), PauliString::parse("X")});
    CHECK(pauli_sum_expectation(zero_state(1), mix) == doctest::Approx(0.5));

    // Bell state under XX, expected value from the 4 amplitudes directly:
    // <psi|XX|psi> with psi = (|00>+|11>)/sqrt2; XX swaps 00<->11, so the
    // bracket is 2 * (1/sqrt2)*(1/sqrt2) = 1.
    const StateVector bell = apply_circuit(make_circuit(2, {Gate::h(0), Gate::cnot(0, 1)}));
    PauliSum xx;
    xx.terms.push_back({Complex(1.0), PauliString::parse("XX")});
    CHECK(pauli_sum_expectation(bell, xx) == doctest::Approx(1.0).epsilon(1e-12));

    PauliSum non_hermitian;
    non_hermitian.terms.push_back({Complex(0.0, 1.0), PauliString::parse("Z")});
    CHECK_THROWS_AS(pauli_sum_expectation(zero_state(1), non_hermitian), Error);
}

TEST_CASE("fidelity examples and bounds") {
    const StateVector zero = zero_state(1);
    CHECK(fidelity(zero, zero) == doctest::Approx(1.0));

    const StateVector one = apply_gate(zero_state(1), Gate::rx(0, 3.14159265358979323846));
    CHECK(fidelity(zero, one) == doctest::Approx(0.0));

    const StateVector plus = apply_gate(zero_state(1), Gate::h(0));
    CHECK(fidelity(zero, plus) == doctest::Approx(0.5));

    StateVector bigger = zero_state(2);
    CHECK_THROWS_AS(fidelity(zero, bigger), Error);
}

TEST_CASE("fidelity is symmetric and bounded on random states") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector a = apply_circuit(random_circuit(3, 12, rng));
        const StateVector b = apply_circuit(random_circuit(3, 12, rng));
        const double f_ab = fidelity(a, b);
        const double f_ba = fidelity(b, a);
        CHECK(f_ab == f_ba);
        CHECK(f_ab >= 0.0);
        CHECK(f_ab <= 1.0 + 1e-12);
    }
}

TEST_CASE("exact_ground_energy on closed-form spectra") {
    PauliSum zz;
    zz.terms.push_back({Complex(1.0), PauliString::parse("ZZ")});
    CHECK(exact_ground_energy(zz) == doctest::Approx(-1.0));

    PauliSum x;
    x.terms.push_back({Complex(1.0), PauliString::parse("X")});
    CHECK(exact_ground_energy(x) == doctest::Approx(-1.0));

    // 2x2 eigenproblem: eigenvalues of 0.5 Z + 0.5 X are +-sqrt(2)/2
    PauliSum mix;
    mix.terms.push_back({Complex(0.5), PauliString::parse("Z")});
    mix.terms.push_back({Complex(0.5), PauliString::parse("X")});
    CHECK(exact_ground_energy(mix) == doctest::Approx(-0.70710678118654752).epsilon(1e-12));
}

TEST_CASE("norm preservation and unitarity spot-checks") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const StateVector state = apply_circuit(random_circuit(4, 20, rng));
        CHECK(std::abs(norm_squared(state) - 1.0) < kTol);
    }

    // gate followed by its inverse returns the input
    Rng rng2(8);
    const StateVector start = apply_circuit(random_circuit(2, 8, rng2));
    const std::vector<std::pair<Gate, Gate>> inverse_pairs = {
        {Gate::rx(0, 0.9), Gate::rx(0, -0.9)},
        {Gate::ry(1, 2.1), Gate::ry(1, -2.1)},
        {Gate::rz(0, 5.3), Gate::rz(0, -5.3)},
        {Gate::cnot(0, 1), Gate::cnot(0, 1)},
        {Gate::h(1), Gate::h(1)},
    };
    for (const auto& [fwd, bwd] : inverse_pairs) {
        StateVector round = start;
        apply_gate_inplace(round, fwd);
        apply_gate_inplace(round, bwd);
        for (std::size_t i = 0; i < round.dim(); ++i)
            CHECK(std::abs(round.amplitudes[i] - start.amplitudes[i]) < kTol);
    }
}

TEST_CASE("apply_circuit_inverse undoes the circuit including s and t") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit c = random_circuit(3, 15, rng);
        StateVector state = apply_circuit(c);
        apply_circuit_inverse_inplace(state, c);
        const StateVector expect = zero_state(3);
        for (std::size_t i = 0; i < state.dim(); ++i)
            CHECK(std::abs(state.amplitudes[i] - expect.amplitudes[i]) < kTol);
    }
}

TEST_CASE("noise channels preserve trace and hermiticity") {
    Rng rng(13);
    const Circuit c = random_circuit(3, 12, rng);
    const DensityMatrix rho = apply_circuit_noisy(c, NoiseModel{0.07, 0.03});
    CHECK(std::abs(trace_real(rho) - 1.0) < kTol);
    const std::size_t dim = rho.dim();
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t col = 0; col < dim; ++col) {
            const Complex delta = rho.entries[r * dim + col] -
                                  std::conj(rho.entries[col * dim + r]);
            CHECK(std::abs(delta) < kTol);
        }
}

TEST_CASE("noiseless density path equals the statevector path") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Circuit c = random_circuit(1 + trial % 4, 20, rng);
        const DensityMatrix rho = apply_circuit_noisy(c, NoiseModel{0.0, 0.0});
        const StateVector psi = apply_circuit(c);
        const PauliSum h = random_pauli_sum(c.n, 3, rng);
        CHECK(std::abs(dm_pauli_sum_expectation(rho, h) - pauli_sum_expectation(psi, h)) <
              1e-12);
    }
}

TEST_CASE("bit-flip readout on the empty circuit gives <Z> = 1 - 2p") {
    Circuit c;
    c.n = 1;
    const DensityMatrix rho = apply_circuit_noisy(c, NoiseModel{0.1, 0.0});
    PauliSum z;
    z.terms.push_back({Complex(1.0), PauliString::parse("Z")});
    CHECK(dm_pauli_sum_expectation(rho, z) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("depolarizing after an x gate gives <Z> = -(1 - 4p/3)") {
    for (double p : {0.0, 0.05, 0.3}) {
        Circuit c = make_circuit(1, {Gate::rx(0, 3.14159265358979323846)});
        const DensityMatrix rho = apply_circuit_noisy(c, NoiseModel{0.0, p});
        PauliSum z;
        z.terms.push_back({Complex(1.0), PauliString::parse("Z")});
        CHECK(dm_pauli_sum_expectation(rho, z) ==
              doctest::Approx(-(1.0 - 4.0 * p / 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("dm expectations: purity, maximally mixed, and diagonal mixtures") {
    Rng rng(23);
    const Circuit c = random_circuit(2, 10, rng);
    const StateVector psi = apply_circuit(c);
    const DensityMatrix pure = pure_density_matrix(psi);
    PauliSum h = random_pauli_sum(2, 3, rng);
    CHECK(std::abs(dm_pauli_sum_expectation(pure, h) - pauli_sum_expectation(psi, h)) < 1e-12);

    DensityMatrix mixed = zero_density_matrix(2);
    mixed.entries.assign(16, Complex(0));
    for (std::size_t i = 0; i < 4; ++i)
        mixed.entries[i * 4 + i] = Complex(0.25);
    PauliSum traceless;
    traceless.terms.push_back({Complex(1.0), PauliString::parse("ZI")});
    traceless.terms.push_back({Complex(0.5), PauliString::parse("XZ")});
    CHECK(dm_pauli_sum_expectation(mixed, traceless) == doctest::Approx(0.0));

    const double p = 0.2;
    DensityMatrix two_level = zero_density_matrix(1);
    two_level.entries = {Complex(1.0 - p), Complex(0), Complex(0), Complex(p)};
    PauliSum z;
    z.terms.push_back({Complex(1.0), PauliString::parse("Z")});
    CHECK(dm_pauli_sum_expectation(two_level, z) == doctest::Approx(1.0 - 2.0 * p));
}

TEST_CASE("positive semidefinite within tolerance under noise") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 2;
        const Circuit c = random_circuit(n, 10, rng);
        const DensityMatrix rho = apply_circuit_noisy(c, NoiseModel{0.1, 0.1});
        const Eigen::Index dim = static_cast<Eigen::Index>(rho.dim());
        Eigen::MatrixXcd mat(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index col = 0; col < dim; ++col)
                mat(r, col) = rho.entries[static_cast<std::size_t>(r * dim + col)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat, Eigen::EigenvaluesOnly);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("variational energies never undercut the exact ground energy") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 4;
        const Circuit c = random_circuit(n, 10, rng);
        PauliSum h = random_pauli_sum(n, 3, rng);
        const double energy = pauli_sum_expectation(apply_circuit(c), h);
        const double ground = exact_ground_energy(h);
        CHECK(energy >= ground - 1e-9);
    }
}
