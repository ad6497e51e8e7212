#include "qas/statevector.hpp"

#include <array>
#include <cmath>

namespace qas {

namespace {

using Matrix2 = std::array<Complex, 4>; // row-major [a b; c d]

Matrix2 gate_matrix(const Gate& gate) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    switch (gate.kind) {
    case GateKind::H:
        return {Complex(inv_sqrt2), Complex(inv_sqrt2), Complex(inv_sqrt2), Complex(-inv_sqrt2)};
    case GateKind::S:
        return {Complex(1), Complex(0), Complex(0), Complex(0, 1)};
    case GateKind::T:
        return {Complex(1), Complex(0), Complex(0), Complex(inv_sqrt2, inv_sqrt2)};
    case GateKind::Rx: {
        double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
        return {Complex(c), Complex(0, -s), Complex(0, -s), Complex(c)};
    }
    case GateKind::Ry: {
        double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
        return {Complex(c), Complex(-s), Complex(s), Complex(c)};
    }
    case GateKind::Rz: {
        double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
        return {Complex(c, -s), Complex(0), Complex(0), Complex(c, s)};
    }
    case GateKind::Cnot:
        raise(ErrorCode::Internal, "cnot has no 2x2 matrix");
    }
    raise(ErrorCode::Internal, "unknown gate kind");
}

Matrix2 gate_matrix_inverse(const Gate& gate) {
    // All single-qubit gates in the pool are unitary: inverse = conjugate transpose.
    Matrix2 m = gate_matrix(gate);
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

void apply_single_qubit(StateVector& state, const Matrix2& m, int q) {
    const std::uint64_t dim = state.dim();
    const std::uint64_t stride = std::uint64_t{1} << (state.n - 1 - q);
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
        for (std::uint64_t offset = 0; offset < stride; ++offset) {
            const std::uint64_t i0 = base + offset;
            const std::uint64_t i1 = i0 + stride;
            const Complex a0 = state.amplitudes[i0];
            const Complex a1 = state.amplitudes[i1];
            state.amplitudes[i0] = m[0] * a0 + m[1] * a1;
            state.amplitudes[i1] = m[2] * a0 + m[3] * a1;
        }
    }
}

void apply_cnot(StateVector& state, int control, int target) {
    const std::uint64_t dim = state.dim();
    const std::uint64_t cmask = std::uint64_t{1} << (state.n - 1 - control);
    const std::uint64_t tmask = std::uint64_t{1} << (state.n - 1 - target);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & cmask) && !(i & tmask))
            std::swap(state.amplitudes[i], state.amplitudes[i | tmask]);
    }
}

} // namespace

StateVector zero_state(int n) {
    if (n < 1 || n > kMaxQubits)
        raise(ErrorCode::Config,
              "qubit count " + std::to_string(n) + " outside [1, " +
                  std::to_string(kMaxQubits) + "]");
    StateVector state;
    state.n = n;
    state.amplitudes.assign(std::size_t{1} << n, Complex(0));
    state.amplitudes[0] = Complex(1);
    return state;
}

void apply_gate_inplace(StateVector& state, const Gate& gate) {
    validate_gate(gate, state.n);
    if (gate.kind == GateKind::Cnot)
        apply_cnot(state, gate.control, gate.target);
    else
        apply_single_qubit(state, gate_matrix(gate), gate.target);
}

StateVector apply_gate(StateVector state, const Gate& gate) {
    apply_gate_inplace(state, gate);
    return state;
}

StateVector apply_circuit(const Circuit& circuit) {
    validate_circuit(circuit);
    StateVector state = zero_state(circuit.n);
    for (const Gate& g : circuit.gates)
        apply_gate_inplace(state, g);
    return state;
}

void apply_circuit_inverse_inplace(StateVector& state, const Circuit& circuit) {
    if (state.n != circuit.n)
        raise(ErrorCode::Observable, "state/circuit qubit count mismatch");
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        if (it->kind == GateKind::Cnot)
            apply_cnot(state, it->control, it->target);
        else
            apply_single_qubit(state, gate_matrix_inverse(*it), it->target);
    }
}

double norm_squared(const StateVector& state) {
    double s = 0.0;
    for (const Complex& a : state.amplitudes)
        s += std::norm(a);
    return s;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.n != b.n)
        raise(ErrorCode::Observable, "qubit count mismatch in inner product");
    Complex s(0);
    for (std::size_t i = 0; i < a.dim(); ++i)
        s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return s;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

} // namespace qas
