#include "qas/density_matrix.hpp"

#include <array>
#include <bit>
#include <cmath>

namespace qas {

void NoiseModel::validate() const {
    if (bit_flip_p < 0.0 || bit_flip_p > 1.0 || depolarizing_p < 0.0 || depolarizing_p > 1.0)
        raise(ErrorCode::Config, "noise probabilities must lie in [0, 1]");
}

DensityMatrix zero_density_matrix(int n) {
    if (n < 1 || n > kMaxDensityQubits)
        raise(ErrorCode::Resource,
              "density matrix capped at " + std::to_string(kMaxDensityQubits) + " qubits");
    DensityMatrix rho;
    rho.n = n;
    rho.entries.assign((std::size_t{1} << n) * (std::size_t{1} << n), Complex(0));
    rho.entries[0] = Complex(1);
    return rho;
}

DensityMatrix pure_density_matrix(const StateVector& state) {
    if (state.n > kMaxDensityQubits)
        raise(ErrorCode::Resource, "state too large for a density matrix");
    DensityMatrix rho;
    rho.n = state.n;
    const std::size_t dim = state.dim();
    rho.entries.resize(dim * dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            rho.entries[r * dim + c] = state.amplitudes[r] * std::conj(state.amplitudes[c]);
    return rho;
}

namespace {

using Matrix2 = std::array<Complex, 4>;

Matrix2 dense_matrix(const Gate& gate) {
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

// Left-multiply rho by a single-qubit matrix: rows paired on the qubit's bit.
void left_multiply(DensityMatrix& rho, const Matrix2& m, int q) {
    const std::size_t dim = rho.dim();
    const std::size_t stride = std::size_t{1} << (rho.n - 1 - q);
    for (std::size_t base = 0; base < dim; base += 2 * stride)
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t r0 = base + off, r1 = r0 + stride;
            for (std::size_t c = 0; c < dim; ++c) {
                const Complex a = rho.entries[r0 * dim + c];
                const Complex b = rho.entries[r1 * dim + c];
                rho.entries[r0 * dim + c] = m[0] * a + m[1] * b;
                rho.entries[r1 * dim + c] = m[2] * a + m[3] * b;
            }
        }
}

// Right-multiply rho by the conjugate transpose of m: columns paired.
void right_multiply_dagger(DensityMatrix& rho, const Matrix2& m, int q) {
    const std::size_t dim = rho.dim();
    const std::size_t stride = std::size_t{1} << (rho.n - 1 - q);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t base = 0; base < dim; base += 2 * stride)
            for (std::size_t off = 0; off < stride; ++off) {
                const std::size_t c0 = base + off, c1 = c0 + stride;
                const Complex a = rho.entries[r * dim + c0];
                const Complex b = rho.entries[r * dim + c1];
                rho.entries[r * dim + c0] = a * std::conj(m[0]) + b * std::conj(m[1]);
                rho.entries[r * dim + c1] = a * std::conj(m[2]) + b * std::conj(m[3]);
            }
}

void conjugate_single_qubit(DensityMatrix& rho, const Matrix2& m, int q) {
    left_multiply(rho, m, q);
    right_multiply_dagger(rho, m, q);
}

void conjugate_cnot(DensityMatrix& rho, int control, int target) {
    const std::size_t dim = rho.dim();
    const std::size_t cmask = std::size_t{1} << (rho.n - 1 - control);
    const std::size_t tmask = std::size_t{1} << (rho.n - 1 - target);
    auto permute = [&](std::size_t i) {
        return (i & cmask) ? (i ^ tmask) : i;
    };
    // CNOT is a basis permutation: rho'[pr][pc] = rho[r][c].
    DensityMatrix out = rho;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            out.entries[permute(r) * dim + permute(c)] = rho.entries[r * dim + c];
    rho = std::move(out);
}

const Matrix2 kPauliX = {Complex(0), Complex(1), Complex(1), Complex(0)};
const Matrix2 kPauliY = {Complex(0), Complex(0, -1), Complex(0, 1), Complex(0)};
const Matrix2 kPauliZ = {Complex(1), Complex(0), Complex(0), Complex(-1)};

DensityMatrix conjugated_copy(const DensityMatrix& rho, const Matrix2& m, int q) {
    DensityMatrix out = rho;
    conjugate_single_qubit(out, m, q);
    return out;
}

void mix_into(DensityMatrix& acc, double w_acc, const DensityMatrix& other, double w_other) {
    for (std::size_t i = 0; i < acc.entries.size(); ++i)
        acc.entries[i] = w_acc * acc.entries[i] + w_other * other.entries[i];
}

} // namespace

void apply_gate_inplace(DensityMatrix& rho, const Gate& gate) {
    validate_gate(gate, rho.n);
    if (gate.kind == GateKind::Cnot)
        conjugate_cnot(rho, gate.control, gate.target);
    else
        conjugate_single_qubit(rho, dense_matrix(gate), gate.target);
}

void apply_circuit_inverse_inplace(DensityMatrix& rho, const Circuit& circuit) {
    if (rho.n != circuit.n)
        raise(ErrorCode::Observable, "density matrix/circuit qubit count mismatch");
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        if (it->kind == GateKind::Cnot) {
            conjugate_cnot(rho, it->control, it->target);
        } else {
            const Matrix2 m = dense_matrix(*it);
            const Matrix2 inv = {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
                                 std::conj(m[3])};
            conjugate_single_qubit(rho, inv, it->target);
        }
    }
}

void apply_bit_flip_inplace(DensityMatrix& rho, int qubit, double p) {
    if (p == 0.0)
        return;
    DensityMatrix flipped = conjugated_copy(rho, kPauliX, qubit);
    mix_into(rho, 1.0 - p, flipped, p);
}

void apply_depolarizing_inplace(DensityMatrix& rho, int qubit, double p) {
    if (p == 0.0)
        return;
    DensityMatrix x = conjugated_copy(rho, kPauliX, qubit);
    DensityMatrix y = conjugated_copy(rho, kPauliY, qubit);
    DensityMatrix z = conjugated_copy(rho, kPauliZ, qubit);
    const double w = p / 3.0;
    for (std::size_t i = 0; i < rho.entries.size(); ++i)
        rho.entries[i] = (1.0 - p) * rho.entries[i] +
                         w * (x.entries[i] + y.entries[i] + z.entries[i]);
}

DensityMatrix apply_circuit_noisy(const Circuit& circuit, const NoiseModel& noise) {
    validate_circuit(circuit);
    noise.validate();
    DensityMatrix rho = zero_density_matrix(circuit.n);
    for (const Gate& g : circuit.gates) {
        apply_gate_inplace(rho, g);
        if (noise.depolarizing_p > 0.0) {
            apply_depolarizing_inplace(rho, g.target, noise.depolarizing_p);
            if (g.kind == GateKind::Cnot)
                apply_depolarizing_inplace(rho, g.control, noise.depolarizing_p);
        }
    }
    if (noise.bit_flip_p > 0.0)
        for (int q = 0; q < circuit.n; ++q)
            apply_bit_flip_inplace(rho, q, noise.bit_flip_p);
    return rho;
}

double trace_real(const DensityMatrix& rho) {
    const std::size_t dim = rho.dim();
    double t = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        t += rho.entries[i * dim + i].real();
    return t;
}

double dm_pauli_expectation(const DensityMatrix& rho, const PauliString& p) {
    if (p.size() != rho.n)
        raise(ErrorCode::Observable, "Pauli string length does not match qubit count");
    // Tr(rho P) = sum_i rho[i][i^flip] * phase(i), with P|i> = phase(i)|i^flip>.
    std::uint64_t flip = 0, sign = 0;
    int y_count = 0;
    const std::size_t dim = rho.dim();
    for (int q = 0; q < rho.n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (rho.n - 1 - q);
        switch (p.letters[static_cast<std::size_t>(q)]) {
        case PauliLetter::I: break;
        case PauliLetter::X: flip |= bit; break;
        case PauliLetter::Y: flip |= bit; sign |= bit; ++y_count; break;
        case PauliLetter::Z: sign |= bit; break;
        }
    }
    Complex phase_y = [&] {
        switch (y_count & 3) {
        case 0: return Complex(1, 0);
        case 1: return Complex(0, 1);
        case 2: return Complex(-1, 0);
        default: return Complex(0, -1);
        }
    }();
    Complex acc(0);
    for (std::size_t i = 0; i < dim; ++i) {
        const double sgn = (std::popcount(i & sign) & 1) ? -1.0 : 1.0;
        acc += rho.entries[i * dim + (i ^ flip)] * sgn;
    }
    acc *= phase_y;
    if (std::abs(acc.imag()) > 1e-10)
        raise(ErrorCode::Internal, "density-matrix expectation has imaginary residue");
    return acc.real();
}

double dm_pauli_sum_expectation(const DensityMatrix& rho, const PauliSum& h) {
    h.validate_hermitian();
    if (h.qubit_count() != rho.n)
        raise(ErrorCode::Observable, "Pauli sum qubit count does not match density matrix");
    double acc = 0.0;
    for (const PauliTerm& t : h.terms)
        acc += t.coefficient.real() * dm_pauli_expectation(rho, t.string);
    return acc;
}

double dm_fidelity_with_pure(const DensityMatrix& rho, const StateVector& phi) {
    if (rho.n != phi.n)
        raise(ErrorCode::Observable, "qubit count mismatch");
    const std::size_t dim = rho.dim();
    Complex acc(0);
    for (std::size_t r = 0; r < dim; ++r) {
        Complex row(0);
        for (std::size_t c = 0; c < dim; ++c)
            row += rho.entries[r * dim + c] * phi.amplitudes[c];
        acc += std::conj(phi.amplitudes[r]) * row;
    }
    if (std::abs(acc.imag()) > 1e-10)
        raise(ErrorCode::Internal, "fidelity has imaginary residue");
    return acc.real();
}

} // namespace qas
