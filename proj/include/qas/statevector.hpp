#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qas/circuit.hpp"

namespace qas {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 14;

// Pure n-qubit state as 2^n amplitudes. Basis convention: qubit 0 is the
// most significant bit of the basis index, so |q0 q1 ... q_{n-1}> maps to
// index (q0 << (n-1)) | ... | q_{n-1}.
struct StateVector {
    int n = 0;
    std::vector<Complex> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
};

StateVector zero_state(int n);

// Bit of qubit `q` inside basis index `index` under the convention above.
inline int qubit_bit(std::uint64_t index, int q, int n) {
    return static_cast<int>((index >> (n - 1 - q)) & 1u);
}

void apply_gate_inplace(StateVector& state, const Gate& gate);
StateVector apply_gate(StateVector state, const Gate& gate);

// zero_state(circuit.n) with each gate applied in sequence order.
StateVector apply_circuit(const Circuit& circuit);

// Applies the inverse circuit to an existing state (exact gate inverses,
// gates in reverse order).
void apply_circuit_inverse_inplace(StateVector& state, const Circuit& circuit);

double norm_squared(const StateVector& state);
Complex inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2 for pure states.
double fidelity(const StateVector& a, const StateVector& b);

} // namespace qas
