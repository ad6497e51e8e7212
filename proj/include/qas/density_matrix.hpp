#pragma once

#include "qas/pauli.hpp"

namespace qas {

inline constexpr int kMaxDensityQubits = 10;

struct NoiseModel {
    double bit_flip_p = 0.0;
    double depolarizing_p = 0.0;

    bool is_identity() const { return bit_flip_p == 0.0 && depolarizing_p == 0.0; }
    void validate() const;
};

// Mixed n-qubit state, row-major 2^n x 2^n entries. Same basis convention
// as StateVector.
struct DensityMatrix {
    int n = 0;
    std::vector<Complex> entries;

    std::size_t dim() const { return std::size_t{1} << n; }
    Complex& at(std::size_t row, std::size_t col) { return entries[row * dim() + col]; }
    const Complex& at(std::size_t row, std::size_t col) const {
        return entries[row * dim() + col];
    }
};

DensityMatrix zero_density_matrix(int n);
DensityMatrix pure_density_matrix(const StateVector& state);

void apply_gate_inplace(DensityMatrix& rho, const Gate& gate);

// Conjugates rho by the inverse circuit (exact gate inverses, reverse order).
void apply_circuit_inverse_inplace(DensityMatrix& rho, const Circuit& circuit);

// rho -> (1-p) rho + p X rho X on one qubit.
void apply_bit_flip_inplace(DensityMatrix& rho, int qubit, double p);
// rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z) on one qubit.
void apply_depolarizing_inplace(DensityMatrix& rho, int qubit, double p);

// |0..0><0..0| evolved through the circuit: each gate as a unitary
// conjugation followed by a depolarizing channel on the qubits it acts on;
// a bit-flip channel on every qubit after the final gate (readout model).
DensityMatrix apply_circuit_noisy(const Circuit& circuit, const NoiseModel& noise);

double trace_real(const DensityMatrix& rho);

// Tr(rho P) for one string / a Hermitian sum.
double dm_pauli_expectation(const DensityMatrix& rho, const PauliString& p);
double dm_pauli_sum_expectation(const DensityMatrix& rho, const PauliSum& h);

// <phi|rho|phi>: fidelity between a pure target and a mixed state.
double dm_fidelity_with_pure(const DensityMatrix& rho, const StateVector& phi);

} // namespace qas
