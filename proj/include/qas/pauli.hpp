#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "qas/statevector.hpp"

namespace qas {

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

// Tensor product of single-qubit Paulis, one letter per qubit (letter 0
// acts on qubit 0, the most significant bit).
struct PauliString {
    std::vector<PauliLetter> letters;

    int size() const { return static_cast<int>(letters.size()); }
    bool is_identity() const;

    static PauliString identity(int n);
    static PauliString parse(std::string_view text); // e.g. "ZIXY"
    std::string str() const;

    friend bool operator==(const PauliString& a, const PauliString& b) = default;
};

struct PauliTerm {
    Complex coefficient;
    PauliString string;
};

// Linear combination of Pauli strings on a fixed qubit count.
struct PauliSum {
    std::vector<PauliTerm> terms;

    int qubit_count() const { return terms.empty() ? 0 : terms.front().string.size(); }

    // All strings of equal length.
    void validate() const;
    // Additionally all coefficients real within `tol` (observable use).
    void validate_hermitian(double tol = 1e-12) const;
};

// <psi|P|psi>. Real within 1e-10 by construction; the residue is checked.
double pauli_expectation(const StateVector& state, const PauliString& p);

// Same bracket without assuming a normalized state (scales with <psi|psi>).
double pauli_expectation_unnormalized(const StateVector& state, const PauliString& p);

// <psi|H|psi> for a Hermitian Pauli sum.
double pauli_sum_expectation(const StateVector& state, const PauliSum& h);

// Applies sum_m c_m P_m to a state (not unitary in general).
StateVector apply_pauli_sum(const PauliSum& a, const StateVector& state);

inline constexpr int kMaxDiagQubits = 12;

// Minimum eigenvalue of the dense matrix of `h`. Brute-force oracle; capped
// at kMaxDiagQubits.
double exact_ground_energy(const PauliSum& h);

} // namespace qas
