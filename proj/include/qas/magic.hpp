#pragma once

#include "qas/statevector.hpp"

namespace qas {

inline constexpr int kMaxMagicQubits = 8;

// Stabilizer 2-Renyi entropy M2 = -log2( sum_P <psi|P|psi>^4 / 2^n ) over
// all 4^n Pauli strings. Zero exactly on stabilizer states; capped at
// kMaxMagicQubits because the enumeration is exhaustive.
double m2_entropy(const StateVector& state);

} // namespace qas
