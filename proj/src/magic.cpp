#include "qas/magic.hpp"

#include <bit>
#include <cmath>

#include "qas/error.hpp"

namespace qas {

namespace {

// <psi|P|psi> for the string given by (flip, sign) masks, where flip marks
// X/Y qubits and sign marks Y/Z qubits. The i^{|Y|} prefactor cancels in
// the fourth power and only makes the bracket real, so it is applied here.
double masked_expectation(const StateVector& state, std::uint64_t flip, std::uint64_t sign,
                          int y_count) {
    Complex acc(0);
    const std::uint64_t dim = state.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double sgn = (std::popcount(i & sign) & 1) ? -1.0 : 1.0;
        acc += std::conj(state.amplitudes[i ^ flip]) * (sgn * state.amplitudes[i]);
    }
    switch (y_count & 3) {
    case 0: return acc.real();
    case 1: return -acc.imag();
    case 2: return -acc.real();
    default: return acc.imag();
    }
}

} // namespace

double m2_entropy(const StateVector& state) {
    const int n = state.n;
    if (n > kMaxMagicQubits)
        raise(ErrorCode::Resource,
              "M2 enumeration capped at " + std::to_string(kMaxMagicQubits) + " qubits");

    // Letters per qubit encoded in two bits: (flip, sign) in
    // {I:(0,0), X:(1,0), Y:(1,1), Z:(0,1)}.
    double fourth_moment = 0.0;
    const std::uint64_t masks = std::uint64_t{1} << (2 * n);
    for (std::uint64_t code = 0; code < masks; ++code) {
        std::uint64_t flip = 0, sign = 0;
        int y_count = 0;
        for (int q = 0; q < n; ++q) {
            const int letter = static_cast<int>((code >> (2 * q)) & 3u);
            const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
            if (letter == 1 || letter == 2)
                flip |= bit;
            if (letter == 2 || letter == 3)
                sign |= bit;
            if (letter == 2)
                ++y_count;
        }
        const double e = masked_expectation(state, flip, sign, y_count);
        const double e2 = e * e;
        fourth_moment += e2 * e2;
    }
    const double value = -std::log2(fourth_moment / static_cast<double>(std::uint64_t{1} << n));
    if (value < -1e-9)
        raise(ErrorCode::Internal, "negative M2 beyond tolerance");
    return value;
}

} // namespace qas
