#include "qas/pauli.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>

namespace qas {

bool PauliString::is_identity() const {
    for (PauliLetter l : letters)
        if (l != PauliLetter::I)
            return false;
    return true;
}

PauliString PauliString::identity(int n) {
    PauliString p;
    p.letters.assign(static_cast<std::size_t>(n), PauliLetter::I);
    return p;
}

PauliString PauliString::parse(std::string_view text) {
    PauliString p;
    p.letters.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        switch (text[i]) {
        case 'I': p.letters.push_back(PauliLetter::I); break;
        case 'X': p.letters.push_back(PauliLetter::X); break;
        case 'Y': p.letters.push_back(PauliLetter::Y); break;
        case 'Z': p.letters.push_back(PauliLetter::Z); break;
        default:
            raise(ErrorCode::Parse,
                  std::string("invalid Pauli letter `") + text[i] + "` at position " +
                      std::to_string(i));
        }
    }
    if (p.letters.empty())
        raise(ErrorCode::Parse, "empty Pauli string");
    return p;
}

std::string PauliString::str() const {
    static constexpr char names[] = {'I', 'X', 'Y', 'Z'};
    std::string s;
    s.reserve(letters.size());
    for (PauliLetter l : letters)
        s += names[static_cast<int>(l)];
    return s;
}

void PauliSum::validate() const {
    if (terms.empty())
        raise(ErrorCode::Observable, "empty Pauli sum");
    const int n = terms.front().string.size();
    for (const PauliTerm& t : terms)
        if (t.string.size() != n)
            raise(ErrorCode::Observable, "Pauli strings of unequal length in one sum");
}

void PauliSum::validate_hermitian(double tol) const {
    validate();
    for (const PauliTerm& t : terms)
        if (std::abs(t.coefficient.imag()) > tol)
            raise(ErrorCode::Observable,
                  "non-Hermitian Pauli sum: term " + t.string.str() +
                      " has imaginary coefficient");
}

namespace {

struct PauliMasks {
    std::uint64_t flip = 0; // X and Y letters flip the qubit's bit
    std::uint64_t sign = 0; // Y and Z letters contribute (-1)^bit
    int y_count = 0;
};

PauliMasks masks_of(const PauliString& p, int n) {
    PauliMasks m;
    for (int q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        switch (p.letters[static_cast<std::size_t>(q)]) {
        case PauliLetter::I:
            break;
        case PauliLetter::X:
            m.flip |= bit;
            break;
        case PauliLetter::Y:
            m.flip |= bit;
            m.sign |= bit;
            ++m.y_count;
            break;
        case PauliLetter::Z:
            m.sign |= bit;
            break;
        }
    }
    return m;
}

Complex i_power(int k) {
    switch (k & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
    }
}

Complex pauli_bracket(const StateVector& state, const PauliMasks& m) {
    Complex acc(0);
    const std::uint64_t dim = state.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double sgn = (std::popcount(i & m.sign) & 1) ? -1.0 : 1.0;
        acc += std::conj(state.amplitudes[i ^ m.flip]) * (sgn * state.amplitudes[i]);
    }
    return i_power(m.y_count) * acc;
}

} // namespace

double pauli_expectation(const StateVector& state, const PauliString& p) {
    return pauli_expectation_unnormalized(state, p);
}

double pauli_expectation_unnormalized(const StateVector& state, const PauliString& p) {
    if (p.size() != state.n)
        raise(ErrorCode::Observable, "Pauli string length does not match qubit count");
    const Complex value = pauli_bracket(state, masks_of(p, state.n));
    if (std::abs(value.imag()) > 1e-10)
        raise(ErrorCode::Internal, "Pauli expectation has imaginary residue");
    return value.real();
}

double pauli_sum_expectation(const StateVector& state, const PauliSum& h) {
    h.validate_hermitian();
    if (h.qubit_count() != state.n)
        raise(ErrorCode::Observable, "Pauli sum qubit count does not match state");
    double acc = 0.0;
    for (const PauliTerm& t : h.terms)
        acc += t.coefficient.real() * pauli_expectation(state, t.string);
    return acc;
}

StateVector apply_pauli_sum(const PauliSum& a, const StateVector& state) {
    a.validate();
    if (a.qubit_count() != state.n)
        raise(ErrorCode::Observable, "Pauli sum qubit count does not match state");
    StateVector out;
    out.n = state.n;
    out.amplitudes.assign(state.dim(), Complex(0));
    for (const PauliTerm& t : a.terms) {
        const PauliMasks m = masks_of(t.string, state.n);
        const Complex scale = t.coefficient * i_power(m.y_count);
        for (std::uint64_t i = 0; i < state.dim(); ++i) {
            const double sgn = (std::popcount(i & m.sign) & 1) ? -1.0 : 1.0;
            out.amplitudes[i ^ m.flip] += scale * sgn * state.amplitudes[i];
        }
    }
    return out;
}

double exact_ground_energy(const PauliSum& h) {
    h.validate_hermitian();
    const int n = h.qubit_count();
    if (n > kMaxDiagQubits)
        raise(ErrorCode::Resource,
              "dense diagonalization capped at " + std::to_string(kMaxDiagQubits) + " qubits");
    const std::int64_t dim = std::int64_t{1} << n;
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
    for (const PauliTerm& t : h.terms) {
        const PauliMasks m = masks_of(t.string, n);
        const Complex scale = t.coefficient * i_power(m.y_count);
        for (std::int64_t col = 0; col < dim; ++col) {
            const double sgn =
                (std::popcount(static_cast<std::uint64_t>(col) & m.sign) & 1) ? -1.0 : 1.0;
            mat(static_cast<std::int64_t>(col ^ static_cast<std::int64_t>(m.flip)), col) +=
                scale * sgn;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        raise(ErrorCode::Internal, "eigensolver failed");
    return solver.eigenvalues().minCoeff();
}

} // namespace qas
