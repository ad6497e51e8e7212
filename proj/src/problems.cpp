#include "qas/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qas {

Problem::Problem(int n, std::optional<NoiseModel> noise, std::shared_ptr<EvalCounter> counter)
    : n_(n), noise_(std::move(noise)), counter_(std::move(counter)) {
    if (n_ < 1)
        raise(ErrorCode::Problem, "problem qubit count must be >= 1");
    if (!counter_)
        raise(ErrorCode::Problem, "problem requires an evaluation counter");
    if (noise_) {
        noise_->validate();
        // A zero-probability model is the identity channel; use the pure
        // path so results coincide bit-for-bit with the noiseless setup.
        if (noise_->is_identity())
            noise_.reset();
    }
}

void Problem::check_circuit(const Circuit& circuit) const {
    if (circuit.n != n_)
        raise(ErrorCode::Problem, "circuit qubit count " + std::to_string(circuit.n) +
                                      " does not match problem on " + std::to_string(n_));
}

double Problem::cost(const Circuit& circuit) const {
    check_circuit(circuit);
    counter_->increment();
    if (noise_)
        return cost_of_density(apply_circuit_noisy(circuit, *noise_));
    return cost_of_state(apply_circuit(circuit));
}

double Problem::noiseless_cost(const Circuit& circuit) const {
    check_circuit(circuit);
    counter_->increment();
    return cost_of_state(apply_circuit(circuit));
}

std::pair<double, double> Problem::ratio_parts(const Circuit&) const {
    raise(ErrorCode::Problem, "cost of this problem is not a ratio of expectations");
}

// ---------------------------------------------------------------------------
// VQE

VqeProblem::VqeProblem(PauliSum hamiltonian, std::optional<NoiseModel> noise,
                       std::shared_ptr<EvalCounter> counter)
    : Problem(hamiltonian.qubit_count(), std::move(noise), std::move(counter)),
      hamiltonian_(std::move(hamiltonian)) {
    hamiltonian_.validate_hermitian();
}

double VqeProblem::cost_of_state(const StateVector& state) const {
    return pauli_sum_expectation(state, hamiltonian_);
}

double VqeProblem::cost_of_density(const DensityMatrix& rho) const {
    return dm_pauli_sum_expectation(rho, hamiltonian_);
}

// ---------------------------------------------------------------------------
// VQLS

namespace {

PauliSum local_projector(int n) {
    // P = I/2 + (1/2n) sum_j Z_j
    PauliSum p;
    p.terms.push_back({Complex(0.5), PauliString::identity(n)});
    for (int q = 0; q < n; ++q) {
        PauliString z = PauliString::identity(n);
        z.letters[static_cast<std::size_t>(q)] = PauliLetter::Z;
        p.terms.push_back({Complex(1.0 / (2.0 * n)), z});
    }
    return p;
}

struct PauliMatrixAction {
    std::size_t flip = 0;
    std::size_t sign = 0;
    Complex phase_y{1, 0};
};

PauliMatrixAction matrix_action(const PauliString& p, int n) {
    PauliMatrixAction a;
    int y_count = 0;
    for (int q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        switch (p.letters[static_cast<std::size_t>(q)]) {
        case PauliLetter::I: break;
        case PauliLetter::X: a.flip |= bit; break;
        case PauliLetter::Y: a.flip |= bit; a.sign |= bit; ++y_count; break;
        case PauliLetter::Z: a.sign |= bit; break;
        }
    }
    switch (y_count & 3) {
    case 0: a.phase_y = {1, 0}; break;
    case 1: a.phase_y = {0, 1}; break;
    case 2: a.phase_y = {-1, 0}; break;
    default: a.phase_y = {0, -1}; break;
    }
    return a;
}

double basis_sign(std::size_t index, std::size_t mask) {
    return (std::popcount(index & mask) & 1) ? -1.0 : 1.0;
}

// out += coeff * P * m  (column-preserving: row r of out gains phase(r^flip) * m[r^flip]).
void accumulate_pauli_left(DensityMatrix& out, const DensityMatrix& m, const PauliString& p,
                           Complex coeff) {
    const PauliMatrixAction a = matrix_action(p, m.n);
    const std::size_t dim = m.dim();
    for (std::size_t r = 0; r < dim; ++r) {
        const std::size_t src = r ^ a.flip;
        const Complex scale = coeff * a.phase_y * basis_sign(src, a.sign);
        for (std::size_t c = 0; c < dim; ++c)
            out.entries[r * dim + c] += scale * m.entries[src * dim + c];
    }
}

// out += conj(coeff) * m * P  (P Hermitian: column c of out gains phase(c) * m[., c^flip]).
void accumulate_pauli_right(DensityMatrix& out, const DensityMatrix& m, const PauliString& p,
                            Complex coeff) {
    const PauliMatrixAction a = matrix_action(p, m.n);
    const std::size_t dim = m.dim();
    for (std::size_t c = 0; c < dim; ++c) {
        const Complex scale = std::conj(coeff) * a.phase_y * basis_sign(c, a.sign);
        const std::size_t src = c ^ a.flip;
        for (std::size_t r = 0; r < dim; ++r)
            out.entries[r * dim + c] += scale * m.entries[r * dim + src];
    }
}

} // namespace

VqlsProblem::VqlsProblem(std::vector<Complex> coefficients, std::vector<PauliString> unitaries,
                         Circuit b_prep, std::optional<NoiseModel> noise,
                         std::shared_ptr<EvalCounter> counter)
    : Problem(b_prep.n, std::move(noise), std::move(counter)),
      coefficients_(std::move(coefficients)), unitaries_(std::move(unitaries)),
      b_prep_(std::move(b_prep)) {
    if (coefficients_.size() != unitaries_.size())
        raise(ErrorCode::Problem, "coefficient and unitary lists differ in length");
    if (coefficients_.empty())
        raise(ErrorCode::Problem, "linear system needs at least one term");
    const auto m = static_cast<long long>(coefficients_.size());
    if (m > 4LL * n_ * n_)
        raise(ErrorCode::Problem, "term count must stay polynomial (M <= 4n^2)");
    validate_circuit(b_prep_);
    for (std::size_t i = 0; i < unitaries_.size(); ++i) {
        if (unitaries_[i].size() != n_)
            raise(ErrorCode::Problem, "unitary string length does not match qubit count");
        a_sum_.terms.push_back({coefficients_[i], unitaries_[i]});
    }
    projector_ = local_projector(n_);
}

VqlsProblem VqlsProblem::demo_instance(double a0, double a1, double a2, double a3,
                                       std::optional<NoiseModel> noise,
                                       std::shared_ptr<EvalCounter> counter) {
    const int n = 4;
    std::vector<Complex> coeffs{Complex(a0), Complex(a1), Complex(a2), Complex(a3)};
    std::vector<PauliString> unitaries{
        PauliString::parse("IIII"),
        PauliString::parse("XIII"),
        PauliString::parse("IXII"),
        PauliString::parse("IIZZ"),
    };
    return VqlsProblem(std::move(coeffs), std::move(unitaries), root_circuit(n),
                       std::move(noise), std::move(counter));
}

std::pair<double, double> VqlsProblem::ratio_parts_of_state(const StateVector& v) const {
    // numerator = <w|U P U^dag|w>, denominator = <w|w>, with w = A v.
    StateVector w = apply_pauli_sum(a_sum_, v);
    const double den = norm_squared(w);
    apply_circuit_inverse_inplace(w, b_prep_);
    double num = 0.0;
    for (const PauliTerm& t : projector_.terms) {
        // projector coefficients are real by construction
        num += t.coefficient.real() * pauli_expectation_unnormalized(w, t.string);
    }
    return {num, den};
}

std::pair<double, double> VqlsProblem::ratio_parts(const Circuit& circuit) const {
    check_circuit(circuit);
    counter_->increment();
    if (noise_)
        return ratio_parts_of_density(apply_circuit_noisy(circuit, *noise_));
    return ratio_parts_of_state(apply_circuit(circuit));
}

double VqlsProblem::cost_from_parts(double num, double den) const {
    if (std::abs(den) <= 1e-14)
        raise(ErrorCode::DegenerateInstance, "vanishing denominator: A annihilates the state");
    return std::clamp(1.0 - num / den, 0.0, 1.0);
}

double VqlsProblem::cost_of_state(const StateVector& state) const {
    auto [num, den] = ratio_parts_of_state(state);
    return cost_from_parts(num, den);
}

std::pair<double, double> VqlsProblem::ratio_parts_of_density(const DensityMatrix& rho) const {
    // numerator = Tr(A^dag U P U^dag A rho), denominator = Tr(A^dag A rho).
    // Work on sigma = A rho A^dag, which stays at density-matrix size.
    const std::size_t dim = rho.dim();
    DensityMatrix left;
    left.n = rho.n;
    left.entries.assign(dim * dim, Complex(0));
    DensityMatrix sigma = left;
    for (std::size_t k = 0; k < unitaries_.size(); ++k)
        accumulate_pauli_left(left, rho, unitaries_[k], coefficients_[k]);
    for (std::size_t k = 0; k < unitaries_.size(); ++k)
        accumulate_pauli_right(sigma, left, unitaries_[k], coefficients_[k]);

    const double den = trace_real(sigma);
    // num = Tr(P U^dag sigma U): conjugate sigma by the inverse of b_prep.
    apply_circuit_inverse_inplace(sigma, b_prep_);
    const double num = dm_pauli_sum_expectation(sigma, projector_);
    return {num, den};
}

double VqlsProblem::cost_of_density(const DensityMatrix& rho) const {
    const auto [num, den] = ratio_parts_of_density(rho);
    return cost_from_parts(num, den);
}

// ---------------------------------------------------------------------------
// Oracle approximation

OracleProblem::OracleProblem(StateVector target, double epsilon, std::optional<NoiseModel> noise,
                             std::shared_ptr<EvalCounter> counter)
    : Problem(target.n, std::move(noise), std::move(counter)), target_(std::move(target)),
      epsilon_(epsilon) {
    if (epsilon_ <= 0.0 || epsilon_ >= 1.0)
        raise(ErrorCode::Problem, "epsilon must lie in (0, 1)");
    const double norm = norm_squared(target_);
    if (std::abs(norm - 1.0) > 1e-9)
        raise(ErrorCode::Problem, "target state is not normalized");
}

double OracleProblem::cost_of_state(const StateVector& state) const {
    return 1.0 - fidelity(state, target_);
}

double OracleProblem::cost_of_density(const DensityMatrix& rho) const {
    return 1.0 - dm_fidelity_with_pure(rho, target_);
}

bool OracleProblem::is_epsilon_approx_cost(double noiseless_cost) const {
    // cost = 1 - fidelity, so fidelity >= 1 - eps <=> cost <= eps
    return noiseless_cost <= epsilon_;
}

bool OracleProblem::is_epsilon_approx(const Circuit& circuit) const {
    return is_epsilon_approx_cost(noiseless_cost(circuit));
}

// ---------------------------------------------------------------------------
// Hamiltonian files

PauliSum parse_hamiltonian(std::string_view text) {
    PauliSum sum;
    int line_no = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        const std::size_t eol = text.find('\n', offset);
        std::string_view line = text.substr(
            offset, eol == std::string_view::npos ? std::string_view::npos : eol - offset);
        offset = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string owned(line);
        const std::size_t hash = owned.find('#');
        if (hash != std::string::npos)
            owned.resize(hash);
        std::istringstream in(owned);
        double coeff;
        std::string letters;
        if (!(in >> coeff)) {
            if (in.eof())
                continue; // blank or comment-only line
            raise(ErrorCode::Parse,
                  "line " + std::to_string(line_no) + ": expected real coefficient");
        }
        if (!(in >> letters))
            raise(ErrorCode::Parse,
                  "line " + std::to_string(line_no) + ": expected Pauli letters after coefficient");
        std::string trailing;
        if (in >> trailing)
            raise(ErrorCode::Parse, "line " + std::to_string(line_no) + ": unexpected trailing text");
        PauliString str;
        try {
            str = PauliString::parse(letters);
        } catch (const Error& e) {
            raise(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!sum.terms.empty() && str.size() != sum.qubit_count())
            raise(ErrorCode::Parse, "line " + std::to_string(line_no) +
                                        ": Pauli string length " + std::to_string(str.size()) +
                                        " differs from earlier terms of length " +
                                        std::to_string(sum.qubit_count()));
        sum.terms.push_back({Complex(coeff), std::move(str)});
    }
    if (sum.terms.empty())
        raise(ErrorCode::Parse, "Hamiltonian file contains no terms");
    sum.validate_hermitian();
    return sum;
}

PauliSum load_hamiltonian_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::Io, "cannot open Hamiltonian file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_hamiltonian(buf.str());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse)
            raise(ErrorCode::Parse, path + ": " + e.what());
        throw;
    }
}

} // namespace qas
