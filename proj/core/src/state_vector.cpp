#include "aqs/state_vector.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace aqs {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t checked_dim(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw SizeError("qubit count " + std::to_string(num_qubits) + " outside 1.." +
                        std::to_string(kMaxQubits));
    return std::size_t{1} << num_qubits;
}

}  // namespace

std::string_view to_string(BellOutcome outcome) {
    switch (outcome) {
        case BellOutcome::PhiPlus: return "phi+";
        case BellOutcome::PhiMinus: return "phi-";
        case BellOutcome::PsiPlus: return "psi+";
        case BellOutcome::PsiMinus: return "psi-";
    }
    throw StateError("invalid BellOutcome value");
}

BellOutcome bell_outcome_from_string(std::string_view text) {
    for (BellOutcome o : kAllBellOutcomes)
        if (text == to_string(o)) return o;
    throw StateError("unknown Bell outcome label '" + std::string(text) + "'");
}

QubitState haar_qubit(Rng& rng) {
    while (true) {
        const double ar = standard_normal(rng);
        const double ai = standard_normal(rng);
        const double br = standard_normal(rng);
        const double bi = standard_normal(rng);
        const double norm = std::sqrt(ar * ar + ai * ai + br * br + bi * bi);
        if (norm < 1e-6) continue;  // astronomically rare
        return {Complex{ar / norm, ai / norm}, Complex{br / norm, bi / norm}};
    }
}

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits), amps_(checked_dim(num_qubits), Complex{0.0, 0.0}) {
    amps_[0] = Complex{1.0, 0.0};
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != checked_dim(num_qubits))
        throw SizeError(std::to_string(amps_.size()) + " amplitudes given for " +
                        std::to_string(num_qubits) + " qubits");
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > 1e-8)
        throw NormalizationError("amplitude norm^2 = " + std::to_string(n2) + " is not 1");
    renormalize();
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amps_) total += std::norm(a);
    return total;
}

double StateVector::probability_of_one(int q) const {
    check_qubit(q);
    const std::size_t m = mask_of(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (i & m) p += std::norm(amps_[i]);
    return p;
}

void StateVector::check_qubit(int q) const {
    if (q < 1 || q > num_qubits_)
        throw IndexError("qubit index " + std::to_string(q) + " outside 1.." +
                         std::to_string(num_qubits_));
}

void StateVector::renormalize() {
    const double norm = std::sqrt(norm_squared());
    if (norm < kProbFloor) throw StateError("cannot renormalize a zero state");
    for (auto& a : amps_) a /= norm;
}

void StateVector::x(int q) {
    check_qubit(q);
    const std::size_t m = mask_of(q);
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (!(i & m)) std::swap(amps_[i], amps_[i | m]);
}

void StateVector::z(int q) {
    check_qubit(q);
    const std::size_t m = mask_of(q);
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (i & m) amps_[i] = -amps_[i];
}

void StateVector::h(int q) {
    check_qubit(q);
    const std::size_t m = mask_of(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & m) continue;
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i | m];
        amps_[i] = (a0 + a1) * kInvSqrt2;
        amps_[i | m] = (a0 - a1) * kInvSqrt2;
    }
}

void StateVector::cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) return;  // identity by convention
    const std::size_t mc = mask_of(control);
    const std::size_t mt = mask_of(target);
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if ((i & mc) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
}

void StateVector::cswap(int control, int a, int b) {
    check_qubit(control);
    check_qubit(a);
    check_qubit(b);
    if (control == a || control == b || a == b)
        throw IndexError("cswap requires three distinct qubits");
    const std::size_t mc = mask_of(control);
    const std::size_t ma = mask_of(a);
    const std::size_t mb = mask_of(b);
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if ((i & mc) && (i & ma) && !(i & mb)) std::swap(amps_[i], amps_[(i ^ ma) | mb]);
}

int StateVector::measure(int q, Rng& rng) {
    const double p1 = probability_of_one(q);
    const double u = uniform_double(rng);
    int bit;
    if (p1 < kProbFloor)
        bit = 0;
    else if (p1 > 1.0 - kProbFloor)
        bit = 1;
    else
        bit = u < p1 ? 1 : 0;
    const std::size_t m = mask_of(q);
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (static_cast<int>((i & m) != 0) != bit) amps_[i] = Complex{0.0, 0.0};
    renormalize();
    return bit;
}

StateVector basis_state(int num_qubits, const Bits& bits) {
    const std::size_t dim = checked_dim(num_qubits);
    if (bits.size() != static_cast<std::size_t>(num_qubits))
        throw SizeError(std::to_string(bits.size()) + " bits given for " +
                        std::to_string(num_qubits) + " qubits");
    std::size_t index = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) throw SizeError("bits must be 0 or 1");
        index = (index << 1) | static_cast<std::size_t>(b);
    }
    std::vector<Complex> amps(dim, Complex{0.0, 0.0});
    amps[index] = Complex{1.0, 0.0};
    return StateVector(num_qubits, std::move(amps));
}

StateVector from_product(std::span<const QubitState> qubits) {
    if (qubits.empty()) throw SizeError("from_product needs at least one qubit");
    checked_dim(static_cast<int>(qubits.size()));
    for (const auto& qs : qubits) {
        const double n2 = std::norm(qs.alpha) + std::norm(qs.beta);
        if (std::abs(n2 - 1.0) > 1e-8)
            throw NormalizationError("|alpha|^2 + |beta|^2 = " + std::to_string(n2) +
                                     " is not 1");
    }
    std::vector<Complex> amps{Complex{1.0, 0.0}};
    for (const auto& qs : qubits) {
        std::vector<Complex> next(amps.size() * 2);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            next[2 * i] = amps[i] * qs.alpha;
            next[2 * i + 1] = amps[i] * qs.beta;
        }
        amps = std::move(next);
    }
    return StateVector(static_cast<int>(qubits.size()), std::move(amps));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const int n = a.num_qubits() + b.num_qubits();
    checked_dim(n);
    std::vector<Complex> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            amps[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
    return StateVector(n, std::move(amps));
}

StateVector apply_pauli(StateVector state, int q, Pauli which) {
    if (which == Pauli::X)
        state.x(q);
    else
        state.z(q);
    return state;
}

StateVector apply_cnot(StateVector state, int control, int target) {
    state.cnot(control, target);
    return state;
}

StateVector apply_hadamard(StateVector state, int q) {
    state.h(q);
    return state;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits())
        throw SizeError("fidelity of " + std::to_string(a.num_qubits()) + "-qubit and " +
                        std::to_string(b.num_qubits()) + "-qubit states");
    Complex inner{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i)
        inner += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    return std::min(1.0, std::norm(inner));
}

std::pair<int, StateVector> measure_qubit(StateVector state, int q, Rng& rng) {
    const int bit = state.measure(q, rng);
    return {bit, std::move(state)};
}

std::array<double, 4> bell_probabilities(const StateVector& state, int q1, int q2) {
    state.check_qubit(q1);
    state.check_qubit(q2);
    if (q1 == q2) throw IndexError("Bell measurement requires two distinct qubits");
    const std::size_t m1 = state.mask_of(q1);
    const std::size_t m2 = state.mask_of(q2);
    std::array<double, 4> probs{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & (m1 | m2)) continue;  // visit each (q1,q2)-group once via its 00 index
        const Complex a00 = state.amps_[i];
        const Complex a01 = state.amps_[i | m2];
        const Complex a10 = state.amps_[i | m1];
        const Complex a11 = state.amps_[i | m1 | m2];
        probs[0] += 0.5 * std::norm(a00 + a11);
        probs[1] += 0.5 * std::norm(a00 - a11);
        probs[2] += 0.5 * std::norm(a01 + a10);
        probs[3] += 0.5 * std::norm(a01 - a10);
    }
    return probs;
}

StateVector bell_collapse(StateVector state, int q1, int q2, BellOutcome outcome) {
    state.check_qubit(q1);
    state.check_qubit(q2);
    if (q1 == q2) throw IndexError("Bell measurement requires two distinct qubits");
    const std::size_t m1 = state.mask_of(q1);
    const std::size_t m2 = state.mask_of(q2);
    double prob = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & (m1 | m2)) continue;
        const Complex a00 = state.amps_[i];
        const Complex a01 = state.amps_[i | m2];
        const Complex a10 = state.amps_[i | m1];
        const Complex a11 = state.amps_[i | m1 | m2];
        // Half the projected coefficient lands on each member of the pair,
        // leaving (q1,q2) in the measured Bell state.
        Complex c;
        switch (outcome) {
            case BellOutcome::PhiPlus:
                c = 0.5 * (a00 + a11);
                state.amps_[i] = c;
                state.amps_[i | m1 | m2] = c;
                state.amps_[i | m2] = state.amps_[i | m1] = Complex{0.0, 0.0};
                break;
            case BellOutcome::PhiMinus:
                c = 0.5 * (a00 - a11);
                state.amps_[i] = c;
                state.amps_[i | m1 | m2] = -c;
                state.amps_[i | m2] = state.amps_[i | m1] = Complex{0.0, 0.0};
                break;
            case BellOutcome::PsiPlus:
                c = 0.5 * (a01 + a10);
                state.amps_[i | m2] = c;
                state.amps_[i | m1] = c;
                state.amps_[i] = state.amps_[i | m1 | m2] = Complex{0.0, 0.0};
                break;
            case BellOutcome::PsiMinus:
                c = 0.5 * (a01 - a10);
                state.amps_[i | m2] = c;
                state.amps_[i | m1] = -c;
                state.amps_[i] = state.amps_[i | m1 | m2] = Complex{0.0, 0.0};
                break;
        }
        prob += 2.0 * std::norm(c);
    }
    if (prob < kProbFloor)
        throw StateError("Bell outcome " + std::string(to_string(outcome)) +
                         " has vanishing probability");
    state.renormalize();
    return state;
}

std::pair<BellOutcome, StateVector> bell_measure(StateVector state, int q1, int q2, Rng& rng) {
    auto probs = bell_probabilities(state, q1, q2);
    double total = 0.0;
    for (auto& p : probs) {
        if (p < kProbFloor) p = 0.0;
        total += p;
    }
    const double u = uniform_double(rng) * total;
    double cum = 0.0;
    BellOutcome outcome = BellOutcome::PsiMinus;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cum += probs[k];
        if (probs[k] > 0.0 && u < cum) {
            outcome = kAllBellOutcomes[k];
            break;
        }
    }
    return {outcome, bell_collapse(std::move(state), q1, q2, outcome)};
}

std::vector<Pauli> teleport_correction(BellOutcome outcome) {
    switch (outcome) {
        case BellOutcome::PhiPlus: return {};
        case BellOutcome::PhiMinus: return {Pauli::Z};
        case BellOutcome::PsiPlus: return {Pauli::X};
        case BellOutcome::PsiMinus: return {Pauli::X, Pauli::Z};
    }
    throw StateError("invalid BellOutcome value");
}

namespace {

// Detached amplitude factors before they become StateVectors.
struct RawFactors {
    std::vector<Complex> left;
    std::vector<Complex> right;
};

void canonicalize(RawFactors& f) {
    auto normalize = [](std::vector<Complex>& v) {
        double n2 = 0.0;
        for (const auto& c : v) n2 += std::norm(c);
        const double norm = std::sqrt(n2);
        for (auto& c : v) c /= norm;
    };
    normalize(f.left);
    normalize(f.right);
    std::size_t pivot = 0;
    for (std::size_t k = 1; k < f.left.size(); ++k)
        if (std::norm(f.left[k]) > std::norm(f.left[pivot])) pivot = k;
    const double mag = std::abs(f.left[pivot]);
    if (mag > 0.0) {
        const Complex phase = f.left[pivot] / mag;
        for (auto& c : f.left) c /= phase;
        for (auto& c : f.right) c *= phase;
    }
}

}  // namespace

std::optional<SchmidtFactors> schmidt_factor(const StateVector& state, int cut) {
    const int n = state.num_qubits();
    if (cut < 1 || cut >= n)
        throw IndexError("cut " + std::to_string(cut) + " outside 1.." + std::to_string(n - 1));
    const std::size_t rows = std::size_t{1} << cut;
    const std::size_t cols = std::size_t{1} << (n - cut);
    const auto& a = state.amplitudes();
    const auto at = [&](std::size_t i, std::size_t j) { return a[i * cols + j]; };

    // Fast path: factor through the largest pivot and accept if the residual
    // is already far below the separability threshold. This keeps honest
    // protocol runs away from the SVD entirely.
    std::size_t p = 0;
    for (std::size_t k = 1; k < a.size(); ++k)
        if (std::norm(a[k]) > std::norm(a[p])) p = k;
    const std::size_t pi = p / cols;
    const std::size_t pj = p % cols;
    RawFactors f;
    f.left.resize(rows);
    f.right.resize(cols);
    for (std::size_t i = 0; i < rows; ++i) f.left[i] = at(i, pj);
    for (std::size_t j = 0; j < cols; ++j) f.right[j] = at(pi, j) / a[p];
    double residual2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            residual2 += std::norm(at(i, j) - f.left[i] * f.right[j]);

    if (residual2 >= 1e-18) {
        // Ambiguous: decide via the actual singular spectrum.
        using RowMajorC =
            Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<const RowMajorC> m(a.data(), static_cast<Eigen::Index>(rows),
                                      static_cast<Eigen::Index>(cols));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv.size() > 1 && sv(1) >= 1e-8) return std::nullopt;
        const double sigma = sv(0);
        for (std::size_t i = 0; i < rows; ++i) f.left[i] = svd.matrixU()(static_cast<Eigen::Index>(i), 0);
        for (std::size_t j = 0; j < cols; ++j)
            f.right[j] = sigma * std::conj(svd.matrixV()(static_cast<Eigen::Index>(j), 0));
    }

    canonicalize(f);
    SchmidtFactors out{StateVector(cut, std::move(f.left)),
                       StateVector(n - cut, std::move(f.right))};
    if (fidelity(tensor(out.left, out.right), state) < 1.0 - 1e-9) return std::nullopt;
    return out;
}

StateVector drop_qubit(StateVector state, int q, int bit) {
    state.check_qubit(q);
    if (state.num_qubits() < 2) throw SizeError("cannot drop the only qubit");
    if (bit != 0 && bit != 1) throw StateError("bit must be 0 or 1");
    const double p1 = state.probability_of_one(q);
    const double off = bit == 1 ? 1.0 - p1 : p1;
    if (off > 1e-9)
        throw StateError("qubit " + std::to_string(q) + " is not in basis state |" +
                         std::to_string(bit) + "> (stray weight " + std::to_string(off) + ")");
    const int n = state.num_qubits();
    const int shift = n - q;  // bit position of q from the least significant end
    const std::size_t low_mask = (std::size_t{1} << shift) - 1;
    std::vector<Complex> amps(state.dim() / 2);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (static_cast<int>((i >> shift) & 1) != bit) continue;
        const std::size_t k = ((i >> (shift + 1)) << shift) | (i & low_mask);
        amps[k] = state.amps_[i];
    }
    StateVector out(n - 1, std::move(amps));
    return out;
}

CompareResult swap_test_compare(const StateVector& a, const StateVector& b, int reps, Rng& rng) {
    if (a.num_qubits() != b.num_qubits())
        throw SizeError("SWAP test of " + std::to_string(a.num_qubits()) + "-qubit and " +
                        std::to_string(b.num_qubits()) + "-qubit states");
    if (reps < 1) throw SizeError("SWAP test needs reps >= 1");
    const int n = a.num_qubits();
    const int ancilla = 2 * n + 1;
    for (int rep = 0; rep < reps; ++rep) {
        StateVector joint = tensor(tensor(a, b), StateVector(1));
        joint.h(ancilla);
        for (int i = 1; i <= n; ++i) joint.cswap(ancilla, i, n + i);
        joint.h(ancilla);
        if (joint.measure(ancilla, rng) == 1) return CompareResult::Unequal;
    }
    return CompareResult::Equal;
}

}  // namespace aqs
