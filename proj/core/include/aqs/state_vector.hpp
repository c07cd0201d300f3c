#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "aqs/errors.hpp"
#include "aqs/random.hpp"

namespace aqs {

using Complex = std::complex<double>;

/// A classical bit sequence, one int (0/1) per bit.
using Bits = std::vector<int>;

/// Dense amplitude storage caps out here (16M amplitudes, the 3n-qubit
/// teleport register at n = 8).
inline constexpr int kMaxQubits = 24;

/// Norm drift allowed on a live state.
inline constexpr double kNormTolerance = 1e-10;

/// Branch probabilities below this are treated as impossible.
inline constexpr double kProbFloor = 1e-14;

enum class Pauli { X, Z };

/// The four Bell-basis results: Phi± = (|00⟩ ± |11⟩)/√2, Psi± = (|01⟩ ± |10⟩)/√2.
enum class BellOutcome { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellOutcome, 4> kAllBellOutcomes = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus, BellOutcome::PsiMinus};

std::string_view to_string(BellOutcome outcome);
BellOutcome bell_outcome_from_string(std::string_view text);  // throws StateError

/// One qubit as α|0⟩ + β|1⟩.
struct QubitState {
    Complex alpha;
    Complex beta;
};

/// Haar-random single-qubit state (four normal components, normalized).
QubitState haar_qubit(Rng& rng);

/// Pure state of `num_qubits` qubits as 2^n complex amplitudes.
///
/// Qubit indices are 1-based and big-endian: qubit 1 is the most significant
/// bit of the amplitude index, so |q1 q2 ... qn⟩ sits at index
/// q1·2^(n-1) + ... + qn.
class StateVector {
public:
    /// |0...0⟩ on n qubits.
    explicit StateVector(int num_qubits);

    /// Takes ownership of an amplitude vector; must have length 2^n and unit
    /// norm within 1e-8 (then renormalized exactly).
    StateVector(int num_qubits, std::vector<Complex> amplitudes);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
    Complex amplitude(std::size_t index) const { return amps_.at(index); }
    double norm_squared() const;

    /// Probability that qubit q reads 1.
    double probability_of_one(int q) const;

    // In-place gates.
    void x(int q);
    void z(int q);
    void h(int q);
    void cnot(int control, int target);  // control == target acts as identity
    void cswap(int control, int a, int b);

    /// Measures qubit q in the computational basis; collapses and
    /// renormalizes. Returns the observed bit.
    int measure(int q, Rng& rng);

private:
    friend std::array<double, 4> bell_probabilities(const StateVector&, int, int);
    friend StateVector bell_collapse(StateVector, int q1, int q2, BellOutcome);
    friend StateVector drop_qubit(StateVector, int q, int bit);

    std::size_t mask_of(int q) const { return std::size_t{1} << (num_qubits_ - q); }
    void check_qubit(int q) const;
    void renormalize();

    int num_qubits_;
    std::vector<Complex> amps_;
};

/// Basis state |bits⟩; bits[0] is qubit 1 (most significant).
StateVector basis_state(int num_qubits, const Bits& bits);

/// Tensor product of single-qubit states, in order.
StateVector from_product(std::span<const QubitState> qubits);

/// a ⊗ b, a's qubits first.
StateVector tensor(const StateVector& a, const StateVector& b);

StateVector apply_pauli(StateVector state, int q, Pauli which);
StateVector apply_cnot(StateVector state, int control, int target);
StateVector apply_hadamard(StateVector state, int q);

/// |⟨a|b⟩|².
double fidelity(const StateVector& a, const StateVector& b);

/// Samples qubit q with Born probabilities; returns (bit, collapsed state).
std::pair<int, StateVector> measure_qubit(StateVector state, int q, Rng& rng);

/// Probabilities of the four Bell outcomes on the ordered pair (q1, q2),
/// indexed as kAllBellOutcomes.
std::array<double, 4> bell_probabilities(const StateVector& state, int q1, int q2);

/// Projects (q1, q2) onto the given Bell state and renormalizes; throws
/// StateError when that outcome has probability below kProbFloor.
StateVector bell_collapse(StateVector state, int q1, int q2, BellOutcome outcome);

/// Samples a Bell measurement of (q1, q2); the measured pair is left in the
/// reported Bell state.
std::pair<BellOutcome, StateVector> bell_measure(StateVector state, int q1, int q2, Rng& rng);

/// Pauli corrections (applied left to right) that complete teleportation for
/// a given Bell outcome on (message, sender-half).
std::vector<Pauli> teleport_correction(BellOutcome outcome);

struct SchmidtFactors {
    StateVector left;
    StateVector right;
};

/// Splits `state` as left ⊗ right with `cut` qubits on the left, when the
/// Schmidt rank across the cut is 1 (all singular values after the first
/// below 1e-8). Returns nullopt for an entangled cut. Factor phases are
/// canonical: the left factor's largest amplitude is real nonnegative.
std::optional<SchmidtFactors> schmidt_factor(const StateVector& state, int cut);

/// Removes qubit q, which must already be in basis state |bit⟩ (e.g. after a
/// measurement collapse); throws StateError otherwise.
StateVector drop_qubit(StateVector state, int q, int bit);

enum class CompareResult { Equal, Unequal };

/// `reps` independent SWAP tests (ancilla, controlled-SWAP, Hadamards).
/// Unequal iff any ancilla reads 1; states of fidelity F pass all reps with
/// probability ((1+F)/2)^reps.
CompareResult swap_test_compare(const StateVector& a, const StateVector& b, int reps, Rng& rng);

}  // namespace aqs
