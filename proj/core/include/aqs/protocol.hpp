#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqs/chained_cipher.hpp"
#include "aqs/errors.hpp"
#include "aqs/random.hpp"
#include "aqs/state_vector.hpp"

namespace aqs {

/// Pre-shared secret material for one session of message size n:
/// K_A (length n) between Alice and Trent, K_B (length 2n+1) and the blinding
/// bits r_B (length 2n) between Bob and Trent.
struct PartyKeys {
    PermutationKey k_a;
    PermutationKey k_b;
    Bits r_b;

    PartyKeys(PermutationKey k_a, PermutationKey k_b, Bits r_b);
    int message_size() const noexcept { return k_a.size(); }

    static PartyKeys random(int n, Rng& rng);
};

/// Classical description of the product message |P⟩ = ⊗ (α_i|0⟩ + β_i|1⟩),
/// from which Alice manufactures her working copies.
class MessageSpec {
public:
    explicit MessageSpec(std::vector<QubitState> qubit_params);

    int size() const noexcept { return static_cast<int>(qubit_params_.size()); }
    const std::vector<QubitState>& qubit_params() const noexcept { return qubit_params_; }
    StateVector to_state() const;

    static MessageSpec random(int n, Rng& rng);

    /// Text form: per qubit "alpha_re,alpha_im,beta_re,beta_im", qubits
    /// joined with ';'.
    static MessageSpec parse(std::string_view text);
    std::string to_string() const;

private:
    std::vector<QubitState> qubit_params_;
};

/// What Alice transmits in the signing phase: |P_enc⟩_3, |S_A⟩ and the Bell
/// outcomes |M_A⟩.
struct SignaturePackage {
    StateVector p_enc_3;
    StateVector s_a;
    std::vector<BellOutcome> m_a;
};

/// Joint 3n-qubit state holding the teleportation resources. Layout: message
/// slot on qubits 1..n, Alice's Bell halves on n+1..2n, Bob's on 2n+1..3n.
struct TeleportRegister {
    int message_size;
    StateVector joint;
};

enum class RejectReason { Ok, VZero, TeleportMismatch, AncillaDirty, NonSeparable };
std::string_view to_string(RejectReason reason);

struct Verdict {
    int v_bit = 0;
    bool accepted = false;
    RejectReason reason = RejectReason::VZero;
};

enum class ComparatorMode { Exact, SwapTest };
std::string_view to_string(ComparatorMode mode);
ComparatorMode comparator_mode_from_string(std::string_view text);  // throws Error

/// Fidelity at or above this counts as equality in exact mode.
inline constexpr double kExactEqualityThreshold = 1.0 - 1e-9;

/// State-equality policy standing in for quantum fingerprinting; shared by
/// Trent's check and Bob's teleport comparison.
struct Comparator {
    ComparatorMode mode = ComparatorMode::Exact;
    int swap_reps = 20;

    bool equal(const StateVector& a, const StateVector& b, Rng& rng) const;
};

/// Step I1 + I2: draws the session keys and prepares the teleport register
/// with |0^n⟩ in the message slot and n Phi+ pairs on (n+i, 2n+i).
/// Requires 1 <= n <= 8 so the register fits in 24 qubits.
std::pair<PartyKeys, TeleportRegister> setup(int n, Rng& rng);

struct SignResult {
    SignaturePackage package;
    PermutationKey k_r;
    TeleportRegister reg;  // post-measurement register
};

/// Steps S1-S4: chooses K_R, encrypts the message copies, forms
/// |S_A⟩ = E_{K_A}(|P_enc⟩_1), Bell-measures |P_enc⟩_2 against the Alice
/// halves and assembles the signature package.
SignResult alice_sign(const MessageSpec& message, const PartyKeys& keys, TeleportRegister reg,
                      Rng& rng);

/// Step V1: blinds |P_enc⟩_3 ⊗ |S_A⟩ with σ_x per r_B, appends a |0⟩ ancilla
/// as qubit 2n+1 and encrypts all 2n+1 qubits with K_B.
StateVector bob_blind(const SignaturePackage& package, const PartyKeys& keys);

/// Trent's verdict precursor from Steps V2-V3.
struct TrentReport {
    int v_bit = 0;
    RejectReason reason = RejectReason::VZero;
    double fidelity_sa_st = -1.0;  // -1 when the comparison never ran
    bool ancilla_dirty = false;
    bool non_separable = false;
    /// The unblinded 2n-qubit payload, kept for harness-side diagnostics.
    std::optional<StateVector> recovered_product;
};

struct TrentResult {
    StateVector y_t;
    TrentReport report;
};

/// Steps V2-V3: decrypts |Y_B⟩, checks the ancilla, unblinds, splits the
/// payload, compares |S_A⟩ against |S_T⟩ = E_{K_A}(|P_enc⟩_3) and returns
/// |Y_T⟩ = E_{K_B}(|P_enc⟩_3 ⊗ |S_A⟩ ⊗ |V⟩). A dirty ancilla or an entangled
/// cut yields |V⟩ = |0⟩ rather than an abort.
TrentResult trent_verify(const StateVector& y_b, const PartyKeys& keys, const Comparator& cmp,
                         Rng& rng);

struct BobVerifyResult {
    Verdict verdict;
    std::optional<StateVector> p_enc_3;  // factors recovered from |Y_T⟩ when V = 1
    std::optional<StateVector> s_a;
    std::optional<StateVector> p_enc_b;  // teleport-recovered state
    double fidelity_b_vs_3 = -1.0;
};

/// Steps V4-V5: decrypts |Y_T⟩, measures |V⟩ (rejecting on 0 without any
/// teleport recovery), applies the Pauli corrections indicated by |M_A⟩ to
/// the Bob halves and compares |P_enc⟩_B with |P_enc⟩_3.
BobVerifyResult bob_verify(const StateVector& y_t, const SignaturePackage& package,
                           const PartyKeys& keys, TeleportRegister reg, const Comparator& cmp,
                           Rng& rng);

/// Step V7: |P⟩_3 = D_{K_R}(|P_enc⟩_3).
StateVector bob_finalize(const StateVector& p_enc_3, const PermutationKey& k_r);

enum class ArbitrationResult { Valid, ForgedRejected };
std::string_view to_string(ArbitrationResult result);

struct ArbitrationRecord {
    ArbitrationResult result;
    double fidelity_st_sclaim;
};

/// Dispute resolution: recomputes E_{K_A}(E_{K_R}(p_claim)) and accepts the
/// claim iff the comparator deems it equal to s_claim.
ArbitrationRecord trent_arbitrate(const StateVector& s_claim, const PermutationKey& k_r,
                                  const StateVector& p_claim, const PartyKeys& keys,
                                  const Comparator& cmp, Rng& rng);

struct TranscriptEvent {
    std::string phase;  // "initializing" | "signing" | "verifying"
    std::string actor;  // "trent" | "alice" | "bob" | "harness"
    std::string action;
    nlohmann::ordered_json detail = nlohmann::ordered_json::object();
};

/// Ordered record of one protocol run; replaying the same (n, seed, mode,
/// message) reproduces it byte for byte.
struct ProtocolTranscript {
    int n = 0;
    std::uint64_t seed = 0;
    Comparator comparator;
    std::string message_source;  // "random" | "explicit"
    std::optional<MessageSpec> message;
    std::vector<TranscriptEvent> events;
    Verdict verdict;
    double final_fidelity = -1.0;
    std::optional<std::string> error;  // set when a step threw; verdict is then a rejection
};

/// The honest end-to-end run: setup, alice_sign, bob_blind, trent_verify,
/// bob_verify, bob_finalize. When `message` is empty, a random product
/// message is drawn from the run's stream before the keys.
ProtocolTranscript run_honest(int n, const std::optional<MessageSpec>& message,
                              const Comparator& cmp, std::uint64_t seed);

}  // namespace aqs
