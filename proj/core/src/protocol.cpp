#include "aqs/protocol.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "aqs/serialize.hpp"

namespace aqs {

namespace {

double parse_field(std::string_view field, std::string_view what) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw Error("malformed " + std::string(what) + ": '" + std::string(field) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(sep, pos);
        if (next == std::string_view::npos) {
            parts.push_back(text.substr(pos));
            return parts;
        }
        parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
}

/// Correction label for transcript details: outcome -> "i", "z", "x" or "xz".
std::string correction_label(BellOutcome outcome) {
    std::string label;
    for (Pauli p : teleport_correction(outcome)) {
        label += (p == Pauli::X) ? 'x' : 'z';
    }
    return label.empty() ? std::string("i") : label;
}

}  // namespace

PartyKeys::PartyKeys(PermutationKey k_a_in, PermutationKey k_b_in, Bits r_b_in)
    : k_a(std::move(k_a_in)), k_b(std::move(k_b_in)), r_b(std::move(r_b_in)) {
    const int n = k_a.size();
    if (k_b.size() != 2 * n + 1) {
        throw SizeError("K_B must act on 2n+1 = " + std::to_string(2 * n + 1) +
                        " qubits, got " + std::to_string(k_b.size()));
    }
    if (static_cast<int>(r_b.size()) != 2 * n) {
        throw SizeError("r_B must hold 2n = " + std::to_string(2 * n) + " bits, got " +
                        std::to_string(r_b.size()));
    }
    for (int bit : r_b) {
        if (bit != 0 && bit != 1) {
            throw KeyError("r_B entries must be 0 or 1");
        }
    }
}

PartyKeys PartyKeys::random(int n, Rng& rng) {
    PermutationKey k_a = PermutationKey::random(n, rng);
    PermutationKey k_b = PermutationKey::random(2 * n + 1, rng);
    Bits r_b = random_bits(2 * n, rng);
    return PartyKeys(std::move(k_a), std::move(k_b), std::move(r_b));
}

MessageSpec::MessageSpec(std::vector<QubitState> qubit_params)
    : qubit_params_(std::move(qubit_params)) {
    if (qubit_params_.empty()) {
        throw SizeError("message needs at least one qubit");
    }
    for (QubitState& q : qubit_params_) {
        const double norm2 = std::norm(q.alpha) + std::norm(q.beta);
        if (std::abs(norm2 - 1.0) > 1e-8) {
            throw NormalizationError("message qubit is not normalized: |alpha|^2+|beta|^2 = " +
                                     std::to_string(norm2));
        }
        const double scale = 1.0 / std::sqrt(norm2);
        q.alpha *= scale;
        q.beta *= scale;
    }
}

StateVector MessageSpec::to_state() const { return from_product(qubit_params_); }

MessageSpec MessageSpec::random(int n, Rng& rng) {
    if (n < 1) {
        throw SizeError("message needs at least one qubit");
    }
    std::vector<QubitState> qs;
    qs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        qs.push_back(haar_qubit(rng));
    }
    return MessageSpec(std::move(qs));
}

MessageSpec MessageSpec::parse(std::string_view text) {
    std::vector<QubitState> qs;
    for (std::string_view qubit_part : split(text, ';')) {
        std::vector<std::string_view> fields = split(qubit_part, ',');
        if (fields.size() != 4) {
            throw Error("message qubit needs 4 comma-separated numbers "
                        "(alpha_re,alpha_im,beta_re,beta_im), got '" +
                        std::string(qubit_part) + "'");
        }
        qs.push_back(QubitState{
            Complex(parse_field(fields[0], "amplitude"), parse_field(fields[1], "amplitude")),
            Complex(parse_field(fields[2], "amplitude"), parse_field(fields[3], "amplitude"))});
    }
    return MessageSpec(std::move(qs));
}

std::string MessageSpec::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < qubit_params_.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        const QubitState& q = qubit_params_[i];
        out += format_g17(q.alpha.real()) + ',' + format_g17(q.alpha.imag()) + ',' +
               format_g17(q.beta.real()) + ',' + format_g17(q.beta.imag());
    }
    return out;
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::Ok: return "ok";
        case RejectReason::VZero: return "v-zero";
        case RejectReason::TeleportMismatch: return "teleport-mismatch";
        case RejectReason::AncillaDirty: return "ancilla-dirty";
        case RejectReason::NonSeparable: return "non-separable";
    }
    return "unknown";
}

std::string_view to_string(ComparatorMode mode) {
    return mode == ComparatorMode::Exact ? "exact" : "swap";
}

ComparatorMode comparator_mode_from_string(std::string_view text) {
    if (text == "exact") {
        return ComparatorMode::Exact;
    }
    if (text == "swap") {
        return ComparatorMode::SwapTest;
    }
    throw Error("unknown comparator mode '" + std::string(text) + "' (expected exact|swap)");
}

std::string_view to_string(ArbitrationResult result) {
    return result == ArbitrationResult::Valid ? "valid" : "forged-rejected";
}

bool Comparator::equal(const StateVector& a, const StateVector& b, Rng& rng) const {
    if (mode == ComparatorMode::Exact) {
        return fidelity(a, b) >= kExactEqualityThreshold;
    }
    return swap_test_compare(a, b, swap_reps, rng) == CompareResult::Equal;
}

std::pair<PartyKeys, TeleportRegister> setup(int n, Rng& rng) {
    if (n < 1 || n > 8) {
        throw SizeError("message size must lie in 1..8 so the 3n-qubit register fits, got " +
                        std::to_string(n));
    }
    PartyKeys keys = PartyKeys::random(n, rng);
    StateVector joint(3 * n);
    for (int i = 1; i <= n; ++i) {
        joint.h(n + i);
        joint.cnot(n + i, 2 * n + i);
    }
    return {std::move(keys), TeleportRegister{n, std::move(joint)}};
}

SignResult alice_sign(const MessageSpec& message, const PartyKeys& keys, TeleportRegister reg,
                      Rng& rng) {
    const int n = keys.message_size();
    if (message.size() != n) {
        throw SizeError("message size " + std::to_string(message.size()) +
                        " does not match key size " + std::to_string(n));
    }
    if (reg.message_size != n || reg.joint.num_qubits() != 3 * n) {
        throw SizeError("teleport register does not match message size " + std::to_string(n));
    }

    PermutationKey k_r = PermutationKey::random(n, rng);
    StateVector p_enc = encrypt(message.to_state(), k_r);
    StateVector s_a = encrypt(p_enc, keys.k_a);

    auto slot = schmidt_factor(reg.joint, n);
    if (!slot) {
        throw StateError("teleport register message slot is entangled with the Bell pairs");
    }
    if (fidelity(slot->left, StateVector(n)) < kExactEqualityThreshold) {
        throw StateError("teleport register message slot is already occupied");
    }
    StateVector joint = tensor(p_enc, slot->right);

    std::vector<BellOutcome> m_a;
    m_a.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        auto [outcome, next] = bell_measure(std::move(joint), i, n + i, rng);
        joint = std::move(next);
        m_a.push_back(outcome);
    }

    SignaturePackage package{std::move(p_enc), std::move(s_a), std::move(m_a)};
    return SignResult{std::move(package), std::move(k_r), TeleportRegister{n, std::move(joint)}};
}

StateVector bob_blind(const SignaturePackage& package, const PartyKeys& keys) {
    const int n = keys.message_size();
    if (package.p_enc_3.num_qubits() != n || package.s_a.num_qubits() != n ||
        static_cast<int>(package.m_a.size()) != n) {
        throw SizeError("signature package does not match key size " + std::to_string(n));
    }
    StateVector y = tensor(package.p_enc_3, package.s_a);
    for (int i = 1; i <= 2 * n; ++i) {
        if (keys.r_b[static_cast<std::size_t>(i - 1)] == 1) {
            y.x(i);
        }
    }
    y = tensor(y, StateVector(1));  // fresh |0⟩ ancilla becomes qubit 2n+1
    return encrypt(y, keys.k_b);
}

TrentResult trent_verify(const StateVector& y_b, const PartyKeys& keys, const Comparator& cmp,
                         Rng& rng) {
    const int n = keys.message_size();
    if (y_b.num_qubits() != 2 * n + 1) {
        throw SizeError("Y_B must hold 2n+1 = " + std::to_string(2 * n + 1) + " qubits, got " +
                        std::to_string(y_b.num_qubits()));
    }

    StateVector z = decrypt(y_b, keys.k_b);
    const int ancilla_bit = z.measure(2 * n + 1, rng);
    const bool dirty = ancilla_bit == 1;
    z = drop_qubit(std::move(z), 2 * n + 1, ancilla_bit);
    for (int i = 1; i <= 2 * n; ++i) {
        if (keys.r_b[static_cast<std::size_t>(i - 1)] == 1) {
            z.x(i);
        }
    }

    TrentReport report;
    report.ancilla_dirty = dirty;
    report.recovered_product = z;

    auto parts = schmidt_factor(z, n);
    if (!parts) {
        report.non_separable = true;
        report.v_bit = 0;
        report.reason = dirty ? RejectReason::AncillaDirty : RejectReason::NonSeparable;
        StateVector y_t = encrypt(tensor(z, StateVector(1)), keys.k_b);
        return TrentResult{std::move(y_t), std::move(report)};
    }

    StateVector s_t = encrypt(parts->left, keys.k_a);
    report.fidelity_sa_st = fidelity(parts->right, s_t);
    const bool equal = cmp.equal(parts->right, s_t, rng);
    report.v_bit = (equal && !dirty) ? 1 : 0;
    report.reason = report.v_bit == 1 ? RejectReason::Ok
                    : dirty           ? RejectReason::AncillaDirty
                                      : RejectReason::VZero;

    StateVector p3 = decrypt(s_t, keys.k_a);  // recover |P_enc⟩_3 from |S_T⟩
    StateVector v_state = basis_state(1, Bits{report.v_bit});
    StateVector y_t = encrypt(tensor(tensor(p3, parts->right), v_state), keys.k_b);
    return TrentResult{std::move(y_t), std::move(report)};
}

BobVerifyResult bob_verify(const StateVector& y_t, const SignaturePackage& package,
                           const PartyKeys& keys, TeleportRegister reg, const Comparator& cmp,
                           Rng& rng) {
    const int n = keys.message_size();
    if (y_t.num_qubits() != 2 * n + 1) {
        throw SizeError("Y_T must hold 2n+1 = " + std::to_string(2 * n + 1) + " qubits, got " +
                        std::to_string(y_t.num_qubits()));
    }
    if (static_cast<int>(package.m_a.size()) != n) {
        throw SizeError("Bell outcome list must hold n = " + std::to_string(n) + " entries");
    }
    if (reg.message_size != n || reg.joint.num_qubits() != 3 * n) {
        throw SizeError("teleport register does not match message size " + std::to_string(n));
    }

    BobVerifyResult out;
    StateVector w = decrypt(y_t, keys.k_b);
    const int v_bit = w.measure(2 * n + 1, rng);
    out.verdict.v_bit = v_bit;
    if (v_bit == 0) {
        out.verdict.accepted = false;
        out.verdict.reason = RejectReason::VZero;
        return out;
    }

    w = drop_qubit(std::move(w), 2 * n + 1, 1);
    auto parts = schmidt_factor(w, n);
    if (!parts) {
        out.verdict.accepted = false;
        out.verdict.reason = RejectReason::NonSeparable;
        return out;
    }
    out.p_enc_3 = parts->left;
    out.s_a = parts->right;

    StateVector joint = std::move(reg.joint);
    for (int i = 1; i <= n; ++i) {
        for (Pauli p : teleport_correction(package.m_a[static_cast<std::size_t>(i - 1)])) {
            if (p == Pauli::X) {
                joint.x(2 * n + i);
            } else {
                joint.z(2 * n + i);
            }
        }
    }
    auto blocks = schmidt_factor(joint, 2 * n);
    if (!blocks) {
        out.verdict.accepted = false;
        out.verdict.reason = RejectReason::NonSeparable;
        return out;
    }
    out.p_enc_b = blocks->right;

    out.fidelity_b_vs_3 = fidelity(*out.p_enc_b, *out.p_enc_3);
    const bool equal = cmp.equal(*out.p_enc_b, *out.p_enc_3, rng);
    out.verdict.accepted = equal;
    out.verdict.reason = equal ? RejectReason::Ok : RejectReason::TeleportMismatch;
    return out;
}

StateVector bob_finalize(const StateVector& p_enc_3, const PermutationKey& k_r) {
    return decrypt(p_enc_3, k_r);
}

ArbitrationRecord trent_arbitrate(const StateVector& s_claim, const PermutationKey& k_r,
                                  const StateVector& p_claim, const PartyKeys& keys,
                                  const Comparator& cmp, Rng& rng) {
    const int n = keys.message_size();
    if (s_claim.num_qubits() != n || p_claim.num_qubits() != n || k_r.size() != n) {
        throw SizeError("arbitration inputs must all act on n = " + std::to_string(n) +
                        " qubits");
    }
    StateVector s_t = encrypt(encrypt(p_claim, k_r), keys.k_a);
    ArbitrationRecord record{ArbitrationResult::ForgedRejected, fidelity(s_t, s_claim)};
    if (cmp.equal(s_claim, s_t, rng)) {
        record.result = ArbitrationResult::Valid;
    }
    return record;
}

ProtocolTranscript run_honest(int n, const std::optional<MessageSpec>& message,
                              const Comparator& cmp, std::uint64_t seed) {
    if (n < 1 || n > 8) {
        throw SizeError("message size must lie in 1..8 so the 3n-qubit register fits, got " +
                        std::to_string(n));
    }
    if (message && message->size() != n) {
        throw SizeError("explicit message has " + std::to_string(message->size()) +
                        " qubits, expected " + std::to_string(n));
    }

    ProtocolTranscript t;
    t.n = n;
    t.seed = seed;
    t.comparator = cmp;

    Rng rng(seed);
    if (message) {
        t.message = *message;
        t.message_source = "explicit";
    } else {
        t.message = MessageSpec::random(n, rng);
        t.message_source = "random";
    }

    std::string phase = "initializing";
    auto event = [&t, &phase](std::string actor, std::string action,
                              OrderedJson detail = OrderedJson::object()) {
        t.events.push_back(TranscriptEvent{phase, std::move(actor), std::move(action),
                                           std::move(detail)});
    };

    try {
        auto [keys, reg] = setup(n, rng);
        event("trent", "share-keys",
              {{"k_a", json_of(keys.k_a)}, {"k_b", json_of(keys.k_b)}, {"r_b", json_of(keys.r_b)}});
        event("alice", "prepare-bell-pairs",
              {{"pairs", n}, {"register_qubits", 3 * n}});

        phase = "signing";
        SignResult sign = alice_sign(*t.message, keys, std::move(reg), rng);
        event("alice", "choose-session-key", {{"k_r", json_of(sign.k_r)}});
        event("alice", "encrypt-message", {{"copies", 3}});
        event("alice", "form-signature", {{"qubits", n}});
        {
            OrderedJson outcomes = OrderedJson::array();
            OrderedJson corrections = OrderedJson::array();
            for (BellOutcome o : sign.package.m_a) {
                outcomes.push_back(std::string(to_string(o)));
                corrections.push_back(correction_label(o));
            }
            event("alice", "bell-measure",
                  {{"outcomes", std::move(outcomes)}, {"corrections", std::move(corrections)}});
        }
        event("alice", "send-package", {{"components", {"p_enc_3", "s_a", "m_a"}}});

        phase = "verifying";
        StateVector y_b = bob_blind(sign.package, keys);
        event("bob", "blind-encrypt", {{"ancilla_qubit", 2 * n + 1}});

        TrentResult trent = trent_verify(y_b, keys, cmp, rng);
        event("trent", "inspect",
              {{"ancilla_dirty", trent.report.ancilla_dirty},
               {"separable", !trent.report.non_separable},
               {"fidelity_sa_st", trent.report.fidelity_sa_st},
               {"v_bit", trent.report.v_bit},
               {"reason", std::string(to_string(trent.report.reason))}});
        if (trent.report.recovered_product) {
            const double unblind_fidelity = fidelity(
                *trent.report.recovered_product, tensor(sign.package.p_enc_3, sign.package.s_a));
            event("harness", "check-unblind",
                  {{"fidelity_unblinded_vs_package", unblind_fidelity}});
        }
        event("trent", "return-yt", {{"qubits", 2 * n + 1}});

        BobVerifyResult bob = bob_verify(trent.y_t, sign.package, keys, std::move(sign.reg),
                                         cmp, rng);
        event("bob", "measure-v", {{"v_bit", bob.verdict.v_bit}});

        t.verdict.v_bit = bob.verdict.v_bit;
        t.verdict.accepted = bob.verdict.accepted;
        t.verdict.reason = bob.verdict.v_bit == 0 && trent.report.reason != RejectReason::Ok
                               ? trent.report.reason
                               : bob.verdict.reason;

        if (bob.verdict.v_bit == 1 && bob.p_enc_b) {
            event("bob", "teleport-recover",
                  {{"fidelity_penc_b_vs_penc_3", bob.fidelity_b_vs_3},
                   {"accepted", bob.verdict.accepted}});
        }
        if (t.verdict.accepted) {
            event("alice", "publish-session-key", {{"k_r", json_of(sign.k_r)}});
            StateVector recovered = bob_finalize(*bob.p_enc_3, sign.k_r);
            t.final_fidelity = fidelity(recovered, t.message->to_state());
            event("bob", "decrypt-message", {{"final_fidelity", t.final_fidelity}});
        }
    } catch (const Error& e) {
        t.error = e.what();
        t.verdict.accepted = false;
        event("harness", "error", {{"what", std::string(e.what())}});
    }
    return t;
}

}  // namespace aqs
