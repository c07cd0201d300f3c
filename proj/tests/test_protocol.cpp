#include <doctest.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "aqs/chained_cipher.hpp"
#include "aqs/protocol.hpp"
#include "aqs/serialize.hpp"
#include "aqs/state_vector.hpp"

using namespace aqs;

namespace {

const Comparator kExact{ComparatorMode::Exact, 20};

struct Session {
    PartyKeys keys;
    SignResult sign;
    MessageSpec message;
};

Session honest_session(int n, std::uint64_t seed) {
    Rng rng(seed);
    MessageSpec message = MessageSpec::random(n, rng);
    auto [keys, reg] = setup(n, rng);
    SignResult sign = alice_sign(message, keys, std::move(reg), rng);
    return Session{std::move(keys), std::move(sign), std::move(message)};
}

}  // namespace

TEST_CASE("PartyKeys validates the per-party sizes") {
    Rng rng(1);
    CHECK_NOTHROW(PartyKeys::random(3, rng));
    CHECK_THROWS_AS(PartyKeys(PermutationKey::identity(3), PermutationKey::identity(6),
                              Bits(6, 0)),
                    SizeError);
    CHECK_THROWS_AS(PartyKeys(PermutationKey::identity(3), PermutationKey::identity(7),
                              Bits(5, 0)),
                    SizeError);
    CHECK_THROWS_AS(PartyKeys(PermutationKey::identity(3), PermutationKey::identity(7),
                              Bits(6, 2)),
                    KeyError);
    const PartyKeys keys(PermutationKey::identity(3), PermutationKey::identity(7), Bits(6, 1));
    CHECK(keys.message_size() == 3);
}

TEST_CASE("MessageSpec parses, prints and validates") {
    const MessageSpec m = MessageSpec::parse("1,0,0,0;0,0,0,1");
    CHECK(m.size() == 2);
    CHECK(fidelity(m.to_state(), basis_state(2, {0, 1})) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(MessageSpec::parse("1,0,0"), Error);
    CHECK_THROWS_AS(MessageSpec::parse("1,0,0,zebra"), Error);
    CHECK_THROWS_AS(MessageSpec::parse("0.5,0,0,0"), NormalizationError);

    Rng rng(9);
    const MessageSpec r = MessageSpec::random(3, rng);
    const MessageSpec back = MessageSpec::parse(r.to_string());
    CHECK(fidelity(back.to_state(), r.to_state()) == doctest::Approx(1.0).epsilon(1e-12));

    Rng a(4);
    Rng b(4);
    CHECK(MessageSpec::random(2, a).to_string() == MessageSpec::random(2, b).to_string());
}

TEST_CASE("comparator modes") {
    CHECK(comparator_mode_from_string("exact") == ComparatorMode::Exact);
    CHECK(comparator_mode_from_string("swap") == ComparatorMode::SwapTest);
    CHECK_THROWS_AS(comparator_mode_from_string("fingerprint"), Error);
    CHECK(to_string(ComparatorMode::Exact) == "exact");
    CHECK(to_string(ComparatorMode::SwapTest) == "swap");

    Rng rng(2);
    const StateVector zero(2);
    const StateVector ones = basis_state(2, {1, 1});
    CHECK(kExact.equal(zero, zero, rng));
    CHECK(!kExact.equal(zero, ones, rng));
    const Comparator swap{ComparatorMode::SwapTest, 20};
    CHECK(swap.equal(zero, zero, rng));
    CHECK(!swap.equal(zero, ones, rng));
}

TEST_CASE("setup prepares Phi+ pairs with a free message slot") {
    Rng rng(21);
    auto [keys, reg] = setup(3, rng);
    CHECK(keys.k_a.size() == 3);
    CHECK(keys.k_b.size() == 7);
    CHECK(keys.r_b.size() == 6);
    CHECK(reg.message_size == 3);
    CHECK(reg.joint.num_qubits() == 9);
    for (int i = 1; i <= 3; ++i) {
        const auto probs = bell_probabilities(reg.joint, 3 + i, 6 + i);
        CHECK(probs[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    auto slot = schmidt_factor(reg.joint, 3);
    REQUIRE(slot.has_value());
    CHECK(fidelity(slot->left, StateVector(3)) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(setup(0, rng), SizeError);
    CHECK_THROWS_AS(setup(9, rng), SizeError);
}

TEST_CASE("alice_sign produces the expected package pieces") {
    Rng rng(33);
    const MessageSpec message = MessageSpec::random(2, rng);
    auto [keys, reg] = setup(2, rng);
    const SignResult sign = alice_sign(message, keys, std::move(reg), rng);

    CHECK(sign.package.m_a.size() == 2);
    // p_enc_3 and s_a are recomputable from the published keys
    const StateVector p_enc = encrypt(message.to_state(), sign.k_r);
    CHECK(fidelity(sign.package.p_enc_3, p_enc) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(sign.package.s_a, encrypt(p_enc, keys.k_a)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sign.reg.joint.num_qubits() == 6);

    // after the Bell measurements Bob's halves hold p_enc up to local Paulis
    StateVector corrected = sign.reg.joint;
    for (int i = 1; i <= 2; ++i) {
        for (Pauli p : teleport_correction(sign.package.m_a[static_cast<std::size_t>(i - 1)])) {
            if (p == Pauli::X) {
                corrected.x(4 + i);
            } else {
                corrected.z(4 + i);
            }
        }
    }
    auto blocks = schmidt_factor(corrected, 4);
    REQUIRE(blocks.has_value());
    CHECK(fidelity(blocks->right, p_enc) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("alice_sign rejects mismatched inputs") {
    Rng rng(5);
    const MessageSpec message = MessageSpec::random(3, rng);
    auto [keys, reg] = setup(2, rng);
    CHECK_THROWS_AS(alice_sign(message, keys, std::move(reg), rng), SizeError);
}

TEST_CASE("blind then unblind recovers the exact signature product") {
    Session s = honest_session(3, 101);
    const StateVector y_b = bob_blind(s.sign.package, s.keys);
    CHECK(y_b.num_qubits() == 7);

    // undo K_B, drop the ancilla, undo r_B: the payload must reappear exactly
    StateVector z = decrypt(y_b, s.keys.k_b);
    CHECK(z.probability_of_one(7) == doctest::Approx(0.0).epsilon(1e-12));
    Rng rng(1);
    const int anc = z.measure(7, rng);
    CHECK(anc == 0);
    z = drop_qubit(std::move(z), 7, 0);
    for (int i = 1; i <= 6; ++i) {
        if (s.keys.r_b[static_cast<std::size_t>(i - 1)] == 1) {
            z.x(i);
        }
    }
    CHECK(fidelity(z, tensor(s.sign.package.p_enc_3, s.sign.package.s_a)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trent_verify accepts an honest package") {
    Session s = honest_session(3, 202);
    Rng rng(7);
    const StateVector y_b = bob_blind(s.sign.package, s.keys);
    const TrentResult trent = trent_verify(y_b, s.keys, kExact, rng);
    CHECK(trent.report.v_bit == 1);
    CHECK(trent.report.reason == RejectReason::Ok);
    CHECK(trent.report.fidelity_sa_st >= 1.0 - 1e-9);
    CHECK(!trent.report.ancilla_dirty);
    CHECK(!trent.report.non_separable);
    CHECK(trent.y_t.num_qubits() == 7);
}

TEST_CASE("trent_verify rejects a tampered signature") {
    Session s = honest_session(3, 303);
    SignaturePackage tampered = s.sign.package;
    tampered.s_a.x(2);  // one Pauli flip in transit
    Rng rng(7);
    const TrentResult trent = trent_verify(bob_blind(tampered, s.keys), s.keys, kExact, rng);
    CHECK(trent.report.v_bit == 0);
    CHECK(trent.report.reason == RejectReason::VZero);
    CHECK(trent.report.fidelity_sa_st < 1.0 - 1e-9);
}

TEST_CASE("trent_verify flags a dirty ancilla") {
    Session s = honest_session(2, 404);
    // reach under K_B, flip the ancilla, re-encrypt: Trent must notice
    StateVector z = decrypt(bob_blind(s.sign.package, s.keys), s.keys.k_b);
    z.x(5);
    const StateVector y_b = encrypt(z, s.keys.k_b);

    Rng rng(7);
    const TrentResult trent = trent_verify(y_b, s.keys, kExact, rng);
    CHECK(trent.report.v_bit == 0);
    CHECK(trent.report.ancilla_dirty);
    CHECK(trent.report.reason == RejectReason::AncillaDirty);
}

TEST_CASE("bob_verify accepts the honest chain end to end") {
    Session s = honest_session(3, 505);
    Rng rng(11);
    const StateVector y_b = bob_blind(s.sign.package, s.keys);
    const TrentResult trent = trent_verify(y_b, s.keys, kExact, rng);
    const BobVerifyResult bob =
        bob_verify(trent.y_t, s.sign.package, s.keys, std::move(s.sign.reg), kExact, rng);
    CHECK(bob.verdict.v_bit == 1);
    CHECK(bob.verdict.accepted);
    CHECK(bob.verdict.reason == RejectReason::Ok);
    CHECK(bob.fidelity_b_vs_3 >= 1.0 - 1e-9);
    REQUIRE(bob.p_enc_3.has_value());

    const StateVector recovered = bob_finalize(*bob.p_enc_3, s.sign.k_r);
    CHECK(fidelity(recovered, s.message.to_state()) >= 1.0 - 1e-9);
}

TEST_CASE("bob_verify stops without teleport recovery when V is 0") {
    Session s = honest_session(2, 606);
    SignaturePackage tampered = s.sign.package;
    tampered.s_a.z(1);
    tampered.s_a.x(1);
    Rng rng(13);
    const TrentResult trent = trent_verify(bob_blind(tampered, s.keys), s.keys, kExact, rng);
    REQUIRE(trent.report.v_bit == 0);
    const BobVerifyResult bob =
        bob_verify(trent.y_t, tampered, s.keys, std::move(s.sign.reg), kExact, rng);
    CHECK(bob.verdict.v_bit == 0);
    CHECK(!bob.verdict.accepted);
    CHECK(bob.verdict.reason == RejectReason::VZero);
    CHECK(!bob.p_enc_3.has_value());
    CHECK(!bob.p_enc_b.has_value());
}

TEST_CASE("bob_verify catches corrupted Bell outcomes as teleport mismatch") {
    Session s = honest_session(3, 707);
    Rng rng(17);
    const StateVector y_b = bob_blind(s.sign.package, s.keys);
    const TrentResult trent = trent_verify(y_b, s.keys, kExact, rng);
    REQUIRE(trent.report.v_bit == 1);

    SignaturePackage lied = s.sign.package;
    // report a different outcome for qubit 2: corrections now add a stray Pauli
    lied.m_a[1] = lied.m_a[1] == BellOutcome::PhiPlus ? BellOutcome::PsiMinus
                                                      : BellOutcome::PhiPlus;
    const BobVerifyResult bob =
        bob_verify(trent.y_t, lied, s.keys, std::move(s.sign.reg), kExact, rng);
    CHECK(bob.verdict.v_bit == 1);
    CHECK(!bob.verdict.accepted);
    CHECK(bob.verdict.reason == RejectReason::TeleportMismatch);
    CHECK(bob.fidelity_b_vs_3 < 1.0 - 1e-9);
}

TEST_CASE("trent_arbitrate accepts an honest claim and rejects a bogus one") {
    Session s = honest_session(3, 808);
    Rng rng(19);
    const ArbitrationRecord good = trent_arbitrate(s.sign.package.s_a, s.sign.k_r,
                                                   s.message.to_state(), s.keys, kExact, rng);
    CHECK(good.result == ArbitrationResult::Valid);
    CHECK(good.fidelity_st_sclaim >= 1.0 - 1e-9);

    Rng other(20);
    const MessageSpec wrong = MessageSpec::random(3, other);
    const ArbitrationRecord bad = trent_arbitrate(s.sign.package.s_a, s.sign.k_r,
                                                  wrong.to_state(), s.keys, kExact, rng);
    CHECK(bad.result == ArbitrationResult::ForgedRejected);

    CHECK_THROWS_AS(trent_arbitrate(StateVector(2), s.sign.k_r, s.message.to_state(), s.keys,
                                    kExact, rng),
                    SizeError);
}

TEST_CASE("run_honest accepts random messages across sizes") {
    for (int n = 1; n <= 4; ++n) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const ProtocolTranscript t = run_honest(n, std::nullopt, kExact, seed);
            CHECK(t.verdict.accepted);
            CHECK(t.verdict.v_bit == 1);
            CHECK(t.verdict.reason == RejectReason::Ok);
            CHECK(t.final_fidelity >= 1.0 - 1e-9);
            CHECK(t.message_source == "random");
            CHECK(!t.error.has_value());
            CHECK(!t.events.empty());
        }
    }
}

TEST_CASE("run_honest under the swap-test comparator") {
    const ProtocolTranscript t = run_honest(2, std::nullopt, {ComparatorMode::SwapTest, 20}, 5);
    CHECK(t.verdict.accepted);
    CHECK(t.final_fidelity >= 1.0 - 1e-9);
}

TEST_CASE("run_honest with an explicit message records it verbatim") {
    const MessageSpec message = MessageSpec::parse("0,0,1,0;1,0,0,0");
    const ProtocolTranscript t = run_honest(2, message, kExact, 40);
    CHECK(t.message_source == "explicit");
    CHECK(t.message->to_string() == message.to_string());
    CHECK(t.verdict.accepted);
    CHECK_THROWS_AS(run_honest(3, message, kExact, 40), SizeError);
}

TEST_CASE("run_honest transcripts replay byte for byte") {
    const ProtocolTranscript a = run_honest(3, std::nullopt, kExact, 123);
    const ProtocolTranscript b = run_honest(3, std::nullopt, kExact, 123);
    CHECK(canonical_dump(json_of(a)) == canonical_dump(json_of(b)));

    const ProtocolTranscript c = run_honest(3, std::nullopt, kExact, 124);
    CHECK(canonical_dump(json_of(a)) != canonical_dump(json_of(c)));
}

TEST_CASE("transcript events follow the protocol order") {
    const ProtocolTranscript t = run_honest(2, std::nullopt, kExact, 77);
    REQUIRE(t.events.size() >= 10);
    CHECK(t.events.front().phase == "initializing");
    CHECK(t.events.front().action == "share-keys");
    CHECK(t.events.back().action == "decrypt-message");
    bool saw_unblind_check = false;
    for (const TranscriptEvent& e : t.events) {
        if (e.action == "check-unblind") {
            saw_unblind_check = true;
            CHECK(e.detail.at("fidelity_unblinded_vs_package").get<double>() >= 1.0 - 1e-9);
        }
    }
    CHECK(saw_unblind_check);
}
