#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aqs/chained_cipher.hpp"
#include "aqs/protocol.hpp"
#include "aqs/random.hpp"
#include "aqs/state_vector.hpp"

namespace aqs {

/// Eve's fake signature pair plus the message she claims it signs. In the
/// canonical attack both states are |0...0⟩, which every chained-CNOT key
/// maps to itself.
struct ForgedClaim {
    StateVector s_e;
    PermutationKey k_r;
    StateVector p_e;
};

/// Builds the all-zeros claim with a uniformly random session key.
ForgedClaim eve_forge(int n, Rng& rng);

struct KeyCensusEntry {
    PermutationKey key;
    std::size_t fixed_count = 0;
    bool contains_all_zeros = false;
};

/// Fixed-point survey over permutation keys: how many basis states each
/// sampled key leaves untouched, i.e. how large the forgeable message family
/// is per key. The all-zeros state shows up for every key.
struct FixedPointCensus {
    int n = 0;
    bool exhaustive = false;
    std::vector<KeyCensusEntry> entries;
    std::map<std::size_t, int> size_histogram;
    bool all_zeros_universal = false;
};

/// Census over `key_samples` random keys. Requires 1 <= n <= 10 so the fixed
/// sets stay enumerable.
FixedPointCensus explain_fixed_points(int n, int key_samples, Rng& rng);

/// Census over all n! keys. Requires 1 <= n <= 6.
FixedPointCensus census_all_keys(int n);

struct ForgeryTrial {
    std::size_t trial = 0;  // 1-based
    PermutationKey k_a;
    PermutationKey k_r;
    bool accepted = false;
    double fidelity_st_se = -1.0;
};

struct AttackReport {
    int n = 0;
    std::uint64_t seed = 0;
    Comparator comparator;
    bool exhaustive = false;
    std::size_t trials = 0;
    std::size_t accepted = 0;
    std::vector<ForgeryTrial> trial_records;
    FixedPointCensus census;
    std::string remark;

    double acceptance_rate() const noexcept {
        return trials == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(trials);
    }
    bool attack_demonstrated() const noexcept { return trials > 0 && accepted == trials; }
};

/// Runs `trials` independent arbitration attempts. Each trial draws fresh
/// PartyKeys and a fresh claim from a stream seeded with seed ^ trial index,
/// then calls trent_arbitrate directly; the honest signing path is never
/// invoked. Requires n >= 1, trials >= 1.
AttackReport run_forgery(int n, std::size_t trials, const Comparator& cmp, std::uint64_t seed);

/// One arbitration per (K_A, K_R) permutation pair, all n!^2 of them.
/// Requires 1 <= n <= 6. The seed only feeds the swap-test comparator.
AttackReport run_forgery_exhaustive(int n, const Comparator& cmp, std::uint64_t seed);

}  // namespace aqs
