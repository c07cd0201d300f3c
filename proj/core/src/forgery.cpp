#include "aqs/forgery.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace aqs {

namespace {

const char* kRemark =
    "Chained-CNOT encryption leaves the all-zeros basis state untouched for every "
    "permutation key, so E_{K_A}(E_{K_R}(|0...0>)) always equals |0...0> and the "
    "arbitration check cannot tell Eve's claim from a genuine signature. Once anyone "
    "can forge, a signer can equally disown a genuine signature, so non-repudiation "
    "falls with unforgeability.";

KeyCensusEntry census_entry(PermutationKey key) {
    const int n = key.size();
    std::vector<Bits> fixed = fixed_basis_states(key);
    const Bits zeros(static_cast<std::size_t>(n), 0);
    const bool has_zeros = std::find(fixed.begin(), fixed.end(), zeros) != fixed.end();
    return KeyCensusEntry{std::move(key), fixed.size(), has_zeros};
}

void finish_census(FixedPointCensus& census) {
    census.all_zeros_universal = !census.entries.empty();
    for (const KeyCensusEntry& entry : census.entries) {
        census.size_histogram[entry.fixed_count] += 1;
        if (!entry.contains_all_zeros) {
            census.all_zeros_universal = false;
        }
    }
}

std::vector<PermutationKey> all_permutation_keys(int n) {
    std::vector<int> mapping(static_cast<std::size_t>(n));
    std::iota(mapping.begin(), mapping.end(), 1);
    std::vector<PermutationKey> keys;
    do {
        keys.emplace_back(mapping);
    } while (std::next_permutation(mapping.begin(), mapping.end()));
    return keys;
}

FixedPointCensus report_census(int n, std::size_t trials, Rng& rng) {
    if (n <= 5) {
        return census_all_keys(n);
    }
    if (n <= 10) {
        const int samples = static_cast<int>(std::min<std::size_t>(trials, 8));
        return explain_fixed_points(n, samples, rng);
    }
    FixedPointCensus census;  // fixed sets above n = 10 are left unsurveyed
    census.n = n;
    return census;
}

}  // namespace

ForgedClaim eve_forge(int n, Rng& rng) {
    if (n < 1) {
        throw SizeError("forged claim needs at least one qubit");
    }
    return ForgedClaim{StateVector(n), PermutationKey::random(n, rng), StateVector(n)};
}

FixedPointCensus explain_fixed_points(int n, int key_samples, Rng& rng) {
    if (n < 1 || n > 10) {
        throw SizeError("fixed-point census supports n in 1..10, got " + std::to_string(n));
    }
    if (key_samples < 1) {
        throw SizeError("fixed-point census needs at least one key sample");
    }
    FixedPointCensus census;
    census.n = n;
    census.exhaustive = false;
    census.entries.reserve(static_cast<std::size_t>(key_samples));
    for (int s = 0; s < key_samples; ++s) {
        census.entries.push_back(census_entry(PermutationKey::random(n, rng)));
    }
    finish_census(census);
    return census;
}

FixedPointCensus census_all_keys(int n) {
    if (n < 1 || n > 6) {
        throw SizeError("exhaustive key census supports n in 1..6, got " + std::to_string(n));
    }
    FixedPointCensus census;
    census.n = n;
    census.exhaustive = true;
    for (PermutationKey& key : all_permutation_keys(n)) {
        census.entries.push_back(census_entry(std::move(key)));
    }
    finish_census(census);
    return census;
}

AttackReport run_forgery(int n, std::size_t trials, const Comparator& cmp, std::uint64_t seed) {
    if (n < 1) {
        throw SizeError("forgery run needs at least one qubit");
    }
    if (trials < 1) {
        throw SizeError("forgery run needs at least one trial");
    }

    AttackReport report;
    report.n = n;
    report.seed = seed;
    report.comparator = cmp;
    report.exhaustive = false;
    report.trials = trials;
    report.trial_records.reserve(trials);

    for (std::size_t t = 1; t <= trials; ++t) {
        Rng trial_rng(seed ^ static_cast<std::uint64_t>(t));
        PartyKeys keys = PartyKeys::random(n, trial_rng);
        ForgedClaim claim = eve_forge(n, trial_rng);
        ArbitrationRecord rec =
            trent_arbitrate(claim.s_e, claim.k_r, claim.p_e, keys, cmp, trial_rng);
        const bool ok = rec.result == ArbitrationResult::Valid;
        if (ok) {
            report.accepted += 1;
        }
        report.trial_records.push_back(
            ForgeryTrial{t, keys.k_a, std::move(claim.k_r), ok, rec.fidelity_st_sclaim});
    }

    Rng census_rng(seed);
    report.census = report_census(n, trials, census_rng);
    report.remark = kRemark;
    return report;
}

AttackReport run_forgery_exhaustive(int n, const Comparator& cmp, std::uint64_t seed) {
    if (n < 1 || n > 6) {
        throw SizeError("exhaustive forgery supports n in 1..6, got " + std::to_string(n));
    }

    AttackReport report;
    report.n = n;
    report.seed = seed;
    report.comparator = cmp;
    report.exhaustive = true;

    const std::vector<PermutationKey> keys = all_permutation_keys(n);
    const StateVector zeros(n);
    Rng rng(seed);  // consumed only by the swap-test comparator
    std::size_t t = 1;
    for (const PermutationKey& k_a : keys) {
        PartyKeys session(k_a, PermutationKey::identity(2 * n + 1),
                          Bits(static_cast<std::size_t>(2 * n), 0));
        for (const PermutationKey& k_r : keys) {
            ArbitrationRecord rec = trent_arbitrate(zeros, k_r, zeros, session, cmp, rng);
            const bool ok = rec.result == ArbitrationResult::Valid;
            if (ok) {
                report.accepted += 1;
            }
            report.trial_records.push_back(
                ForgeryTrial{t, k_a, k_r, ok, rec.fidelity_st_sclaim});
            ++t;
        }
    }
    report.trials = report.trial_records.size();
    report.census = census_all_keys(n);
    report.remark = kRemark;
    return report;
}

}  // namespace aqs
