#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <numeric>
#include <vector>

#include "aqs/chained_cipher.hpp"
#include "aqs/random.hpp"
#include "aqs/state_vector.hpp"

using namespace aqs;

namespace {

/// Brute-force oracle: which basis states does `key` leave untouched?
/// Runs the actual statevector cipher on every basis state.
std::vector<Bits> fixed_points_by_simulation(const PermutationKey& key) {
    const int n = key.size();
    std::vector<Bits> fixed;
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
        Bits bits(static_cast<std::size_t>(n), 0);
        for (int q = 1; q <= n; ++q) {
            bits[static_cast<std::size_t>(q - 1)] = static_cast<int>((x >> (n - q)) & 1u);
        }
        const StateVector in = basis_state(n, bits);
        if (fidelity(encrypt(in, key), in) == 1.0) {
            fixed.push_back(bits);
        }
    }
    return fixed;
}

std::vector<PermutationKey> every_key(int n) {
    std::vector<int> mapping(static_cast<std::size_t>(n));
    std::iota(mapping.begin(), mapping.end(), 1);
    std::vector<PermutationKey> keys;
    do {
        keys.emplace_back(mapping);
    } while (std::next_permutation(mapping.begin(), mapping.end()));
    return keys;
}

}  // namespace

TEST_CASE("PermutationKey validates its mapping") {
    CHECK_NOTHROW(PermutationKey({2, 3, 1}));
    CHECK_THROWS_AS(PermutationKey({}), KeyError);
    CHECK_THROWS_AS(PermutationKey({1, 1}), KeyError);
    CHECK_THROWS_AS(PermutationKey({0, 1}), KeyError);
    CHECK_THROWS_AS(PermutationKey({1, 3}), KeyError);

    const PermutationKey id = PermutationKey::identity(4);
    CHECK(id.size() == 4);
    for (int i = 1; i <= 4; ++i) {
        CHECK(id.target_of(i) == i);
    }
}

TEST_CASE("PermutationKey parse and to_string round-trip") {
    const PermutationKey key = PermutationKey::parse("3,1,2");
    CHECK(key.mapping() == std::vector<int>{3, 1, 2});
    CHECK(key.to_string() == "3,1,2");
    CHECK(PermutationKey::parse(key.to_string()) == key);

    CHECK_THROWS_AS(PermutationKey::parse(""), KeyError);
    CHECK_THROWS_AS(PermutationKey::parse("1,"), KeyError);
    CHECK_THROWS_AS(PermutationKey::parse("1,junk"), KeyError);
    CHECK_THROWS_AS(PermutationKey::parse("2,2"), KeyError);
}

TEST_CASE("PermutationKey::random is a seeded uniform draw over permutations") {
    Rng a(13);
    Rng b(13);
    for (int i = 0; i < 10; ++i) {
        const PermutationKey ka = PermutationKey::random(5, a);
        const PermutationKey kb = PermutationKey::random(5, b);
        CHECK(ka == kb);
        std::vector<int> sorted = ka.mapping();
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{1, 2, 3, 4, 5});
    }
    // every size-3 key shows up across a modest sample
    Rng rng(7);
    std::vector<PermutationKey> seen;
    for (int i = 0; i < 200; ++i) {
        const PermutationKey k = PermutationKey::random(3, rng);
        if (std::find(seen.begin(), seen.end(), k) == seen.end()) {
            seen.push_back(k);
        }
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("encrypt on basis states follows the chained-CNOT pass") {
    // key (2,1): CNOT(1->2) then CNOT(2->1); |10> -> |11> -> |01>
    const PermutationKey key({2, 1});
    const StateVector out = encrypt(basis_state(2, {1, 0}), key);
    CHECK(fidelity(out, basis_state(2, {0, 1})) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("encrypt moves superposition across the chain") {
    // |+>|0> under (2,1): CNOT(1->2) entangles, CNOT(2->1) disentangles to |0>|+>
    const PermutationKey key({2, 1});
    StateVector in(2);
    in.h(1);
    const StateVector out = encrypt(in, key);
    StateVector expect(2);
    expect.h(2);
    CHECK(fidelity(out, expect) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identity key leaves every state untouched") {
    Rng rng(3);
    for (int n = 1; n <= 4; ++n) {
        std::vector<QubitState> qs;
        for (int i = 0; i < n; ++i) {
            qs.push_back(haar_qubit(rng));
        }
        const StateVector s = from_product(qs);
        CHECK(fidelity(encrypt(s, PermutationKey::identity(n)), s) ==
              doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("decrypt inverts encrypt exactly") {
    Rng rng(29);
    for (int n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const PermutationKey key = PermutationKey::random(n, rng);
            std::vector<QubitState> qs;
            for (int i = 0; i < n; ++i) {
                qs.push_back(haar_qubit(rng));
            }
            StateVector s = from_product(qs);
            s.cnot(1, n == 1 ? 1 : n);  // roundtrip must hold for entangled inputs too
            const double fid = fidelity(decrypt(encrypt(s, key), key), s);
            CHECK(fid >= 1.0 - 1e-10);
        }
    }
    const PermutationKey k3({2, 3, 1});
    CHECK_THROWS_AS(encrypt(StateVector(2), k3), SizeError);
    CHECK_THROWS_AS(decrypt(StateVector(4), k3), SizeError);
}

TEST_CASE("gf2_matrix of (2,1) matches the hand-composed row updates") {
    // start from I; i=1: row2 ^= row1 -> [[1,0],[1,1]]; i=2: row1 ^= row2 -> [[0,1],[1,1]]
    const Gf2Matrix m = gf2_matrix(PermutationKey({2, 1}));
    CHECK(m.bit(1, 1) == 0);
    CHECK(m.bit(1, 2) == 1);
    CHECK(m.bit(2, 1) == 1);
    CHECK(m.bit(2, 2) == 1);
    CHECK(m.invertible());
}

TEST_CASE("gf2_matrix of the identity key is the identity matrix") {
    const Gf2Matrix m = gf2_matrix(PermutationKey::identity(3));
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            CHECK(m.bit(i, j) == (i == j ? 1 : 0));
        }
    }
    CHECK(m == Gf2Matrix::identity(3));
}

TEST_CASE("statevector encryption matches the GF(2) map on every basis state") {
    Rng rng(37);
    for (int n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const PermutationKey key = PermutationKey::random(n, rng);
            const Gf2Matrix m = gf2_matrix(key);
            for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
                Bits bits(static_cast<std::size_t>(n), 0);
                for (int q = 1; q <= n; ++q) {
                    bits[static_cast<std::size_t>(q - 1)] =
                        static_cast<int>((x >> (n - q)) & 1u);
                }
                const StateVector got = encrypt(basis_state(n, bits), key);
                const StateVector want = basis_state(n, gf2_apply(m, bits));
                CHECK(fidelity(got, want) == 1.0);  // pure amplitude moves, exact
            }
        }
    }
}

TEST_CASE("gf2 apply validates width") {
    const Gf2Matrix m = gf2_matrix(PermutationKey({2, 1}));
    CHECK_THROWS_AS(gf2_apply(m, Bits{1}), SizeError);
    CHECK(gf2_apply(m, Bits{0, 0}) == Bits{0, 0});
}

TEST_CASE("fixed_points equals the brute-force simulation census") {
    for (const PermutationKey& key : every_key(3)) {
        CHECK(fixed_basis_states(key) == fixed_points_by_simulation(key));
    }
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const PermutationKey key = PermutationKey::random(5, rng);
        CHECK(fixed_basis_states(key) == fixed_points_by_simulation(key));
    }
}

TEST_CASE("fixed set always contains all-zeros and has power-of-two size") {
    Rng rng(47);
    for (int n : {1, 2, 3, 4, 5, 6, 8, 10}) {
        for (int trial = 0; trial < 20; ++trial) {
            const PermutationKey key = PermutationKey::random(n, rng);
            const std::vector<Bits> fixed = fixed_basis_states(key);
            CHECK(std::has_single_bit(fixed.size()));
            CHECK(std::find(fixed.begin(), fixed.end(), Bits(static_cast<std::size_t>(n), 0)) !=
                  fixed.end());
        }
    }
}

TEST_CASE("known fixed sets") {
    // (2,1): M+I = [[1,1],[1,0]] is full rank, so only the zero vector survives.
    CHECK(fixed_basis_states(PermutationKey({2, 1})) == std::vector<Bits>{{0, 0}});
    // identity key fixes everything
    CHECK(fixed_basis_states(PermutationKey::identity(2)).size() == 4);
    CHECK(fixed_basis_states(PermutationKey::identity(3)).size() == 8);
}

TEST_CASE("key matrices are always invertible") {
    Rng rng(53);
    for (int n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            CHECK(gf2_matrix(PermutationKey::random(n, rng)).invertible());
        }
    }
}

TEST_CASE("encrypting all-zeros is the identity for every key, exactly") {
    for (const PermutationKey& key : every_key(4)) {
        const StateVector zeros(4);
        const StateVector out = encrypt(zeros, key);
        for (std::size_t i = 0; i < out.dim(); ++i) {
            const Complex want = i == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            CHECK(std::abs(out.amplitude(i) - want) < 1e-12);
        }
    }
}
