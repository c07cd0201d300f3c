#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aqs/errors.hpp"
#include "aqs/random.hpp"
#include "aqs/state_vector.hpp"

namespace aqs {

/// A permutation (k_1, ..., k_n) of 1..n acting as a chained-CNOT cipher key.
class PermutationKey {
public:
    /// Validates that `mapping` is a permutation of 1..n; throws KeyError.
    explicit PermutationKey(std::vector<int> mapping);

    static PermutationKey identity(int n);
    static PermutationKey random(int n, Rng& rng);  // uniform via Fisher-Yates

    /// Parses the comma-separated 1-based form, e.g. "3,1,2".
    static PermutationKey parse(std::string_view text);
    std::string to_string() const;

    int size() const noexcept { return static_cast<int>(mapping_.size()); }
    /// k_i, 1-based.
    int target_of(int i) const { return mapping_.at(static_cast<std::size_t>(i) - 1); }
    const std::vector<int>& mapping() const noexcept { return mapping_; }

    bool operator==(const PermutationKey&) const = default;

private:
    std::vector<int> mapping_;
};

/// Chained-CNOT encryption: CNOT(p_i, p_{k_i}) applied for i = 1..n, where
/// p_i controls and p_{k_i} is the target (k_i = i contributes no gate).
StateVector encrypt(const StateVector& state, const PermutationKey& key);

/// Exact inverse of encrypt: the same gates applied for i = n..1.
StateVector decrypt(const StateVector& state, const PermutationKey& key);

/// n×n bit matrix over GF(2); always invertible when built from a key, since
/// chained CNOT is reversible.
class Gf2Matrix {
public:
    static Gf2Matrix identity(int n);

    int size() const noexcept { return n_; }
    int bit(int row, int col) const;  // 1-based, {0,1}
    void xor_row_into(int source, int dest);

    /// Matrix-vector product mod 2.
    Bits apply(const Bits& bits) const;

    /// Gaussian elimination over GF(2).
    bool invertible() const;

    /// All solutions of (M ⊕ I)·x = 0, i.e. the basis states encrypt fixes.
    /// Sorted, always contains the all-zeros vector; size is a power of two.
    std::vector<Bits> fixed_points() const;

    bool operator==(const Gf2Matrix&) const = default;

private:
    explicit Gf2Matrix(int n);
    void check_index(int i) const;

    int n_;
    std::vector<std::uint64_t> rows_;  // bit j-1 of rows_[i-1] = entry (i, j)
};

/// The classical shadow of encrypt on computational basis states:
/// encrypt(basis_state(x)) = basis_state(M·x mod 2).
Gf2Matrix gf2_matrix(const PermutationKey& key);

Bits gf2_apply(const Gf2Matrix& m, const Bits& bits);

/// Basis states invariant under encryption with `key`.
std::vector<Bits> fixed_basis_states(const PermutationKey& key);

}  // namespace aqs
