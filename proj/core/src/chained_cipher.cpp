#include "aqs/chained_cipher.hpp"

#include <algorithm>
#include <bit>
#include <charconv>

namespace aqs {

PermutationKey::PermutationKey(std::vector<int> mapping) : mapping_(std::move(mapping)) {
    const int n = static_cast<int>(mapping_.size());
    if (n == 0) throw KeyError("empty key");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : mapping_) {
        if (v < 1 || v > n)
            throw KeyError("key entry " + std::to_string(v) + " outside 1.." + std::to_string(n));
        if (seen[static_cast<std::size_t>(v) - 1])
            throw KeyError("key entry " + std::to_string(v) + " repeats; not a permutation");
        seen[static_cast<std::size_t>(v) - 1] = true;
    }
}

PermutationKey PermutationKey::identity(int n) {
    std::vector<int> mapping(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mapping[static_cast<std::size_t>(i)] = i + 1;
    return PermutationKey(std::move(mapping));
}

PermutationKey PermutationKey::random(int n, Rng& rng) {
    std::vector<int> mapping(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mapping[static_cast<std::size_t>(i)] = i + 1;
    for (std::size_t i = mapping.size(); i > 1; --i)
        std::swap(mapping[i - 1], mapping[uniform_index(rng, i)]);
    return PermutationKey(std::move(mapping));
}

PermutationKey PermutationKey::parse(std::string_view text) {
    std::vector<int> mapping;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view field = text.substr(pos, comma - pos);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size())
            throw KeyError("malformed key field '" + std::string(field) + "'");
        mapping.push_back(value);
        pos = comma + 1;
    }
    return PermutationKey(std::move(mapping));
}

std::string PermutationKey::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < mapping_.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(mapping_[i]);
    }
    return out;
}

namespace {

void check_cipher_size(const StateVector& state, const PermutationKey& key) {
    if (key.size() != state.num_qubits())
        throw SizeError("key length " + std::to_string(key.size()) + " does not match " +
                        std::to_string(state.num_qubits()) + "-qubit state");
}

}  // namespace

StateVector encrypt(const StateVector& state, const PermutationKey& key) {
    check_cipher_size(state, key);
    StateVector out = state;
    for (int i = 1; i <= key.size(); ++i) out.cnot(i, key.target_of(i));
    return out;
}

StateVector decrypt(const StateVector& state, const PermutationKey& key) {
    check_cipher_size(state, key);
    StateVector out = state;
    for (int i = key.size(); i >= 1; --i) out.cnot(i, key.target_of(i));
    return out;
}

Gf2Matrix::Gf2Matrix(int n) : n_(n), rows_(static_cast<std::size_t>(n), 0) {
    if (n < 1 || n > 64) throw SizeError("GF(2) matrix size " + std::to_string(n) + " outside 1..64");
}

Gf2Matrix Gf2Matrix::identity(int n) {
    Gf2Matrix m(n);
    for (int i = 0; i < n; ++i) m.rows_[static_cast<std::size_t>(i)] = std::uint64_t{1} << i;
    return m;
}

void Gf2Matrix::check_index(int i) const {
    if (i < 1 || i > n_)
        throw IndexError("index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
}

int Gf2Matrix::bit(int row, int col) const {
    check_index(row);
    check_index(col);
    return static_cast<int>((rows_[static_cast<std::size_t>(row) - 1] >> (col - 1)) & 1u);
}

void Gf2Matrix::xor_row_into(int source, int dest) {
    check_index(source);
    check_index(dest);
    rows_[static_cast<std::size_t>(dest) - 1] ^= rows_[static_cast<std::size_t>(source) - 1];
}

Bits Gf2Matrix::apply(const Bits& bits) const {
    if (bits.size() != static_cast<std::size_t>(n_))
        throw SizeError(std::to_string(bits.size()) + " bits given for size-" + std::to_string(n_) +
                        " matrix");
    std::uint64_t input = 0;
    for (int j = 0; j < n_; ++j) {
        const int b = bits[static_cast<std::size_t>(j)];
        if (b != 0 && b != 1) throw SizeError("bits must be 0 or 1");
        input |= static_cast<std::uint64_t>(b) << j;
    }
    Bits out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        out[static_cast<std::size_t>(i)] =
            std::popcount(rows_[static_cast<std::size_t>(i)] & input) & 1;
    return out;
}

bool Gf2Matrix::invertible() const {
    std::vector<std::uint64_t> rows = rows_;
    for (int col = 0; col < n_; ++col) {
        const std::uint64_t mask = std::uint64_t{1} << col;
        int pivot = -1;
        for (int r = col; r < n_; ++r)
            if (rows[static_cast<std::size_t>(r)] & mask) {
                pivot = r;
                break;
            }
        if (pivot < 0) return false;
        std::swap(rows[static_cast<std::size_t>(col)], rows[static_cast<std::size_t>(pivot)]);
        for (int r = col + 1; r < n_; ++r)
            if (rows[static_cast<std::size_t>(r)] & mask)
                rows[static_cast<std::size_t>(r)] ^= rows[static_cast<std::size_t>(col)];
    }
    return true;
}

std::vector<Bits> Gf2Matrix::fixed_points() const {
    // Null space of M ⊕ I by Gauss-Jordan elimination.
    std::vector<std::uint64_t> rows = rows_;
    for (int i = 0; i < n_; ++i) rows[static_cast<std::size_t>(i)] ^= std::uint64_t{1} << i;

    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < n_ && rank < n_; ++col) {
        const std::uint64_t mask = std::uint64_t{1} << col;
        int pivot = -1;
        for (int r = rank; r < n_; ++r)
            if (rows[static_cast<std::size_t>(r)] & mask) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
        for (int r = 0; r < n_; ++r)
            if (r != rank && (rows[static_cast<std::size_t>(r)] & mask))
                rows[static_cast<std::size_t>(r)] ^= rows[static_cast<std::size_t>(rank)];
        pivot_col.push_back(col);
        ++rank;
    }

    std::vector<std::uint64_t> basis;
    for (int col = 0; col < n_; ++col) {
        if (std::find(pivot_col.begin(), pivot_col.end(), col) != pivot_col.end()) continue;
        std::uint64_t x = std::uint64_t{1} << col;
        for (int r = 0; r < rank; ++r)
            if (rows[static_cast<std::size_t>(r)] & (std::uint64_t{1} << col))
                x |= std::uint64_t{1} << pivot_col[static_cast<std::size_t>(r)];
        basis.push_back(x);
    }

    std::vector<Bits> out;
    const std::size_t count = std::size_t{1} << basis.size();
    out.reserve(count);
    for (std::size_t combo = 0; combo < count; ++combo) {
        std::uint64_t x = 0;
        for (std::size_t b = 0; b < basis.size(); ++b)
            if (combo & (std::size_t{1} << b)) x ^= basis[b];
        Bits bits(static_cast<std::size_t>(n_));
        for (int j = 0; j < n_; ++j) bits[static_cast<std::size_t>(j)] = static_cast<int>((x >> j) & 1u);
        out.push_back(std::move(bits));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Gf2Matrix gf2_matrix(const PermutationKey& key) {
    Gf2Matrix m = Gf2Matrix::identity(key.size());
    // CNOT(p_i, p_{k_i}) on a basis label is b_{k_i} ⊕= b_i.
    for (int i = 1; i <= key.size(); ++i)
        if (key.target_of(i) != i) m.xor_row_into(i, key.target_of(i));
    return m;
}

Bits gf2_apply(const Gf2Matrix& m, const Bits& bits) { return m.apply(bits); }

std::vector<Bits> fixed_basis_states(const PermutationKey& key) {
    return gf2_matrix(key).fixed_points();
}

}  // namespace aqs
