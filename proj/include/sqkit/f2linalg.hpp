#pragma once

// Dense linear algebra over F_2 with bit-packed rows.
//
// Vectors are rows and matrices act on the right: v |-> v*M, where the rows of
// M are the images of the domain basis vectors. A BitMatrix with r rows and c
// columns therefore represents a map F_2^r -> F_2^c.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sqkit::f2 {

class BitVector
{
public:
    BitVector() = default;
    explicit BitVector(std::size_t length);
    static BitVector from_bits(std::initializer_list<int> bits);

    std::size_t size() const { return length_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector&, const BitVector&) = default;

    bool is_zero() const;
    std::size_t popcount() const;
    std::optional<std::size_t> first_set() const;
    std::vector<std::size_t> support() const;

    // Bits [begin, begin + len) as a new vector.
    BitVector slice(std::size_t begin, std::size_t len) const;
    // this followed by tail.
    BitVector concat(const BitVector& tail) const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::string to_string() const;

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

class BitMatrix
{
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);
    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const BitVector& row(std::size_t i) const { return rows_[i]; }
    const std::vector<BitVector>& row_vectors() const { return rows_; }
    bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
    void set(std::size_t i, std::size_t j, bool value = true) { rows_[i].set(j, value); }

    // v*M
    BitVector apply(const BitVector& v) const;
    // [this | right], same row count.
    BitMatrix hstack(const BitMatrix& right) const;
    // this*right (composition: first this, then right).
    BitMatrix multiply(const BitMatrix& right) const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

// A subspace of F_2^n held as a reduced row-echelon basis. Two subspaces are
// equal iff their bases are identical.
class Subspace
{
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}
    static Subspace span(std::size_t ambient_dim, std::vector<BitVector> vectors);
    static Subspace full(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BitVector>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    // Residue of v after elimination against the basis.
    BitVector reduce(BitVector v) const;
    bool contains(const BitVector& v) const;
    bool is_subspace_of(const Subspace& other) const;

    friend bool operator==(const Subspace&, const Subspace&) = default;

private:
    std::size_t ambient_ = 0;
    std::vector<BitVector> basis_;
    std::vector<std::size_t> pivots_;
};

// Reduced row-echelon form with zero rows removed.
BitMatrix rref(const BitMatrix& m);
std::size_t rank(const BitMatrix& m);

// {v : v*m = 0}, a subspace of F_2^{rows(m)}.
Subspace kernel_basis(const BitMatrix& m);
// Row space of m, a subspace of F_2^{cols(m)}.
Subspace image_basis(const BitMatrix& m);

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);
bool contains(const Subspace& s, const BitVector& v);

// Some v with v*m = b, or nullopt. The answer is a fixed function of (m, b).
std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b);

// Intersection of s with the coordinate subspace spanned by `coords`,
// expressed in those coordinates (ambient dimension coords.size()).
Subspace restrict_to_coordinates(const Subspace& s, std::span<const std::size_t> coords);
// Inverse of the above: place a subspace of F_2^{coords.size()} into F_2^n.
Subspace embed_coordinates(const Subspace& s, std::span<const std::size_t> coords, std::size_t n);

// Basis vectors of `big` that, together with `small`, span `big`. Returns
// dim(big) - dim(small) vectors when small is contained in big.
std::vector<BitVector> complement_witnesses(const Subspace& big, const Subspace& small);

}  // namespace sqkit::f2
