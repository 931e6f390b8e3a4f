#include "sqkit/f2linalg.hpp"

#include "sqkit/error.hpp"

#include <algorithm>
#include <bit>

namespace sqkit::f2 {

namespace {

std::size_t word_count(std::size_t bits)
{
    return (bits + 63) / 64;
}

// Full Gauss-Jordan elimination, choosing pivots only among columns
// [0, pivot_limit). Pivot rows are moved to the front in pivot order; the
// remaining rows are zero on [0, pivot_limit). Returns the pivot columns.
std::vector<std::size_t> eliminate(std::vector<BitVector>& rows, std::size_t pivot_limit)
{
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < pivot_limit && rank < rows.size(); ++col) {
        std::size_t found = rank;
        while (found < rows.size() && !rows[found].get(col))
            ++found;
        if (found == rows.size())
            continue;
        std::swap(rows[rank], rows[found]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && rows[r].get(col))
                rows[r] ^= rows[rank];
        }
        pivots.push_back(col);
        ++rank;
    }
    return pivots;
}

}  // namespace

BitVector::BitVector(std::size_t length) : length_(length), words_(word_count(length), 0) {}

BitVector BitVector::from_bits(std::initializer_list<int> bits)
{
    BitVector v(bits.size());
    std::size_t i = 0;
    for (int b : bits)
        v.set(i++, b != 0);
    return v;
}

void BitVector::set(std::size_t i, bool value)
{
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
        words_[i >> 6] |= mask;
    else
        words_[i >> 6] &= ~mask;
}

BitVector& BitVector::operator^=(const BitVector& other)
{
    if (other.length_ != length_)
        throw DimensionMismatch("BitVector xor: length " + std::to_string(length_) + " vs " + std::to_string(other.length_));
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] ^= other.words_[w];
    return *this;
}

bool BitVector::is_zero() const
{
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVector::popcount() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::optional<std::size_t> BitVector::first_set() const
{
    for (std::size_t w = 0; w < words_.size(); ++w) {
        if (words_[w] != 0)
            return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return std::nullopt;
}

std::vector<std::size_t> BitVector::support() const
{
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

BitVector BitVector::slice(std::size_t begin, std::size_t len) const
{
    BitVector out(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (get(begin + i))
            out.set(i);
    }
    return out;
}

BitVector BitVector::concat(const BitVector& tail) const
{
    BitVector out(length_ + tail.length_);
    std::copy(words_.begin(), words_.end(), out.words_.begin());
    for (auto i : tail.support())
        out.set(length_ + i);
    return out;
}

std::string BitVector::to_string() const
{
    std::string s;
    s.reserve(length_);
    for (std::size_t i = 0; i < length_; ++i)
        s.push_back(get(i) ? '1' : '0');
    return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n)
{
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i);
    return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, std::size_t cols)
{
    for (const auto& r : rows) {
        if (r.size() != cols)
            throw DimensionMismatch("BitMatrix row of length " + std::to_string(r.size()) + ", expected " + std::to_string(cols));
    }
    BitMatrix m;
    m.cols_ = cols;
    m.rows_ = std::move(rows);
    return m;
}

BitVector BitMatrix::apply(const BitVector& v) const
{
    if (v.size() != rows())
        throw DimensionMismatch("apply: vector length " + std::to_string(v.size()) + ", matrix has " + std::to_string(rows()) + " rows");
    BitVector out(cols_);
    for (auto i : v.support())
        out ^= rows_[i];
    return out;
}

BitMatrix BitMatrix::hstack(const BitMatrix& right) const
{
    if (right.rows() != rows())
        throw DimensionMismatch("hstack: row counts differ");
    std::vector<BitVector> out;
    out.reserve(rows());
    for (std::size_t i = 0; i < rows(); ++i)
        out.push_back(rows_[i].concat(right.rows_[i]));
    return from_rows(std::move(out), cols_ + right.cols_);
}

BitMatrix BitMatrix::multiply(const BitMatrix& right) const
{
    if (cols_ != right.rows())
        throw DimensionMismatch("multiply: inner dimensions differ");
    std::vector<BitVector> out;
    out.reserve(rows());
    for (const auto& r : rows_)
        out.push_back(right.apply(r));
    return from_rows(std::move(out), right.cols());
}

Subspace Subspace::span(std::size_t ambient_dim, std::vector<BitVector> vectors)
{
    for (const auto& v : vectors) {
        if (v.size() != ambient_dim)
            throw DimensionMismatch("Subspace::span: vector length " + std::to_string(v.size()) + ", ambient " + std::to_string(ambient_dim));
    }
    Subspace s(ambient_dim);
    s.pivots_ = eliminate(vectors, ambient_dim);
    vectors.resize(s.pivots_.size());
    s.basis_ = std::move(vectors);
    return s;
}

Subspace Subspace::full(std::size_t ambient_dim)
{
    return span(ambient_dim, BitMatrix::identity(ambient_dim).row_vectors());
}

BitVector Subspace::reduce(BitVector v) const
{
    if (v.size() != ambient_)
        throw DimensionMismatch("Subspace::reduce: vector length " + std::to_string(v.size()) + ", ambient " + std::to_string(ambient_));
    for (std::size_t r = 0; r < basis_.size(); ++r) {
        if (v.get(pivots_[r]))
            v ^= basis_[r];
    }
    return v;
}

bool Subspace::contains(const BitVector& v) const
{
    return reduce(v).is_zero();
}

bool Subspace::is_subspace_of(const Subspace& other) const
{
    if (other.ambient_ != ambient_)
        throw DimensionMismatch("is_subspace_of: ambient dimensions differ");
    return std::all_of(basis_.begin(), basis_.end(), [&](const BitVector& v) { return other.contains(v); });
}

BitMatrix rref(const BitMatrix& m)
{
    std::vector<BitVector> rows = m.row_vectors();
    auto pivots = eliminate(rows, m.cols());
    rows.resize(pivots.size());
    return BitMatrix::from_rows(std::move(rows), m.cols());
}

std::size_t rank(const BitMatrix& m)
{
    std::vector<BitVector> rows = m.row_vectors();
    return eliminate(rows, m.cols()).size();
}

Subspace kernel_basis(const BitMatrix& m)
{
    // Eliminate on [m | I]; rows whose m-part vanishes carry kernel vectors.
    const std::size_t n = m.rows();
    std::vector<BitVector> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BitVector tag(n);
        tag.set(i);
        rows.push_back(m.row(i).concat(tag));
    }
    const std::size_t r = eliminate(rows, m.cols()).size();
    std::vector<BitVector> kernel;
    kernel.reserve(n - r);
    for (std::size_t i = r; i < n; ++i)
        kernel.push_back(rows[i].slice(m.cols(), n));
    return Subspace::span(n, std::move(kernel));
}

Subspace image_basis(const BitMatrix& m)
{
    return Subspace::span(m.cols(), m.row_vectors());
}

Subspace intersect(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("intersect: ambient " + std::to_string(a.ambient_dim()) + " vs " + std::to_string(b.ambient_dim()));
    // Zassenhaus: rows (u | u) for u in a, (v | 0) for v in b.
    const std::size_t n = a.ambient_dim();
    std::vector<BitVector> rows;
    rows.reserve(a.dim() + b.dim());
    for (const auto& u : a.basis())
        rows.push_back(u.concat(u));
    for (const auto& v : b.basis())
        rows.push_back(v.concat(BitVector(n)));
    const std::size_t r = eliminate(rows, n).size();
    std::vector<BitVector> meet;
    for (std::size_t i = r; i < rows.size(); ++i)
        meet.push_back(rows[i].slice(n, n));
    return Subspace::span(n, std::move(meet));
}

Subspace sum(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("sum: ambient dimensions differ");
    std::vector<BitVector> rows = a.basis();
    rows.insert(rows.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(a.ambient_dim(), std::move(rows));
}

bool contains(const Subspace& s, const BitVector& v)
{
    return s.contains(v);
}

std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b)
{
    if (b.size() != m.cols())
        throw DimensionMismatch("solve: target length " + std::to_string(b.size()) + ", codomain " + std::to_string(m.cols()));
    const std::size_t n = m.rows();
    std::vector<BitVector> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BitVector tag(n);
        tag.set(i);
        rows.push_back(m.row(i).concat(tag));
    }
    const auto pivots = eliminate(rows, m.cols());
    BitVector residue = b;
    BitVector x(n);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (!residue.get(pivots[r]))
            continue;
        residue ^= rows[r].slice(0, m.cols());
        x ^= rows[r].slice(m.cols(), n);
    }
    if (!residue.is_zero())
        return std::nullopt;
    return x;
}

Subspace restrict_to_coordinates(const Subspace& s, std::span<const std::size_t> coords)
{
    const std::size_t n = s.ambient_dim();
    std::vector<char> keep(n, 0);
    for (auto c : coords) {
        if (c >= n)
            throw DimensionMismatch("restrict_to_coordinates: coordinate out of range");
        keep[c] = 1;
    }
    // Reorder columns as (dropped..., kept...). After elimination, rows with a
    // pivot among the kept columns vanish on every dropped coordinate.
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
        if (!keep[c])
            order.push_back(c);
    }
    const std::size_t dropped = order.size();
    order.insert(order.end(), coords.begin(), coords.end());

    std::vector<BitVector> rows;
    rows.reserve(s.dim());
    for (const auto& v : s.basis()) {
        BitVector p(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (v.get(order[j]))
                p.set(j);
        }
        rows.push_back(std::move(p));
    }
    const std::size_t r = eliminate(rows, dropped).size();
    std::vector<BitVector> kept;
    for (std::size_t i = r; i < rows.size(); ++i) {
        if (!rows[i].is_zero())
            kept.push_back(rows[i].slice(dropped, coords.size()));
    }
    return Subspace::span(coords.size(), std::move(kept));
}

Subspace embed_coordinates(const Subspace& s, std::span<const std::size_t> coords, std::size_t n)
{
    if (s.ambient_dim() != coords.size())
        throw DimensionMismatch("embed_coordinates: coordinate list does not match ambient dimension");
    std::vector<BitVector> rows;
    rows.reserve(s.dim());
    for (const auto& v : s.basis()) {
        BitVector out(n);
        for (auto i : v.support())
            out.set(coords[i]);
        rows.push_back(std::move(out));
    }
    return Subspace::span(n, std::move(rows));
}

std::vector<BitVector> complement_witnesses(const Subspace& big, const Subspace& small)
{
    if (big.ambient_dim() != small.ambient_dim())
        throw DimensionMismatch("complement_witnesses: ambient dimensions differ");
    std::vector<BitVector> witnesses;
    Subspace acc = small;
    for (const auto& v : big.basis()) {
        if (acc.contains(v))
            continue;
        witnesses.push_back(v);
        acc = sum(acc, Subspace::span(big.ambient_dim(), {v}));
    }
    return witnesses;
}

}  // namespace sqkit::f2
