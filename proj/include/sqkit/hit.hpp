#pragma once

// Delta_M(k) = intersection of ker Sq^{2^i}, i <= k
// I_M(k)     = intersection of im Sq^{2^{i+1}-1}, i <= k
// U_M(k)     = Delta_M(k) / I_M(k)
// computed per bidegree by linear algebra over the lexicographic monomial
// basis. Nabla pieces are infinite and are handled through explicit windows.

#include "sqkit/f2linalg.hpp"
#include "sqkit/modules.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace sqkit::hit {

// Entries of a windowed Nabla piece lie in [lo, hi].
struct Window
{
    int lo = 0;
    int hi = 0;
    auto operator<=>(const Window&) const = default;
};

// A finite-dimensional graded piece: a Gamma-family bidegree, or a Nabla
// bidegree restricted to a window.
struct Piece
{
    ModuleKind kind = ModuleKind::Gamma;
    Bidegree b;
    std::optional<Window> window;

    static Piece gamma_family(ModuleKind kind, Bidegree b);
    static Piece nabla(Bidegree b, Window w);
    auto operator<=>(const Piece&) const = default;
    std::string describe() const;
};

// Natural codomain of Sq^l on a piece. For Nabla the window widens to
// [lo - l, hi], which holds every output monomial.
Piece sq_target(const Piece& source, int l);

class GradedBasis
{
public:
    explicit GradedBasis(const Piece& piece);

    const Piece& piece() const { return piece_; }
    std::size_t size() const { return monomials_.size(); }
    const std::vector<Entries>& monomials() const { return monomials_; }
    std::optional<std::size_t> index_of(const Entries& e) const;

    // Throws InvalidArgument when x has a different kind/bidegree or a
    // monomial outside the piece.
    f2::BitVector to_vector(const Element& x) const;
    Element to_element(const f2::BitVector& v) const;

private:
    Piece piece_;
    std::vector<Entries> monomials_;
    std::map<Entries, std::size_t> index_;
};

struct SqMatrix
{
    Piece source;
    Piece target;
    int l = 0;
    f2::BitMatrix matrix;  // rows: source basis, cols: target basis
};

// On-disk format of a cached Gamma-family matrix (little endian):
//   "SQMX" | u32 version | u8 kind | i32 s | i32 d | i32 l | u64 rows | u64 cols
//   | rows * ceil(cols / 64) u64 words
inline constexpr std::uint32_t kCacheFormatVersion = 1;

void write_matrix_file(const std::filesystem::path& path, ModuleKind kind, Bidegree b, int l, const f2::BitMatrix& m);
// Throws FormatError when the header does not match (kind, b, l) or the file is truncated.
f2::BitMatrix read_matrix_file(const std::filesystem::path& path, ModuleKind kind, Bidegree b, int l);
std::string matrix_file_name(ModuleKind kind, Bidegree b, int l);

// Keyed write-once store of bases and Sq matrices. Safe for concurrent use.
// Gamma-family matrices are also persisted under `directory` when one is set.
class MatrixCache
{
public:
    explicit MatrixCache(std::filesystem::path directory = {}, std::uint64_t max_dim = 200000);

    const GradedBasis& basis(const Piece& piece);
    const SqMatrix& sq_matrix(const Piece& source, int l);

    const std::filesystem::path& directory() const { return directory_; }
    std::uint64_t max_dim() const { return max_dim_; }
    void set_max_dim(std::uint64_t max_dim) { max_dim_ = max_dim; }
    void set_directory(std::filesystem::path directory);
    void clear_memory();
    std::size_t disk_hits() const { return disk_hits_; }

private:
    void check_guardrail(const Piece& piece) const;

    std::filesystem::path directory_;
    std::uint64_t max_dim_;
    mutable std::shared_mutex mutex_;
    std::map<Piece, std::unique_ptr<GradedBasis>> bases_;
    std::map<std::pair<Piece, int>, std::unique_ptr<SqMatrix>> matrices_;
    std::size_t disk_hits_ = 0;
};

MatrixCache& default_cache();

// Matrix of Sq^l from a piece to sq_target(piece, l).
const SqMatrix& sq_matrix(const Piece& source, int l, MatrixCache& cache = default_cache());

// ker Sq^l inside the piece.
f2::Subspace sq_kernel(const Piece& piece, int l, MatrixCache& cache = default_cache());

// Image of Sq^l landing in `target`. Gamma-family: from degree d + l. Nabla:
// from the window [lo, hi + l] at degree d + l, restricted to the target window.
f2::Subspace sq_image(const Piece& target, int l, MatrixCache& cache = default_cache());

// Sources that sq_image uses.
Piece image_source(const Piece& target, int l);

f2::Subspace delta_basis(const Piece& piece, int k, MatrixCache& cache = default_cache());
f2::Subspace spike_image_basis(const Piece& piece, int k, MatrixCache& cache = default_cache());

struct DeltaReport
{
    Piece piece;
    int k = 0;
    std::size_t dim_delta = 0;
    std::size_t dim_image = 0;
    std::size_t dim_unhit = 0;
    bool degenerate = false;  // d < 2^{k+1}
    std::vector<Element> witnesses;  // representatives of a basis of U(k), if requested
};

DeltaReport unhit_report(const Piece& piece, int k, bool with_witnesses = false, MatrixCache& cache = default_cache());

// Span of the basis monomials of `piece` satisfying `keep`, as a coordinate list.
template <class Pred>
std::vector<std::size_t> monomial_coordinates(const GradedBasis& basis, Pred&& keep)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (keep(basis.monomials()[i]))
            out.push_back(i);
    }
    return out;
}

// Membership of an element in a subspace of its piece.
bool element_in(const Element& x, const f2::Subspace& s, const Piece& piece, MatrixCache& cache = default_cache());

struct KerImRow
{
    Piece piece;
    int l = 0;
    std::size_t dim_ker = 0;
    std::size_t dim_im = 0;
    std::size_t dim_meet = 0;
    bool ker_in_im = false;
    bool im_in_ker = false;
    std::vector<Element> ker_not_im;  // a basis of ker modulo (ker meet im)
};

KerImRow ker_vs_im(const Piece& piece, int l, MatrixCache& cache = default_cache());
std::vector<KerImRow> ker_vs_im_explorer(int l, int s_min, int s_max, int d_min, int d_max, ModuleKind kind,
                                         std::optional<Window> window = std::nullopt, MatrixCache& cache = default_cache());

}  // namespace sqkit::hit
