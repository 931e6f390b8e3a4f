#include "sqkit/hit.hpp"

#include "sqkit/error.hpp"

#include <array>
#include <fstream>
#include <limits>

namespace sqkit::hit {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'Q', 'M', 'X'};

void put_le(std::ostream& out, std::uint64_t v, int bytes)
{
    for (int i = 0; i < bytes; ++i)
        out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes)
{
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof())
            throw FormatError("matrix cache file truncated");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

std::uint64_t window_size_bound(const Piece& p)
{
    // Entries in [lo, hi] with a fixed sum: at most width^(s-1) monomials.
    const std::uint64_t width = static_cast<std::uint64_t>(p.window->hi - p.window->lo + 1);
    std::uint64_t bound = 1;
    for (int j = 1; j < p.b.s; ++j) {
        if (bound > std::numeric_limits<std::uint64_t>::max() / width)
            return std::numeric_limits<std::uint64_t>::max();
        bound *= width;
    }
    return bound;
}

long long pow2(int m)
{
    return 1LL << m;
}

}  // namespace

Piece Piece::gamma_family(ModuleKind kind, Bidegree b)
{
    if (!is_gamma_family(kind))
        throw InvalidArgument("nabla pieces need a window");
    return {kind, b, std::nullopt};
}

Piece Piece::nabla(Bidegree b, Window w)
{
    if (w.lo > w.hi)
        throw InvalidArgument("window with lo > hi");
    return {ModuleKind::Nabla, b, w};
}

std::string Piece::describe() const
{
    std::string out = std::string(to_string(kind)) + " (" + std::to_string(b.s) + "," + std::to_string(b.d) + ")";
    if (window)
        out += " window [" + std::to_string(window->lo) + "," + std::to_string(window->hi) + "]";
    return out;
}

Piece sq_target(const Piece& source, int l)
{
    Piece t = source;
    t.b.d -= l;
    if (t.window)
        t.window->lo -= l;
    return t;
}

Piece image_source(const Piece& target, int l)
{
    Piece s = target;
    s.b.d += l;
    if (s.window)
        s.window->hi += l;
    return s;
}

GradedBasis::GradedBasis(const Piece& piece) : piece_(piece)
{
    if (piece.kind == ModuleKind::Nabla) {
        if (!piece.window)
            throw InvalidArgument("nabla piece without a window");
        monomials_ = windowed_basis_entries(piece.b.s, piece.b.d, piece.window->lo, piece.window->hi);
    }
    else {
        if (piece.window)
            throw InvalidArgument("windows apply to nabla pieces only");
        monomials_ = basis_entries(piece.b, piece.kind);
    }
    for (std::size_t i = 0; i < monomials_.size(); ++i)
        index_.emplace(monomials_[i], i);
}

std::optional<std::size_t> GradedBasis::index_of(const Entries& e) const
{
    auto it = index_.find(e);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

f2::BitVector GradedBasis::to_vector(const Element& x) const
{
    if (x.kind() != piece_.kind || x.bidegree() != piece_.b)
        throw InvalidArgument("element of " + std::string(to_string(x.kind())) + " (" + std::to_string(x.arity()) + "," + std::to_string(x.degree()) + ") does not belong to " + piece_.describe());
    f2::BitVector v(size());
    for (const auto& t : x.terms()) {
        auto i = index_of(t);
        if (!i)
            throw InvalidArgument("monomial " + format_monomial(x.kind(), t) + " lies outside " + piece_.describe());
        v.set(*i);
    }
    return v;
}

Element GradedBasis::to_element(const f2::BitVector& v) const
{
    if (v.size() != size())
        throw DimensionMismatch("vector length does not match basis of " + piece_.describe());
    Element x(piece_.kind, piece_.b.s, piece_.b.d);
    for (auto i : v.support())
        x.toggle(monomials_[i]);
    return x;
}

std::string matrix_file_name(ModuleKind kind, Bidegree b, int l)
{
    return "sq_" + std::string(to_string(kind)) + "_s" + std::to_string(b.s) + "_d" + std::to_string(b.d) + "_l" + std::to_string(l) + ".sqmx";
}

void write_matrix_file(const std::filesystem::path& path, ModuleKind kind, Bidegree b, int l, const f2::BitMatrix& m)
{
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw FormatError("cannot write matrix cache file " + tmp);
        out.write(kMagic.data(), kMagic.size());
        put_le(out, kCacheFormatVersion, 4);
        put_le(out, static_cast<std::uint64_t>(kind), 1);
        put_le(out, static_cast<std::uint32_t>(b.s), 4);
        put_le(out, static_cast<std::uint32_t>(b.d), 4);
        put_le(out, static_cast<std::uint32_t>(l), 4);
        put_le(out, m.rows(), 8);
        put_le(out, m.cols(), 8);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (auto w : m.row(r).words())
                put_le(out, w, 8);
        }
        if (!out)
            throw FormatError("failed writing matrix cache file " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

f2::BitMatrix read_matrix_file(const std::filesystem::path& path, ModuleKind kind, Bidegree b, int l)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open matrix cache file " + path.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic)
        throw FormatError("bad magic in " + path.string());
    if (get_le(in, 4) != kCacheFormatVersion)
        throw FormatError("unsupported cache format version in " + path.string());
    const auto kind_tag = get_le(in, 1);
    const auto s = static_cast<std::int32_t>(get_le(in, 4));
    const auto d = static_cast<std::int32_t>(get_le(in, 4));
    const auto ll = static_cast<std::int32_t>(get_le(in, 4));
    if (kind_tag != static_cast<std::uint64_t>(kind) || s != b.s || d != b.d || ll != l)
        throw FormatError("matrix cache header mismatch in " + path.string());
    const auto rows = get_le(in, 8);
    const auto cols = get_le(in, 8);
    std::vector<f2::BitVector> data;
    data.reserve(rows);
    for (std::uint64_t r = 0; r < rows; ++r) {
        f2::BitVector v(cols);
        for (std::uint64_t w = 0; w < (cols + 63) / 64; ++w) {
            const auto word = get_le(in, 8);
            for (int bit = 0; bit < 64; ++bit) {
                if ((word >> bit) & 1u) {
                    const auto j = w * 64 + static_cast<std::uint64_t>(bit);
                    if (j >= cols)
                        throw FormatError("stray bit past the last column in " + path.string());
                    v.set(j);
                }
            }
        }
        data.push_back(std::move(v));
    }
    return f2::BitMatrix::from_rows(std::move(data), cols);
}

MatrixCache::MatrixCache(std::filesystem::path directory, std::uint64_t max_dim) : directory_(std::move(directory)), max_dim_(max_dim) {}

void MatrixCache::set_directory(std::filesystem::path directory)
{
    std::unique_lock lock(mutex_);
    directory_ = std::move(directory);
}

void MatrixCache::clear_memory()
{
    std::unique_lock lock(mutex_);
    matrices_.clear();
    bases_.clear();
}

void MatrixCache::check_guardrail(const Piece& piece) const
{
    const std::uint64_t size = piece.kind == ModuleKind::Nabla ? window_size_bound(piece) : basis_size(piece.b, piece.kind);
    if (size > max_dim_)
        throw GuardrailExceeded("max_dim exceeded: basis of " + piece.describe() + " has up to " + std::to_string(size) + " monomials (max_dim = " + std::to_string(max_dim_) + ")");
}

const GradedBasis& MatrixCache::basis(const Piece& piece)
{
    {
        std::shared_lock lock(mutex_);
        if (auto it = bases_.find(piece); it != bases_.end())
            return *it->second;
    }
    check_guardrail(piece);
    auto built = std::make_unique<GradedBasis>(piece);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = bases_.try_emplace(piece, std::move(built));
    return *it->second;
}

const SqMatrix& MatrixCache::sq_matrix(const Piece& source, int l)
{
    if (l < 0)
        throw InvalidArgument("negative square index");
    const auto key = std::make_pair(source, l);
    {
        std::shared_lock lock(mutex_);
        if (auto it = matrices_.find(key); it != matrices_.end())
            return *it->second;
    }
    const GradedBasis& from = basis(source);
    const Piece target = sq_target(source, l);
    const GradedBasis& to = basis(target);

    auto result = std::make_unique<SqMatrix>();
    result->source = source;
    result->target = target;
    result->l = l;

    std::filesystem::path file;
    bool loaded = false;
    if (!directory_.empty() && source.kind != ModuleKind::Nabla) {
        file = directory_ / matrix_file_name(source.kind, source.b, l);
        if (std::filesystem::exists(file)) {
            auto m = read_matrix_file(file, source.kind, source.b, l);
            if (m.rows() != from.size() || m.cols() != to.size())
                throw FormatError("matrix cache file " + file.string() + " has the wrong shape");
            result->matrix = std::move(m);
            loaded = true;
        }
    }
    if (!loaded) {
        f2::BitMatrix m(from.size(), to.size());
        for (std::size_t i = 0; i < from.size(); ++i) {
            const Element image = sq(Element::from_entries(source.kind, source.b.s, source.b.d, {from.monomials()[i]}), l);
            for (const auto& t : image.terms()) {
                auto j = to.index_of(t);
                if (!j)
                    throw InternalInconsistency("Sq^" + std::to_string(l) + " of " + format_monomial(source.kind, from.monomials()[i]) + " leaves " + target.describe());
                m.set(i, *j);
            }
        }
        result->matrix = std::move(m);
        if (!file.empty()) {
            std::filesystem::create_directories(directory_);
            write_matrix_file(file, source.kind, source.b, l, result->matrix);
        }
    }

    std::unique_lock lock(mutex_);
    if (loaded)
        ++disk_hits_;
    auto [it, inserted] = matrices_.try_emplace(key, std::move(result));
    return *it->second;
}

MatrixCache& default_cache()
{
    static MatrixCache cache;
    return cache;
}

const SqMatrix& sq_matrix(const Piece& source, int l, MatrixCache& cache)
{
    return cache.sq_matrix(source, l);
}

f2::Subspace sq_kernel(const Piece& piece, int l, MatrixCache& cache)
{
    return f2::kernel_basis(cache.sq_matrix(piece, l).matrix);
}

f2::Subspace sq_image(const Piece& target, int l, MatrixCache& cache)
{
    const Piece source = image_source(target, l);
    const SqMatrix& m = cache.sq_matrix(source, l);
    f2::Subspace image = f2::image_basis(m.matrix);
    if (m.target == target)
        return image;
    const GradedBasis& wide = cache.basis(m.target);
    const GradedBasis& narrow = cache.basis(target);
    std::vector<std::size_t> coords;
    coords.reserve(narrow.size());
    for (const auto& e : narrow.monomials()) {
        auto i = wide.index_of(e);
        if (!i)
            throw InternalInconsistency("target window is not contained in the image codomain");
        coords.push_back(*i);
    }
    return f2::restrict_to_coordinates(image, coords);
}

f2::Subspace delta_basis(const Piece& piece, int k, MatrixCache& cache)
{
    if (k < 0)
        throw InvalidArgument("order k must be non-negative");
    f2::BitMatrix stacked = cache.sq_matrix(piece, 1).matrix;
    for (int i = 1; i <= k; ++i)
        stacked = stacked.hstack(cache.sq_matrix(piece, static_cast<int>(pow2(i))).matrix);
    return f2::kernel_basis(stacked);
}

f2::Subspace spike_image_basis(const Piece& piece, int k, MatrixCache& cache)
{
    if (k < 0)
        throw InvalidArgument("order k must be non-negative");
    f2::Subspace meet = sq_image(piece, 1, cache);
    for (int i = 1; i <= k && meet.dim() > 0; ++i)
        meet = f2::intersect(meet, sq_image(piece, static_cast<int>(pow2(i + 1) - 1), cache));
    return meet;
}

DeltaReport unhit_report(const Piece& piece, int k, bool with_witnesses, MatrixCache& cache)
{
    const f2::Subspace delta = delta_basis(piece, k, cache);
    const f2::Subspace image = spike_image_basis(piece, k, cache);
    if (!image.is_subspace_of(delta))
        throw InternalInconsistency("I(k) is not contained in Delta(k) at " + piece.describe());
    DeltaReport r;
    r.piece = piece;
    r.k = k;
    r.dim_delta = delta.dim();
    r.dim_image = image.dim();
    r.dim_unhit = delta.dim() - image.dim();
    r.degenerate = piece.b.d < pow2(k + 1);
    if (with_witnesses) {
        const GradedBasis& basis = cache.basis(piece);
        for (const auto& v : f2::complement_witnesses(delta, image))
            r.witnesses.push_back(basis.to_element(v));
    }
    return r;
}

bool element_in(const Element& x, const f2::Subspace& s, const Piece& piece, MatrixCache& cache)
{
    return s.contains(cache.basis(piece).to_vector(x));
}

KerImRow ker_vs_im(const Piece& piece, int l, MatrixCache& cache)
{
    const f2::Subspace ker = sq_kernel(piece, l, cache);
    const f2::Subspace im = sq_image(piece, l, cache);
    const f2::Subspace meet = f2::intersect(ker, im);
    KerImRow row;
    row.piece = piece;
    row.l = l;
    row.dim_ker = ker.dim();
    row.dim_im = im.dim();
    row.dim_meet = meet.dim();
    row.ker_in_im = meet.dim() == ker.dim();
    row.im_in_ker = meet.dim() == im.dim();
    const GradedBasis& basis = cache.basis(piece);
    for (const auto& v : f2::complement_witnesses(ker, meet))
        row.ker_not_im.push_back(basis.to_element(v));
    return row;
}

std::vector<KerImRow> ker_vs_im_explorer(int l, int s_min, int s_max, int d_min, int d_max, ModuleKind kind, std::optional<Window> window,
                                         MatrixCache& cache)
{
    std::vector<KerImRow> rows;
    for (int s = s_min; s <= s_max; ++s) {
        for (int d = d_min; d <= d_max; ++d) {
            const Piece piece = kind == ModuleKind::Nabla ? Piece::nabla({s, d}, window.value_or(Window{-4, 4})) : Piece::gamma_family(kind, {s, d});
            rows.push_back(ker_vs_im(piece, l, cache));
        }
    }
    return rows;
}

}  // namespace sqkit::hit
