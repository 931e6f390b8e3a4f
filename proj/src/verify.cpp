#include "sqkit/verify.hpp"

#include "sqkit/error.hpp"
#include "sqkit/homotopy.hpp"
#include "sqkit/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

namespace sqkit::verify {

namespace {

using homotopy::HomotopySystem;

class Recorder
{
public:
    explicit Recorder(std::string name) { result_.name = std::move(name); }

    void check(bool ok, const std::string& what, const Element& x)
    {
        ++result_.checks;
        if (ok)
            return;
        if (result_.failures++ == 0) {
            result_.first_failure = what;
            result_.counterexample = x;
        }
    }

    // Runs `body`, turning an exception into a recorded failure.
    template <class F>
    void guarded(const std::string& what, const Element& x, F&& body)
    {
        try {
            check(body(), what, x);
        }
        catch (const Error& e) {
            check(false, what + ": " + e.what(), x);
        }
    }

    SuiteResult take() { return std::move(result_); }

private:
    SuiteResult result_;
};

Element single(ModuleKind kind, const Entries& e)
{
    return Element::from_entries(kind, static_cast<int>(e.size()), std::accumulate(e.begin(), e.end(), 0), {e});
}

Entries random_entries(std::mt19937_64& rng, int s, int lo, int hi)
{
    std::uniform_int_distribution<int> dist(lo, hi);
    Entries e(static_cast<std::size_t>(s));
    for (auto& a : e)
        a = dist(rng);
    return e;
}

Element random_gamma(std::mt19937_64& rng, int s, int d)
{
    Element x(ModuleKind::Gamma, s, d);
    std::bernoulli_distribution coin(0.5);
    for (const auto& e : basis_entries({s, d}, ModuleKind::Gamma)) {
        if (coin(rng))
            x.toggle(e);
    }
    return x;
}

template <class F>
void for_each_gamma_monomial(ModuleKind kind, int s_max, int d_max, F&& f)
{
    for (int s = 1; s <= s_max; ++s) {
        for (int d = s; d <= d_max; ++d) {
            for (const auto& e : basis_entries({s, d}, kind))
                f(Element::from_entries(kind, s, d, {e}));
        }
    }
}

std::string sq_label(int l)
{
    return "Sq^" + std::to_string(l);
}

SuiteResult suite_adem(std::uint64_t seed)
{
    Recorder rec("adem");
    for_each_gamma_monomial(ModuleKind::Gamma, 4, 16, [&](const Element& x) {
        for (int n = 1; n <= x.degree(); ++n)
            rec.check(sq(sq(x, 2 * n - 1), n).is_zero(), "x " + sq_label(2 * n - 1) + " " + sq_label(n) + " != 0", x);
    });
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> arity(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const Element x = single(ModuleKind::Nabla, random_entries(rng, arity(rng), -16, 16));
        for (int n = 1; n <= 8; ++n)
            rec.check(sq(sq(x, 2 * n - 1), n).is_zero(), "nabla x " + sq_label(2 * n - 1) + " " + sq_label(n) + " != 0", x);
    }
    return rec.take();
}

SuiteResult suite_cartan(std::uint64_t seed)
{
    Recorder rec("cartan");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> arity(1, 2);
    for (int trial = 0; trial < 200; ++trial) {
        const int s1 = arity(rng), s2 = arity(rng);
        const int d1 = std::uniform_int_distribution<int>(s1, 7)(rng);
        const int d2 = std::uniform_int_distribution<int>(s2, 7)(rng);
        const Element x = random_gamma(rng, s1, d1);
        const Element y = random_gamma(rng, s2, d2);
        const int l = std::uniform_int_distribution<int>(0, d1 + d2)(rng);
        Element expected(ModuleKind::Gamma, s1 + s2, d1 + d2 - l);
        for (int p = 0; p <= l; ++p)
            expected += concat_product(sq(x, p), sq(y, l - p));
        const Element product = concat_product(x, y);
        rec.check(sq(product, l) == expected, "Cartan formula fails for " + sq_label(l), product);
    }
    for_each_gamma_monomial(ModuleKind::Gamma, 3, 12, [&](const Element& x) {
        rec.check(sq_chain(x, {1, 2}) == sq(x, 3), "Sq^1 Sq^2 != Sq^3", x);
        rec.check(sq_chain(x, {1, 1}).is_zero(), "Sq^1 Sq^1 != 0", x);
        rec.check(sq_chain(x, {2, 2}) == sq_chain(x, {3, 1}), "Sq^2 Sq^2 != Sq^3 Sq^1", x);
    });
    return rec.take();
}

SuiteResult suite_instability(std::uint64_t)
{
    Recorder rec("instability");
    for (auto kind : {ModuleKind::Gamma, ModuleKind::GammaSym, ModuleKind::GammaCyc}) {
        for_each_gamma_monomial(kind, 4, 16, [&](const Element& x) {
            for (int l = x.degree() / 2 + 1; l <= x.degree(); ++l)
                rec.check(sq(x, l).is_zero(), "unstable " + sq_label(l) + " is nonzero", x);
        });
    }
    return rec.take();
}

void lemma_checks(Recorder& rec, const Element& x, const HomotopySystem& h)
{
    for (int m = 0; m <= h.order; ++m) {
        rec.guarded("homotopy relation, m = " + std::to_string(m), x, [&] { return homotopy::verify_homotopy(x, h, m); });
        for (int l = 0; m >= 1 && l < (1 << m); ++l)
            rec.guarded("commutation, m = " + std::to_string(m) + ", l = " + std::to_string(l), x, [&] { return homotopy::verify_commutation(x, h, m, l); });
    }
}

// Delta(k) meet N: every basis vector must be certified by preimage_chain and
// lie in I(k).
void certificate_checks(Recorder& rec, const hit::Piece& piece, const HomotopySystem& h, hit::MatrixCache& cache)
{
    const hit::GradedBasis& basis = cache.basis(piece);
    const auto coords = hit::monomial_coordinates(basis, [&](const Entries& e) { return homotopy::in_null(e, h); });
    if (coords.empty())
        return;
    const f2::Subspace delta = hit::delta_basis(piece, h.order, cache);
    const f2::Subspace null_delta = f2::embed_coordinates(f2::restrict_to_coordinates(delta, coords), coords, basis.size());
    const f2::Subspace image = hit::spike_image_basis(piece, h.order, cache);
    for (const auto& v : null_delta.basis()) {
        const Element x = basis.to_element(v);
        rec.check(image.contains(v), "element of Delta(k) meet N outside I(k) at " + piece.describe(), x);
        rec.guarded("preimage chain at " + piece.describe(), x, [&] {
            const auto chain = homotopy::preimage_chain(x, h);
            for (std::size_t i = 0; i < chain.size(); ++i) {
                if (sq(chain[i], (2 << i) - 1) != x)
                    return false;
            }
            return true;
        });
    }
}

SuiteResult suite_homotopy(std::uint64_t seed, hit::MatrixCache& cache)
{
    Recorder rec("homotopy");
    for (int k = 0; k <= 3; ++k) {
        for_each_gamma_monomial(ModuleKind::Gamma, 4, 16, [&](const Element& x) {
            const Entries& e = *x.terms().begin();
            for (int i = 1; i <= x.arity(); ++i) {
                if (e[static_cast<std::size_t>(i - 1)] < (1 << k))
                    continue;
                lemma_checks(rec, x, HomotopySystem(ModuleKind::Gamma, k, i));
            }
        });
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> arity(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        const int s = arity(rng);
        const Element x = single(ModuleKind::Nabla, random_entries(rng, s, -64, 64));
        lemma_checks(rec, x, HomotopySystem(ModuleKind::Nabla, 4, std::uniform_int_distribution<int>(1, s)(rng)));
    }

    for (int k = 0; k <= 2; ++k) {
        for (int s = 1; s <= 4; ++s) {
            for (int d = s; d <= 16; ++d) {
                for (int i = 1; i <= s; ++i)
                    certificate_checks(rec, hit::Piece::gamma_family(ModuleKind::Gamma, {s, d}), HomotopySystem(ModuleKind::Gamma, k, i), cache);
            }
        }
    }
    return rec.take();
}

SuiteResult suite_orbit(std::uint64_t seed, hit::MatrixCache& cache)
{
    Recorder rec("orbit");
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 300; ++trial) {
        const int s = std::uniform_int_distribution<int>(2, 4)(rng);
        const int d = std::uniform_int_distribution<int>(s, 12)(rng);
        const auto monomials = basis_entries({s, d}, ModuleKind::Gamma);
        const Entries& e = monomials[std::uniform_int_distribution<std::size_t>(0, monomials.size() - 1)(rng)];
        const Element m = single(ModuleKind::Gamma, e);
        const int l = std::uniform_int_distribution<int>(0, d)(rng);

        std::vector<int> perm(static_cast<std::size_t>(s));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        rec.check(sq(project_to_orbit(m, ModuleKind::GammaSym), l) == project_to_orbit(sq(permute(m, perm), l), ModuleKind::GammaSym),
                  "symmetric orbit action depends on the representative", m);

        std::vector<int> rot(static_cast<std::size_t>(s));
        const int shift = std::uniform_int_distribution<int>(0, s - 1)(rng);
        for (int j = 0; j < s; ++j)
            rot[static_cast<std::size_t>(j)] = (j + shift) % s;
        rec.check(sq(project_to_orbit(m, ModuleKind::GammaCyc), l) == project_to_orbit(sq(permute(m, rot), l), ModuleKind::GammaCyc),
                  "cyclic orbit action depends on the representative", m);

        // psi_p^r then sigma equals sigma then psi at the new place of p.
        const int a = std::uniform_int_distribution<int>(0, s - 1)(rng);
        const int b = std::uniform_int_distribution<int>(0, s - 1)(rng);
        std::vector<int> swap(static_cast<std::size_t>(s));
        std::iota(swap.begin(), swap.end(), 0);
        std::swap(swap[static_cast<std::size_t>(a)], swap[static_cast<std::size_t>(b)]);
        const int p = std::uniform_int_distribution<int>(1, s)(rng);
        const int r = std::uniform_int_distribution<int>(0, 8)(rng);
        const auto moved = std::find(swap.begin(), swap.end(), p - 1) - swap.begin();
        rec.check(permute(homotopy::shift(m, p, r), swap) == homotopy::shift(permute(m, swap), static_cast<int>(moved) + 1, r),
                  "shift does not commute with permutation", m);
    }

    for (auto kind : {ModuleKind::GammaSym, ModuleKind::GammaCyc}) {
        for (int k = 0; k <= 1; ++k) {
            const HomotopySystem h(kind, k, 1);
            for_each_gamma_monomial(kind, 4, 14, [&](const Element& x) {
                if (homotopy::in_null(x, h))
                    lemma_checks(rec, x, h);
            });
            for (int s = 1; s <= 4; ++s) {
                for (int d = s; d <= 14; ++d)
                    certificate_checks(rec, hit::Piece::gamma_family(kind, {s, d}), h, cache);
            }
        }
    }
    return rec.take();
}

SuiteResult suite_structure(std::uint64_t seed, hit::MatrixCache& cache)
{
    Recorder rec("structure");
    std::mt19937_64 rng(seed);
    for (int s = 2; s <= 4; ++s) {
        for (int d = s; d <= 12; ++d) {
            const hit::Piece piece = hit::Piece::gamma_family(ModuleKind::Gamma, {s, d});
            const hit::GradedBasis& basis = cache.basis(piece);
            std::vector<Element> samples;
            for (const auto& e : basis.monomials())
                samples.push_back(Element::from_entries(ModuleKind::Gamma, s, d, {e}));
            for (int i = 0; i < 20; ++i)
                samples.push_back(random_gamma(rng, s, d));
            const f2::Subspace delta1 = hit::delta_basis(piece, 1, cache);
            for (auto l : {1, 2}) {
                const f2::Subspace ker = hit::sq_kernel(piece, l, cache);
                for (const auto& v : ker.basis())
                    samples.push_back(basis.to_element(v));
            }
            for (const auto& v : delta1.basis())
                samples.push_back(basis.to_element(v));

            for (const auto& x : samples) {
                rec.check(structure::check_sq1_relations(x).empty() == sq(x, 1).is_zero(), "Sq^1 relations disagree with ker Sq^1", x);
                rec.check(structure::check_sq2_relations(x).empty() == sq(x, 2).is_zero(), "Sq^2 relations disagree with ker Sq^2", x);
                rec.check(structure::check_delta1_structure(x).empty() == element_in(x, delta1, piece, cache), "Delta(1) structure disagrees with Delta(1)", x);
            }

            const f2::Subspace sq3_image = hit::sq_image(piece, 3, cache);
            for (const auto& v : delta1.basis()) {
                const Element x = basis.to_element(v);
                rec.guarded("I(1) criterion disagrees with im Sq^3", x, [&] {
                    const auto r = structure::i1_membership(x, cache);
                    return r.member == sq3_image.contains(v) && (!r.member || sq(*r.witness, 3) == x);
                });
            }
        }
    }
    return rec.take();
}

SuiteResult suite_counterexample(hit::MatrixCache& cache)
{
    Recorder rec("counterexample");
    const Element w = structure::counterexample_w();
    const Element z = structure::counterexample_z();
    const auto report = structure::counterexample_suite(w, z, cache);
    for (const auto& c : report.checks)
        rec.check(c.passed, c.name + " (" + c.detail + ")", z);
    rec.check(structure::decompose_first_factor(z).part(1) == w, "z_1 != w", z);
    rec.guarded("z is in I(1)", z, [&] { return !structure::i1_membership(z, cache).member; });
    rec.guarded("element built from w is hit", w, [&] {
        const Element built = structure::build_delta1_element(w, 9, {}, cache);
        return structure::decompose_first_factor(built).part(1) == w && !structure::i1_membership(built, cache).member;
    });
    return rec.take();
}

}  // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {"adem", "cartan", "instability", "homotopy", "orbit", "structure", "counterexample"};
    return names;
}

SuiteResult run_suite(std::string_view name, std::uint64_t seed, hit::MatrixCache& cache)
{
    if (name == "adem")
        return suite_adem(seed);
    if (name == "cartan")
        return suite_cartan(seed);
    if (name == "instability")
        return suite_instability(seed);
    if (name == "homotopy")
        return suite_homotopy(seed, cache);
    if (name == "orbit")
        return suite_orbit(seed, cache);
    if (name == "structure")
        return suite_structure(seed, cache);
    if (name == "counterexample")
        return suite_counterexample(cache);
    throw InvalidArgument("unknown suite '" + std::string(name) + "'");
}

}  // namespace sqkit::verify
