// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "sqkit/binomial.hpp"
#include "sqkit/error.hpp"
#include "sqkit/hit.hpp"
#include "sqkit/homotopy.hpp"
#include "sqkit/structure.hpp"
#include "sqkit/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace sqkit;
using homotopy::HomotopySystem;
using hit::Piece;

namespace {

struct Outcome
{
    bool ok = true;
    std::size_t checks = 0;
    std::string first;

    void expect(bool cond, const std::string& what)
    {
        ++checks;
        if (!cond && ok) {
            ok = false;
            first = what;
        }
        else if (!cond) {
            ok = false;
        }
    }
};

std::string at(const Piece& p)
{
    return p.describe();
}

Piece gp(int s, int d)
{
    return Piece::gamma_family(ModuleKind::Gamma, {s, d});
}

// Every vector of the subspace when it is small, otherwise its basis plus
// random combinations.
std::vector<f2::BitVector> sample_subspace(const f2::Subspace& sub, std::mt19937_64& rng, std::size_t random_count = 256)
{
    const auto& b = sub.basis();
    std::vector<f2::BitVector> out;
    if (b.size() <= 12) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << b.size()); ++mask) {
            f2::BitVector v(sub.ambient_dim());
            for (std::size_t i = 0; i < b.size(); ++i)
                if (mask >> i & 1)
                    v ^= b[i];
            out.push_back(v);
        }
        return out;
    }
    out = b;
    std::bernoulli_distribution coin(0.5);
    for (std::size_t t = 0; t < random_count; ++t) {
        f2::BitVector v(sub.ambient_dim());
        for (const auto& bv : b)
            if (coin(rng))
                v ^= bv;
        out.push_back(v);
    }
    return out;
}

Outcome criterion1(hit::MatrixCache& cache)
{
    Outcome o;
    const auto report = structure::counterexample_suite(cache);
    for (const auto& c : report.checks)
        o.expect(c.passed, c.name + ": " + c.detail);
    o.expect(report.checks.size() == 5, "suite must run five checks");
    const auto& m2 = hit::sq_matrix(gp(4, 10), 2, cache).matrix;
    o.expect(m2.rows() == 84 && m2.cols() == 35, "Sq^2 matrix on (4,10) must be 84x35");
    const auto& m3 = hit::sq_matrix(gp(5, 12), 3, cache).matrix;
    o.expect(m3.rows() == 330 && m3.cols() == 70, "Sq^3 matrix on (5,12) must be 330x70");
    const Element w = structure::counterexample_w();
    o.expect(sq(w, 2).is_zero(), "w Sq^2 = 0");
    o.expect(!f2::solve(m2, cache.basis(gp(4, 8)).to_vector(w)).has_value(), "w outside im Sq^2");
    const Element z = structure::counterexample_z();
    o.expect(sq(z, 1).is_zero() && sq(z, 2).is_zero(), "z in Delta(1)");
    o.expect(!f2::solve(m3, cache.basis(gp(5, 9)).to_vector(z)).has_value(), "z outside im Sq^3");
    const auto u = hit::unhit_report(gp(5, 9), 1, false, cache);
    o.expect(u.dim_unhit >= 1, "dim U(1)_{5,9} >= 1");
    return o;
}

Outcome criterion2(hit::MatrixCache& cache)
{
    Outcome o;
    for (int s = 1; s <= 4; ++s)
        for (int d = 1; d <= 16; ++d) {
            const auto r = hit::unhit_report(gp(s, d), 0, false, cache);
            o.expect(r.dim_unhit == 0, "U(0) nonzero at " + at(r.piece));
        }
    return o;
}

Outcome criterion3(hit::MatrixCache& cache)
{
    Outcome o;
    for (int d = 4; d <= 64; ++d) {
        const auto r = hit::unhit_report(gp(1, d), 1, false, cache);
        o.expect(r.dim_unhit == 0, "U(1) nonzero at " + at(r.piece));
    }
    return o;
}

Outcome criterion4(hit::MatrixCache& cache)
{
    Outcome o;
    for (int k = 0; k <= 2; ++k) {
        for (int s = 1; s <= 4; ++s) {
            for (int d = s; d <= 16; ++d) {
                const Piece p = gp(s, d);
                const auto& basis = cache.basis(p);
                const f2::Subspace delta = hit::delta_basis(p, k, cache);
                const f2::Subspace image = hit::spike_image_basis(p, k, cache);
                for (int i = 1; i <= s; ++i) {
                    const HomotopySystem h(ModuleKind::Gamma, k, i);
                    const auto coords = hit::monomial_coordinates(basis, [&](const Entries& e) { return homotopy::in_null(e, h); });
                    const f2::Subspace nd = f2::embed_coordinates(f2::restrict_to_coordinates(delta, coords), coords, basis.size());
                    for (const auto& v : nd.basis()) {
                        const Element x = basis.to_element(v);
                        const std::string where = at(p) + ", k = " + std::to_string(k) + ", i = " + std::to_string(i) + ": " + x.to_string();
                        o.expect(image.contains(v), "not in I(k) at " + where);
                        try {
                            const auto chain = homotopy::preimage_chain(x, h);
                            o.expect(chain.size() == static_cast<std::size_t>(k + 1), "chain length at " + where);
                            for (std::size_t j = 0; j < chain.size(); ++j) {
                                o.expect(sq(chain[j], (2 << j) - 1) == x, "y_j Sq^{2^{j+1}-1} != x at " + where);
                                o.expect(homotopy::in_null(chain[j], h), "y_j outside N at " + where);
                            }
                        }
                        catch (const Error& e) {
                            o.expect(false, std::string("preimage_chain threw: ") + e.what() + " at " + where);
                        }
                    }
                }
            }
        }
    }
    return o;
}

void lemma_checks(Outcome& o, const Element& x, const HomotopySystem& h, int m_max)
{
    for (int m = 0; m <= m_max; ++m) {
        const std::string where = x.to_string() + ", m = " + std::to_string(m);
        try {
            o.expect(homotopy::verify_homotopy(x, h, m), "homotopy relation fails for " + where);
            for (int l = 1; m >= 1 && l < (1 << m); ++l)
                o.expect(homotopy::verify_commutation(x, h, m, l), "commutation fails for " + where + ", l = " + std::to_string(l));
        }
        catch (const Error& e) {
            o.expect(false, std::string(e.what()) + " for " + where);
        }
    }
}

Outcome criterion5()
{
    Outcome o;
    for (int k = 0; k <= 3; ++k)
        for (int s = 1; s <= 4; ++s)
            for (int d = s; d <= 16; ++d)
                for (const auto& e : basis_entries({s, d}, ModuleKind::Gamma))
                    for (int i = 1; i <= s; ++i) {
                        if (e[static_cast<std::size_t>(i - 1)] < (1 << k))
                            continue;
                        lemma_checks(o, Element::from_entries(ModuleKind::Gamma, s, d, {e}), HomotopySystem(ModuleKind::Gamma, k, i), k);
                    }
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> arity(1, 4), entry(-64, 64);
    for (int t = 0; t < 1000; ++t) {
        const int s = arity(rng);
        Entries e(static_cast<std::size_t>(s));
        int d = 0;
        for (auto& a : e)
            d += (a = entry(rng));
        const int position = std::uniform_int_distribution<int>(1, s)(rng);
        lemma_checks(o, Element::from_entries(ModuleKind::Nabla, s, d, {e}), HomotopySystem(ModuleKind::Nabla, 4, position), 4);
    }
    return o;
}

Outcome criterion6(hit::MatrixCache& cache)
{
    Outcome o;
    std::mt19937_64 rng(6);
    for (int s = 2; s <= 4; ++s) {
        for (int d = s; d <= 12; ++d) {
            const Piece p = gp(s, d);
            const auto& b = cache.basis(p);
            const f2::Subspace k1 = hit::sq_kernel(p, 1, cache);
            const f2::Subspace k2 = hit::sq_kernel(p, 2, cache);
            const f2::Subspace d1 = hit::delta_basis(p, 1, cache);
            // kernel elements satisfy the relations
            for (const auto& v : k1.basis())
                o.expect(structure::check_sq1_relations(b.to_element(v)).empty(), "Sq^1 relations fail on ker Sq^1 at " + at(p));
            for (const auto& v : k2.basis())
                o.expect(structure::check_sq2_relations(b.to_element(v)).empty(), "Sq^2 relations fail on ker Sq^2 at " + at(p));
            for (const auto& v : d1.basis())
                o.expect(structure::check_delta1_structure(b.to_element(v)).empty(), "Delta(1) relations fail on Delta(1) at " + at(p));
            // and the relations force membership: test the whole space when small
            const auto everything = sample_subspace(f2::Subspace::full(b.size()), rng, 512);
            for (const auto& v : everything) {
                const Element x = b.to_element(v);
                o.expect(structure::check_sq1_relations(x).empty() == k1.contains(v), "Sq^1 relations disagree at " + x.to_string());
                o.expect(structure::check_sq2_relations(x).empty() == k2.contains(v), "Sq^2 relations disagree at " + x.to_string());
                o.expect(structure::check_delta1_structure(x).empty() == d1.contains(v), "Delta(1) relations disagree at " + x.to_string());
            }
        }
    }
    return o;
}

Outcome criterion7(hit::MatrixCache& cache)
{
    Outcome o;
    std::mt19937_64 rng(7);
    for (int s = 2; s <= 4; ++s) {
        for (int d = s; d <= 12; ++d) {
            const Piece p = gp(s, d);
            const auto& b = cache.basis(p);
            const f2::Subspace d1 = hit::delta_basis(p, 1, cache);
            const auto& m3 = hit::sq_matrix(gp(s, d + 3), 3, cache).matrix;
            for (const auto& v : sample_subspace(d1, rng, 1024)) {
                const Element x = b.to_element(v);
                const bool direct = f2::solve(m3, v).has_value();
                try {
                    const auto r = structure::i1_membership(x, cache);
                    o.expect(r.member == direct, "membership disagrees at " + x.to_string());
                    if (r.member)
                        o.expect(r.witness && sq(*r.witness, 3) == x, "witness fails at " + x.to_string());
                }
                catch (const Error& e) {
                    o.expect(false, std::string(e.what()) + " at " + x.to_string());
                }
            }
        }
    }
    return o;
}

Outcome criterion8()
{
    Outcome o;
    for (int a = -64; a <= 64; ++a) {
        const auto series = oracle::one_plus_x_power(a, 32);
        for (int i = 0; i <= 32; ++i)
            o.expect(gen_binom_mod2(a, i) == (series[static_cast<std::size_t>(i)] != 0),
                     "gen_binom_mod2(" + std::to_string(a) + "," + std::to_string(i) + ")");
    }
    const oracle::Pascal pascal(64);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 500; ++t) {
        const int s = std::uniform_int_distribution<int>(1, 4)(rng);
        const int d = std::uniform_int_distribution<int>(s, 12)(rng);
        Element x(ModuleKind::Gamma, s, d);
        std::bernoulli_distribution coin(0.3);
        for (const auto& e : basis_entries({s, d}, ModuleKind::Gamma))
            if (coin(rng))
                x.toggle(e);
        const int l = std::uniform_int_distribution<int>(0, d)(rng);
        o.expect(oracle::as_map(sq(x, l)) == oracle::naive_sq(x, l, pascal), "Cartan oracle disagrees on " + x.to_string() + " Sq^" + std::to_string(l));
    }
    return o;
}

Outcome criterion9(hit::MatrixCache& cache)
{
    Outcome o;
    // I(k) inside Delta(k)
    for (int k = 0; k <= 3; ++k) {
        for (auto kind : {ModuleKind::Gamma, ModuleKind::GammaSym, ModuleKind::GammaCyc})
            for (int s = 1; s <= 4; ++s)
                for (int d = s; d <= 16; ++d) {
                    const Piece p = Piece::gamma_family(kind, {s, d});
                    const auto r = hit::unhit_report(p, k, false, cache);
                    o.expect(r.dim_delta == r.dim_image + r.dim_unhit, "report arithmetic at " + at(p));
                    o.expect(hit::spike_image_basis(p, k, cache).is_subspace_of(hit::delta_basis(p, k, cache)), "I(k) not in Delta(k) at " + at(p));
                }
        for (int s = 1; s <= 3; ++s)
            for (int d = -6; d <= 6; ++d) {
                const Piece p = Piece::nabla({s, d}, {-4, 4});
                o.expect(hit::spike_image_basis(p, k, cache).is_subspace_of(hit::delta_basis(p, k, cache)), "I(k) not in Delta(k) at " + at(p));
            }
    }
    // two-sided ideal: I(k) . Delta(k) and Delta(k) . I(k) land in I(k)
    std::mt19937_64 rng(9);
    for (int k = 0; k <= 2; ++k) {
        for (int s1 = 1; s1 <= 2; ++s1)
            for (int s2 = 1; s2 <= 2; ++s2)
                for (int d1 = s1; d1 <= 7; ++d1)
                    for (int d2 = s2; d2 <= 7; ++d2) {
                        const Piece p1 = gp(s1, d1), p2 = gp(s2, d2), p12 = gp(s1 + s2, d1 + d2);
                        const f2::Subspace i1 = hit::spike_image_basis(p1, k, cache);
                        const f2::Subspace delta2 = hit::delta_basis(p2, k, cache);
                        if (i1.dim() == 0 || delta2.dim() == 0)
                            continue;
                        const f2::Subspace target12 = hit::spike_image_basis(p12, k, cache);
                        const f2::Subspace target21 = hit::spike_image_basis(gp(s2 + s1, d2 + d1), k, cache);
                        for (int t = 0; t < 4; ++t) {
                            const Element x = cache.basis(p1).to_element(i1.basis()[std::uniform_int_distribution<std::size_t>(0, i1.dim() - 1)(rng)]);
                            const Element y = cache.basis(p2).to_element(delta2.basis()[std::uniform_int_distribution<std::size_t>(0, delta2.dim() - 1)(rng)]);
                            o.expect(hit::element_in(concat_product(x, y), target12, p12, cache), "x.y not in I(k) for x = " + x.to_string() + ", y = " + y.to_string());
                            o.expect(hit::element_in(concat_product(y, x), target21, gp(s2 + s1, d2 + d1), cache), "y.x not in I(k) for x = " + x.to_string() + ", y = " + y.to_string());
                        }
                    }
    }
    // instability, Adem vanishing, Cartan consistency and orbit well-definedness
    for (const char* suite : {"instability", "adem", "cartan", "orbit"}) {
        const auto r = verify::run_suite(suite, 1, cache);
        o.checks += r.checks;
        o.expect(r.passed(), std::string(suite) + ": " + r.first_failure);
    }
    return o;
}

}  // namespace

int main()
{
    hit::MatrixCache cache;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 counterexample in bidegree (5,9)", [&] { return criterion1(cache); }},
        {"2 U(0)_{s,d} = 0, 1 <= s <= 4, 1 <= d <= 16", [&] { return criterion2(cache); }},
        {"3 U(1)_{1,d} = 0, 4 <= d <= 64", [&] { return criterion3(cache); }},
        {"4 preimage certificates on Delta(k) meet N, s <= 4, d <= 16, k <= 2", [&] { return criterion4(cache); }},
        {"5 homotopy system identities (Gamma null monomials, 1000 Nabla samples)", [] { return criterion5(); }},
        {"6 relation checkers match ker Sq^1, ker Sq^2, Delta(1), s <= 4, d <= 12", [&] { return criterion6(cache); }},
        {"7 I(1) criterion matches Sq^3-image membership on Delta(1), s <= 4, d <= 12", [&] { return criterion7(cache); }},
        {"8 oracle cross-checks (power series binomials, naive Cartan)", [] { return criterion8(); }},
        {"9 property suites (I in Delta, ideal, instability, Adem, orbits)", [&] { return criterion9(cache); }},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        }
        catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s [%zu checks, %.2fs]%s%s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.checks, secs, o.ok ? "" : ": ",
                    o.first.c_str());
        failed += o.ok ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
