#include "sqkit/structure.hpp"

#include "sqkit/error.hpp"

namespace sqkit::structure {

namespace {

Element generator(int i)
{
    return Element::from_entries(ModuleKind::Gamma, 1, i, {{i}});
}

void require_gamma_arity2(const Element& x, const char* op)
{
    if (x.kind() != ModuleKind::Gamma)
        throw InvalidArgument(std::string(op) + " expects a gamma element");
    if (x.arity() < 2)
        throw InvalidArgument(std::string(op) + " needs arity >= 2");
}

class Checker
{
public:
    void expect_equal(const Element& lhs, const Element& rhs, const char* equation, int index)
    {
        if (lhs == rhs)
            return;
        violations_.push_back({equation, index, "lhs = " + lhs.to_string() + ", rhs = " + rhs.to_string()});
    }
    void expect_zero(const Element& lhs, const char* equation, int index)
    {
        if (lhs.is_zero())
            return;
        violations_.push_back({equation, index, "lhs = " + lhs.to_string()});
    }
    std::vector<Violation> take() { return std::move(violations_); }

private:
    std::vector<Violation> violations_;
};

hit::Piece gamma_piece(int s, int d)
{
    return hit::Piece::gamma_family(ModuleKind::Gamma, {s, d});
}

// Some y in Gamma_{s,d} with y Sq^1 = target, or nullopt.
std::optional<Element> solve_sq1(int s, int d, const Element& target, hit::MatrixCache& cache)
{
    const hit::Piece piece = gamma_piece(s, d);
    const hit::SqMatrix& m = cache.sq_matrix(piece, 1);
    const auto v = f2::solve(m.matrix, cache.basis(m.target).to_vector(target));
    if (!v)
        return std::nullopt;
    return cache.basis(piece).to_element(*v);
}

}  // namespace

Element FirstFactorDecomposition::part(int i) const
{
    if (auto it = terms.find(i); it != terms.end())
        return it->second;
    return Element(ModuleKind::Gamma, s - 1, d - i);
}

Element FirstFactorDecomposition::reassemble() const
{
    Element x(ModuleKind::Gamma, s, d);
    for (const auto& [i, xi] : terms)
        x += concat_product(generator(i), xi);
    return x;
}

FirstFactorDecomposition decompose_first_factor(const Element& x)
{
    require_gamma_arity2(x, "decompose_first_factor");
    FirstFactorDecomposition dec;
    dec.s = x.arity();
    dec.d = x.degree();
    for (const auto& t : x.terms()) {
        const int i = t.front();
        auto it = dec.terms.try_emplace(i, ModuleKind::Gamma, x.arity() - 1, x.degree() - i).first;
        it->second.toggle(Entries(t.begin() + 1, t.end()));
    }
    return dec;
}

std::string to_string(const Violation& v)
{
    std::string out = v.equation;
    if (v.index > 0)
        out += " at index " + std::to_string(v.index);
    return out + ": " + v.detail;
}

std::vector<Violation> check_sq1_relations(const Element& x)
{
    const auto dec = decompose_first_factor(x);
    Checker c;
    for (int n = 1; 2 * n - 1 <= x.degree(); ++n) {
        const Element even = dec.part(2 * n);
        c.expect_equal(even, sq(dec.part(2 * n - 1), 1), "x_{2n} = x_{2n-1} Sq^1", n);
        c.expect_zero(sq(even, 1), "x_{2n} Sq^1 = 0", n);
    }
    return c.take();
}

std::vector<Violation> check_sq2_relations(const Element& x)
{
    const auto dec = decompose_first_factor(x);
    auto p = [&](int i) { return dec.part(i); };
    Checker c;
    for (int m = 1; 4 * m - 3 <= x.degree(); ++m) {
        c.expect_equal(sq(p(4 * m - 2), 1), sq(p(4 * m - 3), 2), "x_{4m-2} Sq^1 = x_{4m-3} Sq^2", m);
        c.expect_equal(p(4 * m), sq(p(4 * m - 2), 2), "x_{4m} = x_{4m-2} Sq^2", m);
        c.expect_equal(p(4 * m + 1), sq(p(4 * m - 1), 2) + sq(p(4 * m), 1), "x_{4m+1} = x_{4m-1} Sq^2 + x_{4m} Sq^1", m);
        c.expect_zero(sq(p(4 * m), 2), "x_{4m} Sq^2 = 0", m);
    }
    return c.take();
}

std::vector<Violation> check_delta1_structure(const Element& x)
{
    const auto dec = decompose_first_factor(x);
    auto p = [&](int i) { return dec.part(i); };
    Checker c;
    const Element x1 = p(1);
    c.expect_zero(sq(x1, 2), "x_1 Sq^2 = 0", 0);
    c.expect_equal(p(2), sq(x1, 1), "x_2 = x_1 Sq^1", 0);
    c.expect_equal(sq(p(3), 1), sq(x1, 3), "x_3 Sq^1 = x_1 Sq^3", 0);
    for (int m = 1; 4 * m - 1 <= x.degree(); ++m) {
        const Element base = p(4 * m - 1);
        const Element base_sq2 = sq(base, 2);
        c.expect_equal(p(4 * m), sq(base, 1), "x_{4m} = x_{4m-1} Sq^1", m);
        c.expect_equal(p(4 * m + 1), base_sq2, "x_{4m+1} = x_{4m-1} Sq^2", m);
        c.expect_equal(p(4 * m + 2), sq(base_sq2, 1), "x_{4m+2} = x_{4m-1} Sq^2 Sq^1", m);
        c.expect_equal(sq(p(4 * m + 3), 1), sq(base_sq2, 3), "x_{4m+3} Sq^1 = x_{4m-1} Sq^2 Sq^3", m);
    }
    return c.take();
}

Element build_delta1_element(const Element& x1, int d, const std::vector<std::optional<Element>>& choices, hit::MatrixCache& cache)
{
    if (x1.kind() != ModuleKind::Gamma || x1.arity() < 1)
        throw PreconditionViolation("build_delta1_element: x_1 must be a gamma element of arity >= 1");
    if (x1.degree() != d - 1)
        throw PreconditionViolation("build_delta1_element: x_1 must have degree d - 1 = " + std::to_string(d - 1));
    if (!sq(x1, 2).is_zero())
        throw PreconditionViolation("build_delta1_element: x_1 Sq^2 != 0");
    const int r = x1.arity();
    const int s = r + 1;

    std::map<int, Element> parts;
    auto part = [&](int i) -> Element {
        if (auto it = parts.find(i); it != parts.end())
            return it->second;
        return Element(ModuleKind::Gamma, r, d - i);
    };
    // x_{4j+3}: choices[j] if given, otherwise a solution of y Sq^1 = target.
    auto pick = [&](int index, std::size_t j, const Element& target) {
        const int degree = d - index;
        if (j < choices.size() && choices[j]) {
            const Element& c = *choices[j];
            if (c.kind() != ModuleKind::Gamma || c.arity() != r || c.degree() != degree)
                throw PreconditionViolation("choice for x_" + std::to_string(index) + " has the wrong kind or bidegree");
            if (sq(c, 1) != target)
                throw PreconditionViolation("choice for x_" + std::to_string(index) + " does not satisfy its Sq^1 equation");
            return c;
        }
        auto y = solve_sq1(r, degree, target, cache);
        if (!y)
            throw InternalInconsistency("no Sq^1-preimage for x_" + std::to_string(index) + " target " + target.to_string());
        return *y;
    };

    parts.emplace(1, x1);
    parts.emplace(2, sq(x1, 1));
    parts.emplace(3, pick(3, 0, sq(x1, 3)));
    for (int m = 1; 4 * m - 1 <= d; ++m) {
        const Element base = part(4 * m - 1);
        const Element base_sq2 = sq(base, 2);
        parts.insert_or_assign(4 * m, sq(base, 1));
        parts.insert_or_assign(4 * m + 1, base_sq2);
        parts.insert_or_assign(4 * m + 2, sq(base_sq2, 1));
        parts.insert_or_assign(4 * m + 3, pick(4 * m + 3, static_cast<std::size_t>(m), sq(base_sq2, 3)));
    }

    Element x(ModuleKind::Gamma, s, d);
    for (const auto& [i, xi] : parts) {
        if (i <= d && !xi.is_zero())
            x += concat_product(generator(i), xi);
    }
    if (!sq(x, 1).is_zero() || !sq(x, 2).is_zero())
        throw InternalInconsistency("constructed element is not in Delta(1): " + x.to_string());
    return x;
}

I1Membership i1_membership(const Element& x, hit::MatrixCache& cache)
{
    require_gamma_arity2(x, "i1_membership");
    if (!sq(x, 1).is_zero() || !sq(x, 2).is_zero())
        throw PreconditionViolation("i1_membership: x is not in Delta(1)");
    const auto dec = decompose_first_factor(x);
    const int r = x.arity() - 1;
    const int d = x.degree();

    // w ranges over ker Sq^3 in Gamma_{r,d+1}; solve w Sq^2 = x_1 there.
    const hit::Piece w_piece = gamma_piece(r, d + 1);
    const f2::Subspace ker3 = hit::sq_kernel(w_piece, 3, cache);
    const hit::SqMatrix& sq2 = cache.sq_matrix(w_piece, 2);
    std::vector<f2::BitVector> rows;
    rows.reserve(ker3.dim());
    for (const auto& k : ker3.basis())
        rows.push_back(sq2.matrix.apply(k));
    const auto restricted = f2::BitMatrix::from_rows(std::move(rows), sq2.matrix.cols());
    const auto coeffs = f2::solve(restricted, cache.basis(sq2.target).to_vector(dec.part(1)));
    if (!coeffs)
        return {false, std::nullopt};

    f2::BitVector wv(cache.basis(w_piece).size());
    for (auto i : coeffs->support())
        wv ^= ker3.basis()[i];
    const Element w = cache.basis(w_piece).to_element(wv);

    Element witness = concat_product(generator(2), w);
    for (int j = 2; 2 * j - 3 <= d; ++j) {
        const Element part = dec.part(2 * j - 3);
        if (!part.is_zero())
            witness += concat_product(generator(2 * j), part);
    }
    if (sq(witness, 3) != x)
        throw InternalInconsistency("Sq^3-preimage check failed for " + x.to_string());
    return {true, std::move(witness)};
}

Element counterexample_w()
{
    return Element::from_entries(ModuleKind::Gamma, 4, 8,
                                 {{1, 1, 2, 4}, {1, 2, 1, 4}, {1, 2, 4, 1}, {2, 1, 4, 1}, {2, 2, 2, 2}, {4, 1, 1, 2}, {4, 2, 1, 1}});
}

Element counterexample_z()
{
    return Element::from_entries(ModuleKind::Gamma, 5, 9,
                                 {{1, 1, 1, 2, 4}, {1, 1, 2, 1, 4}, {1, 1, 2, 4, 1}, {1, 2, 1, 4, 1}, {1, 2, 2, 2, 2},
                                  {1, 4, 1, 1, 2}, {1, 4, 2, 1, 1}, {2, 1, 1, 2, 3}, {2, 1, 2, 1, 3}, {2, 1, 2, 2, 2},
                                  {2, 1, 2, 3, 1}, {2, 2, 1, 2, 2}, {2, 2, 1, 3, 1}, {2, 2, 2, 1, 2}, {2, 2, 2, 2, 1},
                                  {2, 3, 1, 1, 2}, {2, 3, 2, 1, 1}, {3, 1, 2, 1, 2}, {3, 1, 2, 2, 1}, {3, 2, 2, 1, 1},
                                  {4, 1, 1, 1, 2}, {4, 1, 1, 2, 1}, {4, 1, 2, 1, 1}, {4, 2, 1, 1, 1}, {5, 1, 1, 1, 1}});
}

bool CounterexampleReport::passed() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CounterexampleReport counterexample_suite(const Element& w, const std::optional<Element>& z, hit::MatrixCache& cache)
{
    CounterexampleReport report;
    auto shape = [](const hit::SqMatrix& m) { return std::to_string(m.matrix.rows()) + "x" + std::to_string(m.matrix.cols()); };

    {
        const Element image = sq(w, 2);
        report.checks.push_back({"w Sq^2 = 0", image.is_zero(), "w Sq^2 = " + image.to_string()});
    }
    {
        const hit::Piece target = gamma_piece(w.arity(), w.degree());
        const hit::SqMatrix& m = cache.sq_matrix(hit::image_source(target, 2), 2);
        const bool hit_by_sq2 = hit::element_in(w, f2::image_basis(m.matrix), target, cache);
        report.checks.push_back({"w not in im Sq^2", !hit_by_sq2, "Sq^2 matrix " + shape(m) + (hit_by_sq2 ? ", w is hit" : ", w is not hit")});
    }
    if (!z)
        return report;

    const hit::Piece zp = gamma_piece(z->arity(), z->degree());
    {
        const bool in_delta = hit::element_in(*z, hit::delta_basis(zp, 1, cache), zp, cache);
        report.checks.push_back({"z in Delta(1)", in_delta, in_delta ? "z Sq^1 = z Sq^2 = 0" : "z Sq^1 = " + sq(*z, 1).to_string() + ", z Sq^2 = " + sq(*z, 2).to_string()});
    }
    {
        const hit::SqMatrix& m = cache.sq_matrix(hit::image_source(zp, 3), 3);
        const bool hit_by_sq3 = hit::element_in(*z, f2::image_basis(m.matrix), zp, cache);
        report.checks.push_back({"z not in im Sq^3", !hit_by_sq3, "Sq^3 matrix " + shape(m) + (hit_by_sq3 ? ", z is hit" : ", z is not hit")});
    }
    {
        const auto r = hit::unhit_report(zp, 1, false, cache);
        report.dim_unhit = r.dim_unhit;
        report.checks.push_back({"dim U(1) >= 1", r.dim_unhit >= 1,
                                 "dim Delta(1) = " + std::to_string(r.dim_delta) + ", dim I(1) = " + std::to_string(r.dim_image) + ", dim U(1) = " + std::to_string(r.dim_unhit)});
    }
    return report;
}

CounterexampleReport counterexample_suite(hit::MatrixCache& cache)
{
    return counterexample_suite(counterexample_w(), counterexample_z(), cache);
}

}  // namespace sqkit::structure
