#include "sqkit/modules.hpp"

#include "sqkit/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sqkit {

namespace {

struct FactorTerm
{
    int p;    // square applied to this factor
    int out;  // resulting entry
};

// Nonzero terms of [a] Sq^p for 0 <= p <= l. Orbit kinds act through Gamma.
void factor_terms(int a, int l, ModuleKind kind, std::vector<FactorTerm>& out)
{
    out.clear();
    out.push_back({0, a});
    if (kind == ModuleKind::Nabla) {
        for (int p = 1; p <= l; ++p) {
            if (gen_binom_mod2(std::int64_t{a} - p, p))
                out.push_back({p, a - p});
        }
        return;
    }
    // C(a-p, p) is odd only if p <= a - p, which also forces a - p >= 1.
    for (int p = 1; p <= l && 2 * p <= a; ++p) {
        if (binom_mod2(a - p, p))
            out.push_back({p, a - p});
    }
}

// Cartan expansion of m Sq^l, processed factor by factor. The terms produced
// are pairwise distinct since the output entries determine every p_j.
template <class Emit>
void cartan_expand(const Entries& m, int l, ModuleKind kind, Emit&& emit)
{
    const std::size_t s = m.size();
    if (s == 0) {
        if (l == 0)
            emit(Entries{});
        return;
    }
    std::vector<std::vector<FactorTerm>> options(s);
    for (std::size_t j = 0; j < s; ++j)
        factor_terms(m[j], l, kind, options[j]);
    // reach[j] = largest total square the factors j.. can absorb.
    std::vector<int> reach(s + 1, 0);
    for (std::size_t j = s; j-- > 0;)
        reach[j] = reach[j + 1] + options[j].back().p;
    if (reach[0] < l)
        return;

    Entries current(s);
    auto recurse = [&](auto&& self, std::size_t j, int remaining) -> void {
        if (j + 1 == s) {
            for (const auto& t : options[j]) {
                if (t.p == remaining) {
                    current[j] = t.out;
                    emit(Entries(current));
                    return;
                }
                if (t.p > remaining)
                    return;
            }
            return;
        }
        for (const auto& t : options[j]) {
            if (t.p > remaining)
                break;
            if (remaining - t.p > reach[j + 1])
                continue;
            current[j] = t.out;
            self(self, j + 1, remaining - t.p);
        }
    };
    recurse(recurse, 0, l);
}

void compositions(int s, int d, int lo, int hi, Entries& prefix, std::vector<Entries>& out)
{
    const int placed = static_cast<int>(prefix.size());
    const int left = s - placed;
    if (left == 0) {
        if (d == 0)
            out.push_back(prefix);
        return;
    }
    // Remaining positions after this one must absorb d - a.
    const long long rest = left - 1;
    long long first = std::max<long long>(lo, d - rest * hi);
    long long last = std::min<long long>(hi, d - rest * lo);
    for (long long a = first; a <= last; ++a) {
        prefix.push_back(static_cast<int>(a));
        compositions(s, d - static_cast<int>(a), lo, hi, prefix, out);
        prefix.pop_back();
    }
}

void partitions(int s, int d, int max_part, Entries& prefix, std::vector<Entries>& out)
{
    const int left = s - static_cast<int>(prefix.size());
    if (left == 0) {
        if (d == 0)
            out.push_back(prefix);
        return;
    }
    for (int a = std::min(max_part, d - (left - 1)); a >= 1; --a) {
        if (static_cast<long long>(a) * left < d)
            break;
        prefix.push_back(a);
        partitions(s, d - a, a, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::string_view to_string(ModuleKind kind)
{
    switch (kind) {
    case ModuleKind::Gamma:
        return "gamma";
    case ModuleKind::Nabla:
        return "nabla";
    case ModuleKind::GammaSym:
        return "gamma-sym";
    case ModuleKind::GammaCyc:
        return "gamma-cyc";
    }
    return "?";
}

ModuleKind parse_kind(std::string_view name)
{
    if (name == "gamma")
        return ModuleKind::Gamma;
    if (name == "nabla")
        return ModuleKind::Nabla;
    if (name == "gamma-sym")
        return ModuleKind::GammaSym;
    if (name == "gamma-cyc")
        return ModuleKind::GammaCyc;
    throw InvalidArgument("unknown module kind '" + std::string(name) + "'");
}

int Monomial::degree() const
{
    return std::accumulate(entries.begin(), entries.end(), 0);
}

std::string format_monomial(ModuleKind kind, const Entries& entries)
{
    const char* open = "[";
    const char* close = "]";
    if (kind == ModuleKind::GammaSym) {
        open = "⟨";
        close = "⟩";
    }
    else if (kind == ModuleKind::GammaCyc) {
        open = "(";
        close = ")";
    }
    std::string out = open;
    for (std::size_t j = 0; j < entries.size(); ++j) {
        if (j)
            out += ',';
        out += std::to_string(entries[j]);
    }
    return out + close;
}

Element Element::monomial(const Monomial& m)
{
    Element x(m.kind, m.arity(), m.degree());
    x.toggle(m.entries);
    return x;
}

Element Element::from_entries(ModuleKind kind, int s, int d, const std::vector<Entries>& terms)
{
    Element x(kind, s, d);
    for (const auto& t : terms)
        x.toggle(t);
    return x;
}

void Element::check_entries(const Entries& e) const
{
    if (static_cast<int>(e.size()) != s_)
        throw InvalidArgument("monomial " + format_monomial(kind_, e) + " has arity " + std::to_string(e.size()) + ", element arity is " + std::to_string(s_));
    if (std::accumulate(e.begin(), e.end(), 0LL) != d_)
        throw InvalidArgument("monomial " + format_monomial(kind_, e) + " does not have degree " + std::to_string(d_));
    if (is_gamma_family(kind_) && std::any_of(e.begin(), e.end(), [](int a) { return a < 1; }))
        throw InvalidArgument("monomial " + format_monomial(kind_, e) + " has an entry < 1 in " + std::string(sqkit::to_string(kind_)));
    if (kind_ == ModuleKind::GammaSym && !std::is_sorted(e.begin(), e.end(), std::greater<>()))
        throw InvalidArgument("gamma-sym monomial " + format_monomial(kind_, e) + " is not non-increasing");
    if (kind_ == ModuleKind::GammaCyc && canonical_cyc_entries(e) != e)
        throw InvalidArgument("gamma-cyc monomial " + format_monomial(kind_, e) + " is not the canonical rotation");
}

void Element::toggle(const Entries& e)
{
    check_entries(e);
    auto [it, inserted] = terms_.insert(e);
    if (!inserted)
        terms_.erase(it);
}

void Element::toggle(Entries&& e)
{
    check_entries(e);
    auto it = terms_.find(e);
    if (it != terms_.end())
        terms_.erase(it);
    else
        terms_.insert(std::move(e));
}

Element& Element::operator+=(const Element& other)
{
    if (other.kind_ != kind_ || other.s_ != s_ || other.d_ != d_)
        throw InvalidArgument("adding elements of different kind or bidegree");
    for (const auto& t : other.terms_) {
        auto [it, inserted] = terms_.insert(t);
        if (!inserted)
            terms_.erase(it);
    }
    return *this;
}

std::string Element::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty())
            out += " + ";
        out += format_monomial(kind_, t);
    }
    return out;
}

Element sq_single(int a, int i, ModuleKind kind)
{
    if (i < 0)
        throw InvalidArgument("sq_single: negative square index");
    if (is_gamma_family(kind) && a < 1)
        throw InvalidArgument("sq_single: entry " + std::to_string(a) + " is not allowed in " + std::string(to_string(kind)));
    return sq(Element::from_entries(kind, 1, a, {{a}}), i);
}

Element sq(const Element& x, int l)
{
    if (l < 0)
        throw InvalidArgument("sq: negative square index");
    Element out(x.kind(), x.arity(), x.degree() - l);
    if (l == 0)
        return x;
    if (is_gamma_family(x.kind()) && x.degree() - l < x.arity())
        return out;
    const ModuleKind kind = x.kind();
    for (const auto& m : x.terms()) {
        cartan_expand(m, l, kind, [&](Entries&& e) {
            if (kind == ModuleKind::GammaSym)
                out.toggle(canonical_sym_entries(std::move(e)));
            else if (kind == ModuleKind::GammaCyc)
                out.toggle(canonical_cyc_entries(e));
            else
                out.toggle(std::move(e));
        });
    }
    return out;
}

Element sq_chain(const Element& x, std::initializer_list<int> squares)
{
    Element y = x;
    for (int l : squares)
        y = sq(y, l);
    return y;
}

std::vector<Entries> basis_entries(Bidegree b, ModuleKind kind)
{
    if (kind == ModuleKind::Nabla)
        throw Unsupported("nabla graded pieces are infinite; use windowed_basis");
    std::vector<Entries> out;
    if (b.s < 0)
        return out;
    if (b.s == 0) {
        if (b.d == 0)
            out.push_back({});
        return out;
    }
    if (b.d < b.s)
        return out;
    Entries prefix;
    if (kind == ModuleKind::GammaSym) {
        partitions(b.s, b.d, b.d, prefix, out);
        std::sort(out.begin(), out.end());
        return out;
    }
    compositions(b.s, b.d, 1, b.d, prefix, out);
    if (kind == ModuleKind::GammaCyc)
        std::erase_if(out, [](const Entries& e) { return canonical_cyc_entries(e) != e; });
    return out;
}

std::vector<Monomial> basis(Bidegree b, ModuleKind kind)
{
    std::vector<Monomial> out;
    for (auto& e : basis_entries(b, kind))
        out.push_back({kind, std::move(e)});
    return out;
}

std::vector<Entries> windowed_basis_entries(int s, int d, int lo, int hi)
{
    if (lo > hi)
        throw InvalidArgument("windowed_basis: lo > hi");
    std::vector<Entries> out;
    if (s < 0)
        return out;
    Entries prefix;
    compositions(s, d, lo, hi, prefix, out);
    return out;
}

std::vector<Monomial> windowed_basis(int s, int d, int lo, int hi)
{
    std::vector<Monomial> out;
    for (auto& e : windowed_basis_entries(s, d, lo, hi))
        out.push_back({ModuleKind::Nabla, std::move(e)});
    return out;
}

std::uint64_t basis_size(Bidegree b, ModuleKind kind)
{
    if (kind == ModuleKind::Nabla)
        throw Unsupported("nabla graded pieces are infinite");
    if (b.s == 0)
        return b.d == 0 ? 1 : 0;
    if (b.s < 0 || b.d < b.s)
        return 0;
    // C(d-1, s-1) compositions; orbit kinds have at most this many.
    const std::uint64_t n = static_cast<std::uint64_t>(b.d - 1);
    std::uint64_t k = static_cast<std::uint64_t>(b.s - 1);
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

Element concat_product(const Element& x, const Element& y)
{
    if (x.kind() != ModuleKind::Gamma || y.kind() != ModuleKind::Gamma)
        throw InvalidArgument("concat_product is defined on gamma elements only");
    Element out(ModuleKind::Gamma, x.arity() + y.arity(), x.degree() + y.degree());
    for (const auto& a : x.terms()) {
        for (const auto& b : y.terms()) {
            Entries e = a;
            e.insert(e.end(), b.begin(), b.end());
            out.toggle(std::move(e));
        }
    }
    return out;
}

Entries canonical_sym_entries(Entries e)
{
    std::sort(e.begin(), e.end(), std::greater<>());
    return e;
}

Entries canonical_cyc_entries(const Entries& e)
{
    Entries best = e;
    Entries rot = e;
    for (std::size_t r = 1; r < e.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot > best)
            best = rot;
    }
    return best;
}

Monomial canonicalize_sym(const Monomial& m)
{
    if (!is_gamma_family(m.kind))
        throw InvalidArgument("canonicalize_sym expects a gamma-family monomial");
    return {ModuleKind::GammaSym, canonical_sym_entries(m.entries)};
}

Monomial canonicalize_cyc(const Monomial& m)
{
    if (!is_gamma_family(m.kind))
        throw InvalidArgument("canonicalize_cyc expects a gamma-family monomial");
    return {ModuleKind::GammaCyc, canonical_cyc_entries(m.entries)};
}

Element project_to_orbit(const Element& x, ModuleKind orbit_kind)
{
    if (!is_orbit_kind(orbit_kind))
        throw InvalidArgument("project_to_orbit: target must be gamma-sym or gamma-cyc");
    if (x.kind() != ModuleKind::Gamma)
        throw InvalidArgument("project_to_orbit expects a gamma element");
    Element out(orbit_kind, x.arity(), x.degree());
    for (const auto& t : x.terms())
        out.toggle(orbit_kind == ModuleKind::GammaSym ? canonical_sym_entries(t) : canonical_cyc_entries(t));
    return out;
}

Element as_gamma(const Element& x)
{
    if (!is_gamma_family(x.kind()))
        throw InvalidArgument("as_gamma expects a gamma-family element");
    Element out(ModuleKind::Gamma, x.arity(), x.degree());
    for (const auto& t : x.terms())
        out.toggle(t);
    return out;
}

Element permute(const Element& x, const std::vector<int>& perm)
{
    if (is_orbit_kind(x.kind()))
        throw InvalidArgument("permute: orbit kinds are already permutation invariant");
    if (static_cast<int>(perm.size()) != x.arity())
        throw InvalidArgument("permute: permutation length differs from arity");
    std::vector<char> seen(perm.size(), 0);
    for (int p : perm) {
        if (p < 0 || p >= x.arity() || seen[static_cast<std::size_t>(p)])
            throw InvalidArgument("permute: not a permutation");
        seen[static_cast<std::size_t>(p)] = 1;
    }
    Element out(x.kind(), x.arity(), x.degree());
    for (const auto& t : x.terms()) {
        Entries e(t.size());
        for (std::size_t j = 0; j < t.size(); ++j)
            e[j] = t[static_cast<std::size_t>(perm[j])];
        out.toggle(std::move(e));
    }
    return out;
}

}  // namespace sqkit
