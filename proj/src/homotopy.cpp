#include "sqkit/homotopy.hpp"

#include "sqkit/error.hpp"

#include <algorithm>

namespace sqkit::homotopy {

namespace {

constexpr int kMaxOrder = 30;

long long pow2(int m)
{
    return 1LL << m;
}

void check_kind(const Element& x, const HomotopySystem& h)
{
    if (x.kind() != h.kind)
        throw InvalidArgument("element kind " + std::string(to_string(x.kind())) + " does not match homotopy system kind " + std::string(to_string(h.kind)));
}

void require_null(const Element& x, const HomotopySystem& h)
{
    if (auto bad = first_outside_null(x, h))
        throw NotInNullSubspace("monomial " + format_monomial(x.kind(), *bad) + " is outside the null subspace", *bad);
}

void require_order(const HomotopySystem& h, int m)
{
    if (m < 0 || m > h.order)
        throw PreconditionViolation("shift index m = " + std::to_string(m) + " outside [0, " + std::to_string(h.order) + "]");
}

// The orbit-kind shift acts on the leading entry; the margins of the null
// subspace keep that entry leading after the squares involved.
void assert_leading_stable(const Element& x, const HomotopySystem& h, int l)
{
    if (h.kind == ModuleKind::GammaCyc && !h.strict_cyclic_margin)
        return;
    if (!leading_entry_stable(x, l))
        throw InternalInconsistency("leading entry not stable under Sq^" + std::to_string(l) + " for " + x.to_string());
}

}  // namespace

HomotopySystem::HomotopySystem(ModuleKind kind_, int order_, int position_) : kind(kind_), order(order_), position(position_)
{
    if (order < 0 || order > kMaxOrder)
        throw InvalidArgument("homotopy system order must lie in [0, " + std::to_string(kMaxOrder) + "]");
    if (position < 1)
        throw InvalidArgument("shift position must be >= 1");
    if (is_orbit_kind(kind) && position != 1)
        throw InvalidArgument("orbit kinds shift the leading entry; position must be 1");
}

Element shift(const Element& x, int position, int r)
{
    if (position < 1 || position > x.arity())
        throw InvalidArgument("shift position " + std::to_string(position) + " out of range for arity " + std::to_string(x.arity()));
    if (is_orbit_kind(x.kind()) && position != 1)
        throw InvalidArgument("orbit kinds can only shift position 1");
    if (r < 0)
        throw InvalidArgument("shift amount must be non-negative");
    Element out(x.kind(), x.arity(), x.degree() + r);
    const auto j = static_cast<std::size_t>(position - 1);
    for (const auto& t : x.terms()) {
        Entries e = t;
        e[j] += r;
        if (x.kind() == ModuleKind::GammaSym)
            e = canonical_sym_entries(std::move(e));
        else if (x.kind() == ModuleKind::GammaCyc)
            e = canonical_cyc_entries(e);
        out.toggle(std::move(e));
    }
    return out;
}

Element psi(const Element& x, const HomotopySystem& h, int m)
{
    check_kind(x, h);
    return shift(x, h.position, static_cast<int>(pow2(m)));
}

bool in_null(const Entries& e, const HomotopySystem& h)
{
    const long long margin = pow2(h.order);
    switch (h.kind) {
    case ModuleKind::Nabla:
        return true;
    case ModuleKind::Gamma:
        if (h.position > static_cast<int>(e.size()))
            throw InvalidArgument("shift position exceeds monomial arity");
        return e[static_cast<std::size_t>(h.position - 1)] >= margin;
    case ModuleKind::GammaSym: {
        const long long second = e.size() > 1 ? e[1] : 0;
        return e[0] - second >= margin;
    }
    case ModuleKind::GammaCyc: {
        if (e.size() == 1)
            return h.strict_cyclic_margin ? e[0] > margin : e[0] >= margin;
        for (std::size_t j = 1; j < e.size(); ++j) {
            const long long gap = static_cast<long long>(e[0]) - e[j];
            if (h.strict_cyclic_margin ? gap <= margin : gap < margin)
                return false;
        }
        return true;
    }
    }
    return false;
}

bool in_null(const Element& x, const HomotopySystem& h)
{
    check_kind(x, h);
    return !first_outside_null(x, h).has_value();
}

std::optional<Entries> first_outside_null(const Element& x, const HomotopySystem& h)
{
    check_kind(x, h);
    for (const auto& t : x.terms()) {
        if (!in_null(t, h))
            return t;
    }
    return std::nullopt;
}

bool leading_entry_stable(const Element& x, int l)
{
    if (!is_orbit_kind(x.kind()) || x.arity() < 2)
        return true;
    for (const auto& t : x.terms()) {
        const Element expanded = sq(Element::from_entries(ModuleKind::Gamma, x.arity(), x.degree(), {t}), l);
        for (const auto& e : expanded.terms()) {
            const bool ok = x.kind() == ModuleKind::GammaSym ? e[0] == *std::max_element(e.begin(), e.end()) : canonical_cyc_entries(e) == e;
            if (!ok)
                return false;
        }
    }
    return true;
}

bool verify_commutation(const Element& x, const HomotopySystem& h, int m, int l)
{
    check_kind(x, h);
    require_order(h, m);
    if (l < 0 || l >= pow2(m))
        throw PreconditionViolation("commutation needs 0 <= l < 2^m; got l = " + std::to_string(l) + ", m = " + std::to_string(m));
    require_null(x, h);
    if (is_orbit_kind(h.kind))
        assert_leading_stable(x, h, l);
    return sq(psi(x, h, m), l) == psi(sq(x, l), h, m);
}

bool verify_homotopy(const Element& x, const HomotopySystem& h, int m)
{
    check_kind(x, h);
    require_order(h, m);
    require_null(x, h);
    const int l = static_cast<int>(pow2(m));
    if (is_orbit_kind(h.kind))
        assert_leading_stable(x, h, l);
    return sq(psi(x, h, m), l) + psi(sq(x, l), h, m) == x;
}

std::vector<Element> preimage_chain(const Element& x, const HomotopySystem& h)
{
    check_kind(x, h);
    require_null(x, h);
    for (int i = 0; i <= h.order; ++i) {
        if (!sq(x, static_cast<int>(pow2(i))).is_zero())
            throw NotInDelta("x Sq^" + std::to_string(pow2(i)) + " != 0, so x is not in Delta(" + std::to_string(h.order) + ")", i);
    }
    std::vector<Element> chain;
    chain.reserve(static_cast<std::size_t>(h.order) + 1);
    for (int i = 0; i <= h.order; ++i) {
        Element y = x;
        for (int m = i; m >= 0; --m)
            y = psi(y, h, m);
        const int spike = static_cast<int>(pow2(i + 1) - 1);
        if (sq(y, spike) != x)
            throw InternalInconsistency("y_" + std::to_string(i) + " Sq^" + std::to_string(spike) + " != x for x = " + x.to_string());
        if (!in_null(y, h))
            throw InternalInconsistency("y_" + std::to_string(i) + " left the null subspace");
        chain.push_back(std::move(y));
    }
    return chain;
}

}  // namespace sqkit::homotopy
