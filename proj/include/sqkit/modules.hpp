#pragma once

// Monomial modules with a right action of the Steenrod squares.
//
//   Gamma     reduced homology of the s-fold smash of RP^infty; monomials
//             [a_1, ..., a_s] with every a_j >= 1.
//   Nabla     dual of the localised polynomial algebra; entries in Z and the
//             single-factor action uses generalised binomial parity.
//   GammaSym  Gamma tensored down by the symmetric group; representatives are
//             stored non-increasing.
//   GammaCyc  Gamma tensored down by the cyclic group; representatives are the
//             lexicographically largest rotation.
//
// Squares act on the right and extend over tensor factors by the Cartan
// formula. The two Gamma orbit kinds act through a Gamma representative and
// re-canonicalise.

#include "sqkit/binomial.hpp"

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sqkit {

enum class ModuleKind { Gamma, Nabla, GammaSym, GammaCyc };

std::string_view to_string(ModuleKind kind);
// "gamma", "nabla", "gamma-sym", "gamma-cyc"
ModuleKind parse_kind(std::string_view name);

constexpr bool is_gamma_family(ModuleKind k)
{
    return k != ModuleKind::Nabla;
}
constexpr bool is_orbit_kind(ModuleKind k)
{
    return k == ModuleKind::GammaSym || k == ModuleKind::GammaCyc;
}

using Entries = std::vector<int>;

struct Bidegree
{
    int s = 0;
    int d = 0;
    auto operator<=>(const Bidegree&) const = default;
};

struct Monomial
{
    ModuleKind kind = ModuleKind::Gamma;
    Entries entries;

    int arity() const { return static_cast<int>(entries.size()); }
    int degree() const;
    auto operator<=>(const Monomial&) const = default;
};

std::string format_monomial(ModuleKind kind, const Entries& entries);

// An F_2 combination of monomials of one kind and one bidegree.
class Element
{
public:
    Element() = default;
    Element(ModuleKind kind, int s, int d) : kind_(kind), s_(s), d_(d) {}
    static Element monomial(const Monomial& m);
    static Element from_entries(ModuleKind kind, int s, int d, const std::vector<Entries>& terms);

    ModuleKind kind() const { return kind_; }
    int arity() const { return s_; }
    int degree() const { return d_; }
    Bidegree bidegree() const { return {s_, d_}; }

    const std::set<Entries>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool contains(const Entries& e) const { return terms_.count(e) != 0; }

    // Adds one monomial; a monomial already present cancels.
    void toggle(const Entries& e);
    void toggle(Entries&& e);
    Element& operator+=(const Element& other);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend bool operator==(const Element&, const Element&) = default;

    std::string to_string() const;

private:
    void check_entries(const Entries& e) const;

    ModuleKind kind_ = ModuleKind::Gamma;
    int s_ = 0;
    int d_ = 0;
    std::set<Entries> terms_;
};

// [a] Sq^i in arity one. Gamma: C(a-i, i) [a-i], zero when a - i < 1.
// Nabla: ((a-i choose i)) [a-i] with the power-series coefficient.
Element sq_single(int a, int i, ModuleKind kind);

// x Sq^l.
Element sq(const Element& x, int l);
// x Sq^{l_1} Sq^{l_2} ... applied left to right.
Element sq_chain(const Element& x, std::initializer_list<int> squares);

// Basis of a finite graded piece, ascending lexicographic. Gamma-family only.
std::vector<Monomial> basis(Bidegree b, ModuleKind kind);
std::vector<Entries> basis_entries(Bidegree b, ModuleKind kind);
// Nabla monomials of degree d with every entry in [lo, hi], lexicographic.
std::vector<Monomial> windowed_basis(int s, int d, int lo, int hi);
std::vector<Entries> windowed_basis_entries(int s, int d, int lo, int hi);
// Size of the Gamma-family basis without enumerating it (saturates at UINT64_MAX).
std::uint64_t basis_size(Bidegree b, ModuleKind kind);

// Concatenation product on Gamma, extended bilinearly.
Element concat_product(const Element& x, const Element& y);

Monomial canonicalize_sym(const Monomial& m);
Monomial canonicalize_cyc(const Monomial& m);
Entries canonical_sym_entries(Entries e);
Entries canonical_cyc_entries(const Entries& e);
// Image of a Gamma element in F_2 (x)_G Gamma for G = Sigma_s or C_s.
Element project_to_orbit(const Element& x, ModuleKind orbit_kind);
// The same element regarded as a Gamma element on its stored representatives.
Element as_gamma(const Element& x);

// Permutes tensor positions: output position j holds input entry perm[j].
Element permute(const Element& x, const std::vector<int>& perm);

}  // namespace sqkit
