#pragma once

// Shift-map homotopy systems.
//
// A k-th order homotopy system on a module M is a family of linear maps
// psi^{2^m}, 0 <= m <= k, and a null subspace N stable under them, with
//
//   x psi^{2^m} Sq^l = x Sq^l psi^{2^m}            for 1 <= m <= k, l < 2^m,
//   x psi^{2^m} Sq^{2^m} + x Sq^{2^m} psi^{2^m} = x  for 0 <= m <= k,
//
// for all x in N. Then every x in N killed by Sq^{2^i}, i <= k, has the explicit
// preimage x psi^{2^i} ... psi^2 psi^1 under Sq^{2^{i+1}-1}.
//
// Here psi^{2^m} adds 2^m to one tensor position. The null subspaces are
//   Gamma:    a_i >= 2^k
//   GammaSym: a_1 - a_2 >= 2^k      (leading entry of the sorted representative)
//   GammaCyc: a_1 - a_j > 2^k, j > 1 (leading entry of the canonical rotation)
//   Nabla:    everything
// In arity one the orbit conditions compare a_1 against an implicit a_2 = 0.

#include "sqkit/modules.hpp"

#include <optional>
#include <vector>

namespace sqkit::homotopy {

struct HomotopySystem
{
    HomotopySystem(ModuleKind kind, int order, int position = 1);

    ModuleKind kind;
    int order;     // k
    int position;  // shifted tensor position, 1-based; always 1 for orbit kinds
    // Experiment switch for GammaCyc: false relaxes the margin to a_1 - a_j >= 2^k.
    bool strict_cyclic_margin = true;
};

// Adds r to entry `position` (1-based) of every monomial. Orbit kinds require
// position 1 and shift the leading entry of the stored representative.
Element shift(const Element& x, int position, int r);

// x psi^{2^m} for the system's position.
Element psi(const Element& x, const HomotopySystem& h, int m);

bool in_null(const Entries& monomial, const HomotopySystem& h);
bool in_null(const Element& x, const HomotopySystem& h);
// First support monomial outside N, if any.
std::optional<Entries> first_outside_null(const Element& x, const HomotopySystem& h);

// For orbit kinds: every term of the Gamma expansion of (representative) Sq^l
// keeps the image of the first factor as the canonical leading entry. Always
// true for Gamma and Nabla.
bool leading_entry_stable(const Element& x, int l);

// x psi^{2^m} Sq^l == x Sq^l psi^{2^m}. Requires x in N, m <= k, l < 2^m;
// violations throw PreconditionViolation instead of returning false.
bool verify_commutation(const Element& x, const HomotopySystem& h, int m, int l);

// x psi^{2^m} Sq^{2^m} + x Sq^{2^m} psi^{2^m} == x. Requires x in N, m <= k.
bool verify_homotopy(const Element& x, const HomotopySystem& h, int m);

// y_i = x psi^{2^i} ... psi^1 for i = 0..k. Rejects x outside N
// (NotInNullSubspace) or outside Delta(k) (NotInDelta). Each y_i is checked to
// satisfy y_i Sq^{2^{i+1}-1} = x and to lie in N; a failure of either throws
// InternalInconsistency.
std::vector<Element> preimage_chain(const Element& x, const HomotopySystem& h);

}  // namespace sqkit::homotopy
