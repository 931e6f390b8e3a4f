#pragma once

// Fine structure of Delta(1) = ker Sq^1 meet ker Sq^2 in Gamma.
//
// Every x in Gamma_{s,d}, s >= 2, is uniquely x = sum_i [i].x_i with x_i in
// Gamma_{s-1,d-i}. Membership of x in ker Sq^1, ker Sq^2 and Delta(1) is
// equivalent to families of equations among the x_i; the checkers below
// evaluate those equations and name the ones that fail.

#include "sqkit/hit.hpp"
#include "sqkit/modules.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sqkit::structure {

struct FirstFactorDecomposition
{
    int s = 0;  // arity of x
    int d = 0;  // degree of x
    std::map<int, Element> terms;  // i -> x_i, only nonzero parts

    // x_i, zero when absent.
    Element part(int i) const;
    Element reassemble() const;
};

FirstFactorDecomposition decompose_first_factor(const Element& x);

struct Violation
{
    std::string equation;  // relation label, e.g. "x_{2n} = x_{2n-1} Sq^1"
    int index = 0;         // the n or m at which it fails (0 for single relations)
    std::string detail;
};

std::string to_string(const Violation& v);

// ker Sq^1: x_{2n} = x_{2n-1} Sq^1 and x_{2n} Sq^1 = 0 for n >= 1.
std::vector<Violation> check_sq1_relations(const Element& x);

// ker Sq^2, for m >= 1:
//   x_{4m-2} Sq^1 = x_{4m-3} Sq^2
//   x_{4m}        = x_{4m-2} Sq^2
//   x_{4m+1}      = x_{4m-1} Sq^2 + x_{4m} Sq^1
//   x_{4m} Sq^2   = 0
std::vector<Violation> check_sq2_relations(const Element& x);

// Delta(1):
//   x_1 Sq^2 = 0,  x_2 = x_1 Sq^1,  x_3 Sq^1 = x_1 Sq^3, and for m >= 1
//   x_{4m} = x_{4m-1} Sq^1,  x_{4m+1} = x_{4m-1} Sq^2,
//   x_{4m+2} = x_{4m-1} Sq^2 Sq^1,  x_{4m+3} Sq^1 = x_{4m-1} Sq^2 Sq^3.
std::vector<Violation> check_delta1_structure(const Element& x);

// Builds x in Delta(1)_{s,d} with x_1 = x1 (arity s-1, degree d-1, x1 Sq^2 = 0).
// x_3, x_7, x_11, ... are chosen by solving the Sq^1 equations; choices[j], when
// present, overrides x_{4j+3} and must satisfy its equation. Throws
// PreconditionViolation for a bad x1 or choice, InternalInconsistency if an
// equation has no solution or the result is not in Delta(1).
Element build_delta1_element(const Element& x1, int d, const std::vector<std::optional<Element>>& choices = {},
                             hit::MatrixCache& cache = hit::default_cache());

struct I1Membership
{
    bool member = false;
    std::optional<Element> witness;  // witness Sq^3 = x when member
};

// For x in Delta(1)_{s,d}, s >= 2: x is in I(1) iff x_1 = w Sq^2 for some w in
// ker Sq^3. On success the Sq^3-preimage [2].w + sum_{j>=2} [2j].x_{2j-3} is
// returned and checked. Throws PreconditionViolation if x is not in Delta(1).
I1Membership i1_membership(const Element& x, hit::MatrixCache& cache = hit::default_cache());

// The element w in Gamma_{4,8} and the un-hit z in Delta(1)_{5,9}.
Element counterexample_w();
Element counterexample_z();

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CounterexampleReport
{
    std::vector<CheckResult> checks;
    std::optional<std::size_t> dim_unhit;  // dim U(1)_{s,d} at z's bidegree
    bool passed() const;
};

// (i) w Sq^2 = 0; (ii) w not in im Sq^2; (iii) z in Delta(1); (iv) z not in
// im Sq^3; (v) dim U(1) >= 1 at z's bidegree. Pass z = nullopt to run (i)-(ii).
CounterexampleReport counterexample_suite(const Element& w, const std::optional<Element>& z, hit::MatrixCache& cache = hit::default_cache());
CounterexampleReport counterexample_suite(hit::MatrixCache& cache = hit::default_cache());

}  // namespace sqkit::structure
