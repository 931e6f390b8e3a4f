#pragma once

// Element interchange format:
//   {"kind":"gamma|nabla|gamma-sym|gamma-cyc","s":int,"d":int,"monomials":[[int,...],...]}
// Monomials are written in ascending lexicographic order, so serialising a
// parsed canonical document reproduces it byte for byte.

#include "sqkit/modules.hpp"

#include <string>
#include <string_view>

namespace sqkit {

std::string to_json(const Element& x);

// Throws FormatError on malformed JSON or on monomials inconsistent with the
// declared kind, arity or degree. Orbit-kind monomials are canonicalised and
// summed mod 2; repeated monomials cancel in pairs.
Element element_from_json(std::string_view text);

}  // namespace sqkit
