#pragma once

#include <cstdint>

namespace sqkit {

// C(a, b) mod 2 by Lucas: odd iff the binary digits of b are a subset of those
// of a. Zero when a or b is negative.
constexpr bool binom_mod2(std::int64_t a, std::int64_t b)
{
    if (a < 0 || b < 0)
        return false;
    return (b & ~a) == 0;
}

// Coefficient of x^i in (1 + x)^a over F_2, for any integer a.
//
// For 2^N > i, (1 + x)^{2^N} = 1 + x^{2^N} is 1 modulo x^{2^N}, so a may be
// replaced by its residue in [0, 2^N).
constexpr bool gen_binom_mod2(std::int64_t a, std::int64_t i)
{
    if (i < 0)
        return false;
    std::uint64_t modulus = 1;
    while (modulus <= static_cast<std::uint64_t>(i))
        modulus <<= 1;
    const auto residue = static_cast<std::int64_t>(static_cast<std::uint64_t>(a) & (modulus - 1));
    return binom_mod2(residue, i);
}

}  // namespace sqkit
