#pragma once

// Named property suites behind `sqkit verify`. Every randomised choice is drawn
// from a generator seeded with the given seed.

#include "sqkit/hit.hpp"
#include "sqkit/modules.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sqkit::verify {

struct SuiteResult
{
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first_failure;             // description of the first failing check
    std::optional<Element> counterexample;  // the element it failed on
    bool passed() const { return failures == 0; }
};

// adem, cartan, instability, homotopy, orbit, structure, counterexample
const std::vector<std::string>& suite_names();

// Throws InvalidArgument for an unknown suite name.
SuiteResult run_suite(std::string_view name, std::uint64_t seed, hit::MatrixCache& cache = hit::default_cache());

}  // namespace sqkit::verify
