#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sqkit::cli {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kGuardrail = 3;
inline constexpr int kPreimageRejected = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqkit::cli
