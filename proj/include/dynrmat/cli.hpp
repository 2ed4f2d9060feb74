// cli.hpp
// Command-line front end: build, verify, classify, hecke and transform.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynrmat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitResidual = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitPole = 3;
inline constexpr int kExitNotInFamily = 4;
inline constexpr int kExitUsage = 64;

/// args[0] is the program name. Reports go to --out when given, otherwise to out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynrmat::cli
