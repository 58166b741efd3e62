#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geodint/integrators.hpp"

namespace geodint::cli {

// Comma separated decimals without spaces, e.g. "2,0". Throws Error(Config).
Vector parse_vector(std::string_view text);
std::vector<double> parse_list(std::string_view text);

// Rule names plus the aliases gr, mod-gr, gr-lex and gr-slex. The policy
// string, when given, overrides the alias or rule default and implies a
// locally exact scheme. Throws Error(Config) with "unknown scheme: <name>".
Scheme resolve_scheme(std::string_view name, const HamiltonianSystem& sys, const std::optional<std::string>& policy,
                      bool locally_exact, const std::optional<Vector>& ref_point);

// Full command line entry point. Exit codes: 0 success, 1 configuration
// error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geodint::cli
