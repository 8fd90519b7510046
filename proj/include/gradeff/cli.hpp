#pragma once

// Command-line front end: check, coeffect, eval, laws, annotate.
// Exit status 0 on success, 1 on an analysis error (or a failing law), 2 on
// a usage error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gradeff/coeffect_inference.hpp"
#include "gradeff/law_harness.hpp"

namespace gradeff {

struct cli_config {
  std::string command;
  std::string input = "-";            // program file, "-" for stdin
  std::optional<std::string> source;  // program text; overrides `input`
  std::string instance;               // empty: the command's default
  std::string inputs_path;            // JSON env + store for eval
  std::string format = "human";
  std::uint64_t budget = default_law_budget;
  std::uint64_t seed = harness_config{}.seed;
  lam_split split = lam_split::duplicate;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_analysis = 1;
inline constexpr int exit_usage = 2;

int run(const cli_config& cfg, std::istream& in, std::ostream& out, std::ostream& err);

// Parses argv into a cli_config and runs it.
int main_entry(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace gradeff
