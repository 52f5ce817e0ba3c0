#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace lawfuzz {

// Exit codes shared by all subcommands: 0 success (and, for `check`, law
// satisfied), 1 law violated (`check` only), 2 input/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitError = 2;

// Prints rho(law, trace, 0) for the spec's top-level law.
int cmd_check(const std::string& spec_path, const std::string& trace_path,
              std::ostream& out, std::ostream& err);

// Prints the indexed violation set of the spec's law as JSON.
int cmd_theta(const std::string& spec_path, std::ostream& out, std::ostream& err);

struct FuzzOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> driver;
  std::optional<double> time_budget_secs;
  std::optional<std::string> baseline;  // "random" | "ga"
  bool falsify = false;
};

int cmd_fuzz(const std::string& config_path, const std::string& out_dir,
             const FuzzOverrides& overrides, std::ostream& out, std::ostream& err);

struct ReplayOverrides {
  std::optional<std::string> driver;
  std::optional<double> dt;
  std::optional<int> steps;
};

// Re-simulates a saved genome artifact and writes the JSONL trace.
int cmd_replay(const std::string& genome_path, const std::string& out_trace_path,
               const ReplayOverrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace lawfuzz
