#pragma once

#include <iosfwd>
#include <string>

#include "lawfuzz/fuzzer.hpp"
#include "lawfuzz/microsim.hpp"
#include "lawfuzz/parser.hpp"

namespace lawfuzz {

// One JSON file describing a whole run: spec path, driver name, scenario
// template path, fuzzer settings, simulator settings. Relative paths resolve
// against the config file directory, then against $LAWFUZZ_MAP_DIR.
struct CampaignConfig {
  std::string spec_path;
  std::string template_path;
  std::string driver_name = "aggressive";
  std::string engine = "ga";  // "ga" | "random"
  bool falsify_mode = false;
  FuzzConfig fuzz;
  SimConfig sim;
};

CampaignConfig load_campaign_config(const std::string& path);

// Resolves `path` against the directory of `anchor_file`, then the
// LAWFUZZ_MAP_DIR environment variable. Absolute paths pass through.
std::string resolve_path(const std::string& path, const std::string& anchor_file);

struct CampaignResult {
  FuzzOutcome outcome;
  std::string report_path;
  double wall_clock_secs = 0;
  std::string law_name;
};

// Runs the configured engine and writes report.json, coverage_curve.csv and
// per-violation genome/trace artifacts under out_dir.
CampaignResult run_campaign(const CampaignConfig& cfg, const std::string& out_dir,
                            std::ostream& log);

}  // namespace lawfuzz
