#include "lawfuzz/campaign.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "lawfuzz/version.hpp"

namespace lawfuzz {

namespace fs = std::filesystem;

std::string resolve_path(const std::string& path, const std::string& anchor_file) {
  fs::path p(path);
  if (p.is_absolute() || fs::exists(p)) return p.string();
  fs::path anchored = fs::path(anchor_file).parent_path() / p;
  if (fs::exists(anchored)) return anchored.string();
  if (const char* dir = std::getenv("LAWFUZZ_MAP_DIR")) {
    fs::path env_based = fs::path(dir) / p;
    if (fs::exists(env_based)) return env_based.string();
  }
  return anchored.string();  // let the open fail with the anchored name
}

CampaignConfig load_campaign_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read campaign config '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("campaign config '" + path + "': " + e.what());
  }
  CampaignConfig cfg;
  cfg.spec_path = resolve_path(j.at("spec").get<std::string>(), path);
  cfg.template_path = resolve_path(j.at("template").get<std::string>(), path);
  cfg.driver_name = j.value("driver", std::string("aggressive"));
  cfg.engine = j.value("engine", std::string("ga"));
  cfg.falsify_mode = j.value("falsify", false);
  if (j.contains("fuzz")) {
    const auto& f = j["fuzz"];
    cfg.fuzz.population_size = f.value("population_size", 20);
    cfg.fuzz.max_generations = f.value("max_generations", 20);
    cfg.fuzz.crossover_prob = f.value("crossover_prob", 0.6);
    cfg.fuzz.mutation_prob = f.value("mutation_prob", 0.2);
    cfg.fuzz.gaussian_sigma_frac = f.value("gaussian_sigma_frac", 0.1);
    cfg.fuzz.rng_seed = f.value("rng_seed", std::uint64_t{1});
    cfg.fuzz.time_budget_secs = f.value("time_budget_secs", 0.0);
  }
  if (j.contains("sim")) {
    const auto& s = j["sim"];
    cfg.sim.steps = s.value("steps", 300);
    cfg.sim.dt = s.value("dt", 0.1);
    if (s.contains("map")) {
      cfg.sim.map_path = resolve_path(s["map"].get<std::string>(), path);
    }
    if (s.contains("light_cycle")) {
      cfg.sim.light_cycle.green = s["light_cycle"].value("green", 80);
      cfg.sim.light_cycle.yellow = s["light_cycle"].value("yellow", 30);
      cfg.sim.light_cycle.red = s["light_cycle"].value("red", 80);
    }
  }
  if (cfg.sim.map_path.empty()) {
    throw std::runtime_error("campaign config: sim.map is required");
  }
  if (cfg.engine != "ga" && cfg.engine != "random") {
    throw std::runtime_error("campaign config: engine must be \"ga\" or \"random\"");
  }
  if (cfg.sim.light_cycle.green < 1 || cfg.sim.light_cycle.yellow < 1 ||
      cfg.sim.light_cycle.red < 1) {
    throw std::runtime_error("campaign config: light cycle phases must be >= 1 step");
  }
  return cfg;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

nlohmann::ordered_json config_echo(const CampaignConfig& cfg) {
  nlohmann::ordered_json j;
  j["spec"] = cfg.spec_path;
  j["template"] = cfg.template_path;
  j["driver"] = cfg.driver_name;
  j["engine"] = cfg.engine;
  j["falsify"] = cfg.falsify_mode;
  j["fuzz"] = {{"population_size", cfg.fuzz.population_size},
               {"max_generations", cfg.fuzz.max_generations},
               {"crossover_prob", cfg.fuzz.crossover_prob},
               {"mutation_prob", cfg.fuzz.mutation_prob},
               {"gaussian_sigma_frac", cfg.fuzz.gaussian_sigma_frac},
               {"rng_seed", cfg.fuzz.rng_seed},
               {"time_budget_secs", cfg.fuzz.time_budget_secs}};
  j["sim"] = {{"steps", cfg.sim.steps},
              {"dt", cfg.sim.dt},
              {"map", cfg.sim.map_path},
              {"light_cycle",
               {{"green", cfg.sim.light_cycle.green},
                {"yellow", cfg.sim.light_cycle.yellow},
                {"red", cfg.sim.light_cycle.red}}}};
  return j;
}

std::string violation_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "violation_%03zu", index);
  return buf;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg, const std::string& out_dir,
                            std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();

  SpecFile spec = parse_spec(read_file(cfg.spec_path));
  Formula law = spec.law();
  auto driver = find_driver(cfg.driver_name);
  ScenarioTemplate tmpl = load_template(cfg.template_path);
  if (!tmpl.map_path.empty()) {
    tmpl.map_path = resolve_path(tmpl.map_path, cfg.template_path);
  }

  fs::create_directories(out_dir);

  FuzzOutcome outcome;
  if (cfg.falsify_mode) {
    outcome = falsify(law, *driver, cfg.fuzz, cfg.sim, tmpl);
  } else if (cfg.engine == "random") {
    outcome = random_search(law, *driver, cfg.fuzz, cfg.sim, tmpl);
  } else {
    outcome = fuzz(law, *driver, cfg.fuzz, cfg.sim, tmpl);
  }

  std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

  CampaignResult result;
  result.outcome = std::move(outcome);
  result.wall_clock_secs = wall.count();
  result.law_name = spec.law_name;
  const FuzzOutcome& oc = result.outcome;

  // Per-violation artifacts: genome JSON (with embedded run context) and the
  // realizing trace.
  int accidents = 0;
  nlohmann::ordered_json covered = nlohmann::ordered_json::array();
  for (const auto& entry : oc.gamma) {
    if (entry.flags.accident) ++accidents;
    const std::string stem = violation_stem(entry.covered.front().first);
    const std::string genome_file = stem + "_genome.json";
    const std::string trace_file = stem + "_trace.jsonl";

    nlohmann::ordered_json gj = nlohmann::ordered_json::parse(genome_to_json(entry.genome));
    nlohmann::ordered_json artifact;
    artifact["genome"] = std::move(gj);
    artifact["driver"] = cfg.driver_name;
    artifact["sim_seed"] = entry.sim_seed;
    artifact["sim"] = config_echo(cfg)["sim"];
    artifact["signal_keys"] = signal_keys(normalize(law));
    {
      std::ofstream os(fs::path(out_dir) / genome_file, std::ios::binary);
      os << artifact.dump(2) << '\n';
    }
    save_trace_jsonl(entry.trace, (fs::path(out_dir) / trace_file).string());

    for (const auto& [idx, rho_value] : entry.covered) {
      nlohmann::ordered_json cj;
      cj["index"] = idx;
      cj["formula"] = render_formula(oc.theta_set.elements[idx]);
      cj["robustness"] = rho_value;
      cj["generation"] = entry.generation;
      cj["genome_file"] = genome_file;
      cj["trace_file"] = trace_file;
      cj["accident"] = entry.flags.accident;
      cj["red_light_crossing"] = entry.flags.red_crossing;
      covered.push_back(std::move(cj));
    }
  }

  nlohmann::ordered_json report;
  report["tool"] = "lawfuzz";
  report["version"] = kVersion;
  report["law"] = result.law_name;
  report["driver"] = cfg.driver_name;
  report["engine"] = cfg.falsify_mode ? "falsify" : cfg.engine;
  report["rng_seed"] = cfg.fuzz.rng_seed;
  report["theta_size"] = oc.theta_set.size();
  report["covered_count"] = oc.cov.covered.size();
  report["coverage"] = oc.theta_set.size() == 0
                           ? 1.0
                           : static_cast<double>(oc.cov.covered.size()) /
                                 static_cast<double>(oc.theta_set.size());
  report["covered"] = std::move(covered);
  nlohmann::ordered_json curve = nlohmann::ordered_json::array();
  for (std::size_t g = 0; g < oc.coverage_curve.size(); ++g) {
    curve.push_back({{"generation", g}, {"covered", oc.coverage_curve[g]}});
  }
  report["coverage_curve"] = std::move(curve);
  report["accidents"] = accidents;
  report["simulations"] = oc.simulations;
  report["timed_out"] = oc.timed_out;
  report["config"] = config_echo(cfg);
  report["wall_clock_secs"] = result.wall_clock_secs;

  result.report_path = (fs::path(out_dir) / "report.json").string();
  {
    std::ofstream os(result.report_path, std::ios::binary);
    os << report.dump(2) << '\n';
  }
  {
    std::ofstream os(fs::path(out_dir) / "coverage_curve.csv", std::ios::binary);
    os << "generation,covered,coverage\n";
    for (std::size_t g = 0; g < oc.coverage_curve.size(); ++g) {
      double cov = oc.theta_set.size() == 0
                       ? 1.0
                       : static_cast<double>(oc.coverage_curve[g]) /
                             static_cast<double>(oc.theta_set.size());
      os << g << ',' << oc.coverage_curve[g] << ',' << cov << '\n';
    }
  }

  log << "law " << result.law_name << ": covered " << oc.cov.covered.size() << "/"
      << oc.theta_set.size() << " violation modes in " << oc.simulations
      << " simulations (" << (oc.timed_out ? "time budget hit" : "completed") << ")\n";
  return result;
}

}  // namespace lawfuzz
