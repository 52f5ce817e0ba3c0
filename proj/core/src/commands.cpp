#include "lawfuzz/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lawfuzz/campaign.hpp"
#include "lawfuzz/microsim.hpp"
#include "lawfuzz/parser.hpp"
#include "lawfuzz/robustness.hpp"
#include "lawfuzz/signal_eval.hpp"
#include "lawfuzz/trace.hpp"
#include "lawfuzz/violation.hpp"

namespace lawfuzz {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int cmd_check(const std::string& spec_path, const std::string& trace_path,
              std::ostream& out, std::ostream& err) {
  try {
    SpecFile spec = parse_spec(read_file(spec_path));
    Trace trace = load_trace_jsonl(trace_path);
    double r = rho(normalize(spec.law()), trace, 0);
    out << spec.law_name << " rho = " << r << "\n";
    return r >= 0 ? kExitOk : kExitViolated;
  } catch (const std::exception& e) {
    err << "check: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_theta(const std::string& spec_path, std::ostream& out, std::ostream& err) {
  try {
    SpecFile spec = parse_spec(read_file(spec_path));
    ViolationSet set = theta(normalize(spec.law()));
    nlohmann::ordered_json j;
    j["law"] = spec.law_name;
    j["size"] = set.size();
    auto elements = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < set.elements.size(); ++i) {
      elements.push_back({{"index", i}, {"formula", render_formula(set.elements[i])}});
    }
    j["elements"] = std::move(elements);
    out << j.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "theta: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_fuzz(const std::string& config_path, const std::string& out_dir,
             const FuzzOverrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    CampaignConfig cfg = load_campaign_config(config_path);
    if (overrides.seed) cfg.fuzz.rng_seed = *overrides.seed;
    if (overrides.driver) cfg.driver_name = *overrides.driver;
    if (overrides.time_budget_secs) cfg.fuzz.time_budget_secs = *overrides.time_budget_secs;
    if (overrides.baseline) {
      if (*overrides.baseline != "random" && *overrides.baseline != "ga") {
        throw std::runtime_error("--baseline must be 'random' or 'ga'");
      }
      cfg.engine = *overrides.baseline;
    }
    if (overrides.falsify) cfg.falsify_mode = true;
    CampaignResult result = run_campaign(cfg, out_dir, out);
    out << "report: " << result.report_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "fuzz: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_replay(const std::string& genome_path, const std::string& out_trace_path,
               const ReplayOverrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    nlohmann::json artifact = nlohmann::json::parse(read_file(genome_path));
    if (!artifact.contains("genome") || !artifact.contains("sim")) {
      throw std::runtime_error("not a genome artifact (missing genome/sim)");
    }
    ScenarioGenome genome = genome_from_json(artifact["genome"].dump());
    const auto& sj = artifact["sim"];
    SimConfig sim;
    sim.steps = sj.at("steps").get<int>();
    sim.dt = sj.at("dt").get<double>();
    sim.map_path = resolve_path(sj.at("map").get<std::string>(), genome_path);
    sim.light_cycle.green = sj.at("light_cycle").value("green", 80);
    sim.light_cycle.yellow = sj.at("light_cycle").value("yellow", 30);
    sim.light_cycle.red = sj.at("light_cycle").value("red", 80);

    if (overrides.dt && *overrides.dt != sim.dt) {
      throw std::runtime_error("dt mismatch with recorded run config; refusing to replay");
    }
    if (overrides.steps && *overrides.steps != sim.steps) {
      throw std::runtime_error("steps mismatch with recorded run config; refusing to replay");
    }

    std::string driver_name = overrides.driver.value_or(
        artifact.value("driver", std::string("lawful")));
    auto driver = find_driver(driver_name);
    std::uint64_t sim_seed = artifact.value("sim_seed", std::uint64_t{0});

    std::set<std::string> keys;
    for (const auto& k : artifact.value("signal_keys", nlohmann::json::array())) {
      keys.insert(k.get<std::string>());
    }
    if (keys.empty()) keys = {"speed"};

    auto states = simulate(genome, *driver, sim, sim_seed);
    Trace trace = trace_from_states(states, keys);
    save_trace_jsonl(trace, out_trace_path);
    out << "replayed " << states.size() << " steps with driver '" << driver_name
        << "' -> " << out_trace_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "replay: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace lawfuzz
