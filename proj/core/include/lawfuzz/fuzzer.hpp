#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lawfuzz/formula.hpp"
#include "lawfuzz/microsim.hpp"
#include "lawfuzz/rng.hpp"
#include "lawfuzz/trace.hpp"
#include "lawfuzz/violation.hpp"

namespace lawfuzz {

struct FuzzConfig {
  int population_size = 20;  // >= 2, even
  int max_generations = 20;
  double crossover_prob = 0.6;
  double mutation_prob = 0.2;
  double gaussian_sigma_frac = 0.1;  // sigma as a fraction of each gene's range
  std::uint64_t rng_seed = 1;
  double time_budget_secs = 0;  // 0 = unlimited

  void validate() const;
};

// Per-element search state: best seed and best robustness for every
// still-uncovered violation mode.
struct FuzzState {
  struct SeedEntry {
    std::size_t element;
    ScenarioGenome genome;
    double robustness;
  };

  std::vector<std::size_t> theta_remaining;
  std::map<std::size_t, ScenarioGenome> seeds;
  std::map<std::size_t, double> robust;  // init -inf

  std::vector<SeedEntry> seeds_by_robustness() const;  // descending
};

struct FuzzOutcome {
  struct Entry {
    ScenarioGenome genome;
    Trace trace;
    // (element index, rho of that element on this trace), rho >= 0.
    std::vector<std::pair<std::size_t, double>> covered;
    int generation = 0;
    std::uint64_t sim_seed = 0;
    RunFlags flags;
  };

  ViolationSet theta_set;
  CoverageState cov;
  std::vector<Entry> gamma;
  std::vector<std::size_t> coverage_curve;  // cumulative covered per generation
  int generations_run = 0;
  bool timed_out = false;
  int simulations = 0;
};

// Genetic operators -----------------------------------------------------

ScenarioGenome random_genome(const ScenarioTemplate& tmpl, Rng& rng);

// Sorts seeds by robustness descending, then repeats n times: draw one entry
// uniformly from the top half and one from the whole list, keep the one with
// higher robustness.
std::vector<ScenarioGenome> select_parents(const FuzzState& state, int n, Rng& rng);

// Category-restricted exchange: speed, type, time, weather and
// light_phase_offset each swap with probability 1/2; positions never move.
std::pair<ScenarioGenome, ScenarioGenome> crossover(const ScenarioGenome& a,
                                                    const ScenarioGenome& b, Rng& rng);

// Gaussian perturbation (then clipping) of each continuous gene and uniform
// resampling of each discrete gene, each with probability mutation_prob.
// Lane IDs and final NPC waypoint speeds never change.
ScenarioGenome mutate(const ScenarioGenome& g, const ScenarioTemplate& tmpl,
                      const FuzzConfig& cfg, Rng& rng);

// The engines ------------------------------------------------------------

// Coverage-guided genetic search over the violation modes of `law`.
FuzzOutcome fuzz(const Formula& law, const Driver& driver, const FuzzConfig& cfg,
                 const SimConfig& sim, const ScenarioTemplate& tmpl);

// Random baseline: (max_generations + 1) * population_size independent draws,
// same evaluation, no evolution.
FuzzOutcome random_search(const Formula& law, const Driver& driver, const FuzzConfig& cfg,
                          const SimConfig& sim, const ScenarioTemplate& tmpl);

// Falsification mode: one pseudo-objective ~law; any reported entry's trace
// has rho(law) <= 0.
FuzzOutcome falsify(const Formula& law, const Driver& driver, const FuzzConfig& cfg,
                    const SimConfig& sim, const ScenarioTemplate& tmpl);

}  // namespace lawfuzz
