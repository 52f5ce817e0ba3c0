#include "lawfuzz/fuzzer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "lawfuzz/robustness.hpp"
#include "lawfuzz/signal_eval.hpp"

namespace lawfuzz {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void FuzzConfig::validate() const {
  if (population_size < 2 || population_size % 2 != 0) {
    throw std::invalid_argument("population_size must be even and >= 2");
  }
  if (max_generations < 1) throw std::invalid_argument("max_generations must be >= 1");
  for (double p : {crossover_prob, mutation_prob}) {
    if (p < 0 || p > 1) throw std::invalid_argument("probabilities must be in [0,1]");
  }
  if (gaussian_sigma_frac <= 0) {
    throw std::invalid_argument("gaussian_sigma_frac must be positive");
  }
}

std::vector<FuzzState::SeedEntry> FuzzState::seeds_by_robustness() const {
  std::vector<SeedEntry> out;
  for (const auto& [idx, genome] : seeds) {
    out.push_back({idx, genome, robust.at(idx)});
  }
  std::sort(out.begin(), out.end(), [](const SeedEntry& a, const SeedEntry& b) {
    if (a.robustness != b.robustness) return a.robustness > b.robustness;
    return a.element < b.element;
  });
  return out;
}

ScenarioGenome random_genome(const ScenarioTemplate& tmpl, Rng& rng) {
  ScenarioGenome g;
  g.ego_start.lane_id = tmpl.ego_lane;
  g.ego_start.offset_m = rng.uniform(tmpl.ego_offset.lo, tmpl.ego_offset.hi);
  g.ego_direction = tmpl.ego_direction;
  for (const auto& nt : tmpl.npcs) {
    NpcTrack track;
    track.type = npc_type_from_string(nt.types[rng.below(nt.types.size())]);
    double prev_offset = -1e18;
    for (std::size_t k = 0; k < nt.waypoints.size(); ++k) {
      const auto& wt = nt.waypoints[k];
      Waypoint wp;
      wp.lane_id = wt.lane_id;
      wp.offset_m = rng.uniform(wt.offset.lo, wt.offset.hi);
      if (k > 0 && wp.lane_id == track.waypoints[k - 1].lane_id) {
        wp.offset_m = std::max(wp.offset_m, prev_offset);
      }
      prev_offset = wp.offset_m;
      bool last = k + 1 == nt.waypoints.size();
      wp.speed_kmh = last ? 0.0 : rng.uniform(wt.speed.lo, wt.speed.hi);
      track.waypoints.push_back(wp);
    }
    g.npc_tracks.push_back(std::move(track));
  }
  for (const auto& pt : tmpl.pedestrians) {
    PedestrianTrack track;
    track.type = pt.types[rng.below(pt.types.size())];
    for (const auto& q : pt.points) {
      PedPoint p;
      p.position = {rng.uniform(q.x.lo, q.x.hi), rng.uniform(q.y.lo, q.y.hi)};
      p.speed_mps = rng.uniform(q.speed.lo, q.speed.hi);
      track.points.push_back(p);
    }
    g.pedestrian_tracks.push_back(std::move(track));
  }
  for (const auto& ot : tmpl.obstacles) {
    ObstacleSpec ob;
    ob.position = {rng.uniform(ot.x.lo, ot.x.hi), rng.uniform(ot.y.lo, ot.y.hi)};
    ob.type = ot.types[rng.below(ot.types.size())];
    g.obstacles.push_back(ob);
  }
  g.time_of_day_min = rng.uniform(tmpl.time_of_day.lo, tmpl.time_of_day.hi);
  for (const auto& key : tmpl.weather_keys) g.weather[key] = rng.uniform();
  g.light_phase_offset = static_cast<std::int64_t>(
      rng.uniform(tmpl.light_phase_offset.lo, tmpl.light_phase_offset.hi + 1));
  return g;
}

std::vector<ScenarioGenome> select_parents(const FuzzState& state, int n, Rng& rng) {
  auto entries = state.seeds_by_robustness();
  if (entries.empty()) throw std::invalid_argument("select_parents: no seeds");
  std::size_t top = (entries.size() + 1) / 2;
  std::vector<ScenarioGenome> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto& a = entries[rng.below(top)];
    const auto& b = entries[rng.below(entries.size())];
    out.push_back(a.robustness >= b.robustness ? a.genome : b.genome);
  }
  return out;
}

std::pair<ScenarioGenome, ScenarioGenome> crossover(const ScenarioGenome& a,
                                                    const ScenarioGenome& b, Rng& rng) {
  if (!same_template_shape(a, b)) {
    throw std::invalid_argument("crossover: genomes from different templates");
  }
  ScenarioGenome x = a;
  ScenarioGenome y = b;
  if (rng.chance(0.5)) {  // speed category
    for (std::size_t i = 0; i < x.npc_tracks.size(); ++i) {
      for (std::size_t k = 0; k < x.npc_tracks[i].waypoints.size(); ++k) {
        std::swap(x.npc_tracks[i].waypoints[k].speed_kmh,
                  y.npc_tracks[i].waypoints[k].speed_kmh);
      }
    }
    for (std::size_t i = 0; i < x.pedestrian_tracks.size(); ++i) {
      for (std::size_t k = 0; k < x.pedestrian_tracks[i].points.size(); ++k) {
        std::swap(x.pedestrian_tracks[i].points[k].speed_mps,
                  y.pedestrian_tracks[i].points[k].speed_mps);
      }
    }
  }
  if (rng.chance(0.5)) {  // type category
    for (std::size_t i = 0; i < x.npc_tracks.size(); ++i) {
      std::swap(x.npc_tracks[i].type, y.npc_tracks[i].type);
    }
    for (std::size_t i = 0; i < x.pedestrian_tracks.size(); ++i) {
      std::swap(x.pedestrian_tracks[i].type, y.pedestrian_tracks[i].type);
    }
    for (std::size_t i = 0; i < x.obstacles.size(); ++i) {
      std::swap(x.obstacles[i].type, y.obstacles[i].type);
    }
  }
  if (rng.chance(0.5)) std::swap(x.time_of_day_min, y.time_of_day_min);  // time
  if (rng.chance(0.5)) std::swap(x.weather, y.weather);                  // weather
  if (rng.chance(0.5)) std::swap(x.light_phase_offset, y.light_phase_offset);
  return {std::move(x), std::move(y)};
}

namespace {

double perturb(double value, const Range& range, double sigma_frac, Rng& rng) {
  double sigma = sigma_frac * std::max(range.width(), 1e-9);
  return range.clamp(value + rng.gaussian() * sigma);
}

}  // namespace

ScenarioGenome mutate(const ScenarioGenome& g, const ScenarioTemplate& tmpl,
                      const FuzzConfig& cfg, Rng& rng) {
  const double mp = cfg.mutation_prob;
  const double sf = cfg.gaussian_sigma_frac;
  ScenarioGenome out = g;
  if (rng.chance(mp)) {
    out.ego_start.offset_m = perturb(out.ego_start.offset_m, tmpl.ego_offset, sf, rng);
  }
  for (std::size_t i = 0; i < out.npc_tracks.size(); ++i) {
    auto& track = out.npc_tracks[i];
    const auto& nt = tmpl.npcs.at(i);
    if (rng.chance(mp)) {
      track.type = npc_type_from_string(nt.types[rng.below(nt.types.size())]);
    }
    double prev = -1e18;
    for (std::size_t k = 0; k < track.waypoints.size(); ++k) {
      auto& wp = track.waypoints[k];
      const auto& wt = nt.waypoints.at(k);
      if (rng.chance(mp)) wp.offset_m = perturb(wp.offset_m, wt.offset, sf, rng);
      if (k > 0 && wp.lane_id == track.waypoints[k - 1].lane_id) {
        wp.offset_m = std::max(wp.offset_m, prev);
      }
      prev = wp.offset_m;
      bool last = k + 1 == track.waypoints.size();
      if (!last && rng.chance(mp)) wp.speed_kmh = perturb(wp.speed_kmh, wt.speed, sf, rng);
    }
  }
  for (std::size_t i = 0; i < out.pedestrian_tracks.size(); ++i) {
    auto& track = out.pedestrian_tracks[i];
    const auto& pt = tmpl.pedestrians.at(i);
    if (rng.chance(mp)) track.type = pt.types[rng.below(pt.types.size())];
    for (std::size_t k = 0; k < track.points.size(); ++k) {
      auto& p = track.points[k];
      const auto& q = pt.points.at(k);
      if (rng.chance(mp)) p.position.x = perturb(p.position.x, q.x, sf, rng);
      if (rng.chance(mp)) p.position.y = perturb(p.position.y, q.y, sf, rng);
      if (rng.chance(mp)) p.speed_mps = perturb(p.speed_mps, q.speed, sf, rng);
    }
  }
  for (std::size_t i = 0; i < out.obstacles.size(); ++i) {
    auto& ob = out.obstacles[i];
    const auto& ot = tmpl.obstacles.at(i);
    if (rng.chance(mp)) ob.position.x = perturb(ob.position.x, ot.x, sf, rng);
    if (rng.chance(mp)) ob.position.y = perturb(ob.position.y, ot.y, sf, rng);
    if (rng.chance(mp)) ob.type = ot.types[rng.below(ot.types.size())];
  }
  if (rng.chance(mp)) {
    out.time_of_day_min = perturb(out.time_of_day_min, tmpl.time_of_day, sf, rng);
  }
  for (auto& [key, degree] : out.weather) {
    if (rng.chance(mp)) degree = perturb(degree, Range{0, 1}, sf, rng);
  }
  if (rng.chance(mp)) {
    double v = perturb(static_cast<double>(out.light_phase_offset),
                       tmpl.light_phase_offset, sf, rng);
    out.light_phase_offset = static_cast<std::int64_t>(std::llround(v));
  }
  return out;
}

namespace {

struct Engine {
  const Driver& driver;
  const FuzzConfig& cfg;
  const SimConfig& sim;
  const ScenarioTemplate& tmpl;
  MapPtr map;
  std::set<std::string> keys;

  FuzzOutcome run(ViolationSet theta_set, bool evolve) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
      if (cfg.time_budget_secs <= 0) return false;
      std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t_start;
      return elapsed.count() > cfg.time_budget_secs;
    };

    FuzzOutcome out;
    out.theta_set = std::move(theta_set);
    out.cov.total = out.theta_set.size();
    if (out.theta_set.elements.empty()) {
      throw std::invalid_argument("fuzz: law has an empty violation set");
    }

    FuzzState state;
    for (std::size_t i = 0; i < out.theta_set.size(); ++i) {
      state.theta_remaining.push_back(i);
      state.robust[i] = kNegInf;
    }

    Rng master(cfg.rng_seed);
    const int n = cfg.population_size;
    std::vector<ScenarioGenome> population;
    for (int i = 0; i < n; ++i) population.push_back(random_genome(tmpl, master));

    for (int gen = 0; gen <= cfg.max_generations; ++gen) {
      out.generations_run = gen + 1;
      // Per-member simulation seeds drawn up front so member evaluation order
      // cannot change results.
      std::vector<std::uint64_t> member_seeds;
      for (int i = 0; i < n; ++i) member_seeds.push_back(master.bits());

      for (int i = 0; i < n && !state.theta_remaining.empty(); ++i) {
        if (out_of_time()) {
          out.timed_out = true;
          break;
        }
        Trace trace;
        std::vector<WorldState> states;
        try {
          states = simulate(population[i], driver, sim, map, member_seeds[i]);
          trace = trace_from_states(states, keys);
        } catch (const std::exception& e) {
          std::cerr << "fuzz: member aborted (" << e.what() << "); replaced\n";
          population[i] = random_genome(tmpl, master);
          continue;
        }
        ++out.simulations;

        FuzzOutcome::Entry entry;
        std::vector<std::size_t> still_remaining;
        for (std::size_t idx : state.theta_remaining) {
          double r = rho(out.theta_set.elements[idx], trace, 0);
          if (r >= 0) {
            entry.covered.emplace_back(idx, r);
            out.cov.covered.insert(idx);
            state.seeds.erase(idx);
            state.robust.erase(idx);
          } else {
            still_remaining.push_back(idx);
            if (r > state.robust[idx]) {
              state.robust[idx] = r;
              state.seeds[idx] = population[i];
            }
          }
        }
        state.theta_remaining = std::move(still_remaining);
        if (!entry.covered.empty()) {
          entry.genome = population[i];
          entry.trace = std::move(trace);
          entry.generation = gen;
          entry.sim_seed = member_seeds[i];
          entry.flags = analyze_run(states);
          out.gamma.push_back(std::move(entry));
        }
      }
      out.coverage_curve.push_back(out.cov.covered.size());
      if (state.theta_remaining.empty() || out.timed_out || gen == cfg.max_generations) {
        break;
      }

      if (evolve) {
        int from_seeds = static_cast<int>(std::min<std::size_t>(state.seeds.size(),
                                                                static_cast<std::size_t>(n)));
        std::vector<ScenarioGenome> parents;
        if (from_seeds > 0) parents = select_parents(state, from_seeds, master);
        while (static_cast<int>(parents.size()) < n) {
          parents.push_back(random_genome(tmpl, master));
        }
        for (int k = 0; k + 1 < n; k += 2) {
          if (master.chance(cfg.crossover_prob)) {
            auto [c1, c2] = crossover(parents[k], parents[k + 1], master);
            parents[k] = std::move(c1);
            parents[k + 1] = std::move(c2);
          }
        }
        for (auto& p : parents) p = mutate(p, tmpl, cfg, master);
        population = std::move(parents);
      } else {
        population.clear();
        for (int i = 0; i < n; ++i) population.push_back(random_genome(tmpl, master));
      }
    }
    return out;
  }
};

Engine make_engine(const Driver& driver, const FuzzConfig& cfg, const SimConfig& sim,
                   const ScenarioTemplate& tmpl, const Formula& law) {
  Engine e{driver, cfg, sim, tmpl, load_map(sim.map_path), {}};
  for (const auto& key : signal_keys(law)) e.keys.insert(key);
  return e;
}

}  // namespace

FuzzOutcome fuzz(const Formula& law, const Driver& driver, const FuzzConfig& cfg,
                 const SimConfig& sim, const ScenarioTemplate& tmpl) {
  Formula core = normalize(law);
  Engine e = make_engine(driver, cfg, sim, tmpl, core);
  return e.run(theta(core), /*evolve=*/true);
}

FuzzOutcome random_search(const Formula& law, const Driver& driver, const FuzzConfig& cfg,
                          const SimConfig& sim, const ScenarioTemplate& tmpl) {
  Formula core = normalize(law);
  Engine e = make_engine(driver, cfg, sim, tmpl, core);
  return e.run(theta(core), /*evolve=*/false);
}

FuzzOutcome falsify(const Formula& law, const Driver& driver, const FuzzConfig& cfg,
                    const SimConfig& sim, const ScenarioTemplate& tmpl) {
  Formula core = normalize(law);
  Engine e = make_engine(driver, cfg, sim, tmpl, core);
  ViolationSet pseudo;
  pseudo.origin = core;
  pseudo.elements.push_back(normalize(make_not(core)));
  return e.run(std::move(pseudo), /*evolve=*/true);
}

}  // namespace lawfuzz
