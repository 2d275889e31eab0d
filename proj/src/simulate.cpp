#include "epinet/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "epinet/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace epinet {

std::string to_string(Model model) { return model == Model::SIS ? "SIS" : "SIR"; }

Model model_from_string(const std::string& name) {
  if (name == "SIS" || name == "sis") return Model::SIS;
  if (name == "SIR" || name == "sir") return Model::SIR;
  throw std::invalid_argument("unknown model: " + name);
}

void Horizon::validate() const {
  if (!(max_time > 0.0)) throw std::invalid_argument("horizon: max_time must be > 0");
  if (max_events == 0) throw std::invalid_argument("horizon: max_events must be >= 1");
}

void SimParams::validate(const Graph& g) const {
  if (!(beta > 0.0)) throw std::invalid_argument("simulate: beta must be > 0");
  horizon.validate();
  strategy.validate();
  for (const int v : initial_infected) {
    if (v < 0 || v >= g.node_count()) {
      throw std::invalid_argument("simulate: initial node out of range: " + std::to_string(v));
    }
  }
}

void EpidemicState::init(const Graph& g, std::span<const int> initial_infected) {
  const size_t n = static_cast<size_t>(g.node_count());
  compartments.assign(n, Compartment::Susceptible);
  infected.clear();
  infected_pos.assign(n, -1);
  infected_count = 0;
  edge_pressure.assign(n, 0);
  susceptible_pressure = 0;
  time = 0.0;
  external_rates.assign(n, 0.0);
  peak_infected = 0;
  resistant_count = 0;
  for (const int v : initial_infected) {
    if (compartments[static_cast<size_t>(v)] == Compartment::Susceptible) infect(g, v);
  }
  peak_infected = infected_count;
}

void EpidemicState::infect(const Graph& g, int v) {
  assert(compartments[static_cast<size_t>(v)] == Compartment::Susceptible);
  compartments[static_cast<size_t>(v)] = Compartment::Infected;
  infected_pos[static_cast<size_t>(v)] = static_cast<int32_t>(infected.size());
  infected.push_back(v);
  ++infected_count;
  susceptible_pressure -= edge_pressure[static_cast<size_t>(v)];
  for (const int w : g.neighbors(v)) {
    ++edge_pressure[static_cast<size_t>(w)];
    if (compartments[static_cast<size_t>(w)] == Compartment::Susceptible) ++susceptible_pressure;
  }
  peak_infected = std::max(peak_infected, infected_count);
}

void EpidemicState::recover(const Graph& g, int v, Model model) {
  assert(compartments[static_cast<size_t>(v)] == Compartment::Infected);
  const int32_t slot = infected_pos[static_cast<size_t>(v)];
  infected[static_cast<size_t>(slot)] = infected.back();
  infected_pos[static_cast<size_t>(infected.back())] = slot;
  infected.pop_back();
  infected_pos[static_cast<size_t>(v)] = -1;
  --infected_count;
  for (const int w : g.neighbors(v)) {
    --edge_pressure[static_cast<size_t>(w)];
    if (compartments[static_cast<size_t>(w)] == Compartment::Susceptible) --susceptible_pressure;
  }
  if (model == Model::SIS) {
    compartments[static_cast<size_t>(v)] = Compartment::Susceptible;
    susceptible_pressure += edge_pressure[static_cast<size_t>(v)];
  } else {
    compartments[static_cast<size_t>(v)] = Compartment::Resistant;
    ++resistant_count;
  }
}

bool audit_state(const EpidemicState& state, const Graph& g) {
  const int n = g.node_count();
  if (static_cast<int>(state.compartments.size()) != n) return false;
  int infected_count = 0;
  int resistant = 0;
  long long pressure_sum = 0;
  for (int v = 0; v < n; ++v) {
    int pressure = 0;
    for (const int w : g.neighbors(v)) {
      if (state.compartments[static_cast<size_t>(w)] == Compartment::Infected) ++pressure;
    }
    if (pressure != state.edge_pressure[static_cast<size_t>(v)]) return false;
    switch (state.compartments[static_cast<size_t>(v)]) {
      case Compartment::Infected:
        ++infected_count;
        if (state.infected_pos[static_cast<size_t>(v)] < 0) return false;
        if (state.infected[static_cast<size_t>(state.infected_pos[static_cast<size_t>(v)])] != v) return false;
        break;
      case Compartment::Susceptible:
        pressure_sum += pressure;
        if (state.infected_pos[static_cast<size_t>(v)] != -1) return false;
        break;
      case Compartment::Resistant:
        ++resistant;
        if (state.infected_pos[static_cast<size_t>(v)] != -1) return false;
        break;
    }
  }
  return infected_count == state.infected_count &&
         infected_count == static_cast<int>(state.infected.size()) &&
         pressure_sum == state.susceptible_pressure &&
         resistant == state.resistant_count;
}

namespace {

double external_total_on_susceptible(const EpidemicState& state) {
  double total = 0.0;
  const size_t n = state.compartments.size();
  for (size_t v = 0; v < n; ++v) {
    if (state.compartments[v] == Compartment::Susceptible) total += state.external_rates[v];
  }
  return total;
}

// Picks the susceptible node whose cumulative edge pressure (in index order)
// first exceeds `target`, measured in pressure units.
int pick_by_pressure(const EpidemicState& state, double target) {
  const size_t n = state.compartments.size();
  long long acc = 0;
  int last = -1;
  for (size_t v = 0; v < n; ++v) {
    if (state.compartments[v] != Compartment::Susceptible) continue;
    if (state.edge_pressure[v] == 0) continue;
    acc += state.edge_pressure[v];
    last = static_cast<int>(v);
    if (static_cast<double>(acc) > target) return last;
  }
  return last;  // rounding fell off the end; the last positive candidate is valid
}

int pick_by_external(const EpidemicState& state, double target) {
  const size_t n = state.compartments.size();
  double acc = 0.0;
  int last = -1;
  for (size_t v = 0; v < n; ++v) {
    if (state.compartments[v] != Compartment::Susceptible) continue;
    if (state.external_rates[v] <= 0.0) continue;
    acc += state.external_rates[v];
    last = static_cast<int>(v);
    if (acc > target) return last;
  }
  return last;
}

}  // namespace

RunOutcome simulate(const Graph& g, const SimParams& params, uint64_t seed,
                    std::ostream* trace) {
  params.validate(g);
  RunOutcome out;
  out.seed = seed;
  if (params.initial_infected.empty()) return out;

  EpidemicState state;
  state.init(g, params.initial_infected);
  StrategyRuntime strategy(params.strategy, g, params.beta, seed);
  RngStream rng(derive_seed(seed, 0, kStreamEvents));
  const double beta = params.beta;

  while (state.infected_count > 0) {
    strategy.fill_rates(state.compartments, state.infected_count, state.external_rates);
    const double intrinsic = beta * static_cast<double>(state.susceptible_pressure);
    const double external = external_total_on_susceptible(state);
    const double total = intrinsic + state.infected_count + external;

    const double wait = rng.exponential(total);
    if (state.time + wait > params.horizon.max_time) {
      state.time = params.horizon.max_time;
      out.censored = true;
      break;
    }
    state.time += wait;

    const double x = rng.uniform01() * total;
    const char* kind;
    int node;
    if (x < intrinsic) {
      node = pick_by_pressure(state, x / beta);
      state.infect(g, node);
      kind = "INTRINSIC";
    } else if (x < intrinsic + state.infected_count) {
      size_t idx = static_cast<size_t>(x - intrinsic);
      if (idx >= state.infected.size()) idx = state.infected.size() - 1;
      node = state.infected[idx];
      state.recover(g, node, params.model);
      kind = "RECOVER";
    } else {
      node = pick_by_external(state, x - intrinsic - state.infected_count);
      state.infect(g, node);
      kind = "EXTERNAL";
    }
    if (trace) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", state.time);
      *trace << buf << ' ' << kind << ' ' << node << "\n";
    }
    ++out.event_count;
    if (params.audit_every > 0 && out.event_count % params.audit_every == 0 &&
        !audit_state(state, g)) {
      throw std::logic_error("simulate: incremental bookkeeping failed audit");
    }
    if (out.event_count >= params.horizon.max_events && state.infected_count > 0) {
      out.censored = true;
      break;
    }
  }

  out.extinction_time = state.time;
  out.eventual_infected =
      params.model == Model::SIR ? state.resistant_count : state.peak_infected;
  return out;
}

std::vector<RunOutcome> simulate_batch_serial(const Graph& g, const SimParams& params,
                                              int replications, uint64_t base_seed,
                                              const InitialSampler& initial) {
  if (replications < 1) throw std::invalid_argument("batch: replications must be >= 1");
  params.validate(g);
  std::vector<RunOutcome> out(static_cast<size_t>(replications));
  for (int k = 0; k < replications; ++k) {
    try {
      const uint64_t run_seed = derive_seed(base_seed, static_cast<uint64_t>(k));
      if (initial) {
        SimParams local = params;
        local.initial_infected = initial(k, run_seed);
        out[static_cast<size_t>(k)] = simulate(g, local, run_seed);
      } else {
        out[static_cast<size_t>(k)] = simulate(g, params, run_seed);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

std::vector<RunOutcome> simulate_batch(const Graph& g, const SimParams& params,
                                       int replications, uint64_t base_seed,
                                       int threads, const InitialSampler& initial) {
  if (replications < 1) throw std::invalid_argument("batch: replications must be >= 1");
  params.validate(g);
#ifdef _OPENMP
  if (threads == 0) threads = omp_get_max_threads();
#endif
  if (threads <= 1) return simulate_batch_serial(g, params, replications, base_seed, initial);

  std::vector<RunOutcome> out(static_cast<size_t>(replications));
  // Exceptions cannot unwind out of the parallel region; carry the first one
  // (with its replication index) across it instead.
  std::string error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (int k = 0; k < replications; ++k) {
    try {
      const uint64_t run_seed = derive_seed(base_seed, static_cast<uint64_t>(k));
      if (initial) {
        SimParams local = params;
        local.initial_infected = initial(k, run_seed);
        out[static_cast<size_t>(k)] = simulate(g, local, run_seed);
      } else {
        out[static_cast<size_t>(k)] = simulate(g, params, run_seed);
      }
    } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (error.empty()) {
        error = "replication " + std::to_string(k) + ": " + e.what();
      }
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
  return out;
}

std::pair<RunOutcome, RunOutcome> coupled_sis_sir(const Graph& g, const SimParams& params,
                                                  uint64_t seed) {
  params.validate(g);
  RunOutcome sis_out, sir_out;
  sis_out.seed = sir_out.seed = seed;
  if (params.initial_infected.empty()) return {sis_out, sir_out};

  EpidemicState sis, sir;
  sis.init(g, params.initial_infected);
  sir.init(g, params.initial_infected);
  StrategyRuntime strategy(params.strategy, g, params.beta, seed);
  RngStream rng(derive_seed(seed, 0, kStreamEvents));
  const double beta = params.beta;

  // Attempt clocks live on directed edges out of SIS-infected nodes. Because
  // the SIR infected set stays inside the SIS one, those clocks cover every
  // SIR infection channel as well; attempts that change nothing in one chain
  // are harmless thinning there.
  long long deg_sum = 0;  // total degree of SIS-infected nodes
  for (const int v : sis.infected) deg_sum += g.degree(v);

  double time = 0.0;
  bool sir_done = false;
  uint64_t steps = 0;  // master-clock transitions, for the event cap

  while (sis.infected_count > 0) {
    strategy.fill_rates(sis.compartments, sis.infected_count, sis.external_rates);
    double external_all = 0.0;
    for (const double r : sis.external_rates) external_all += r;
    const double attempts = beta * static_cast<double>(deg_sum);
    const double total = attempts + sis.infected_count + external_all;

    const double wait = rng.exponential(total);
    if (time + wait > params.horizon.max_time) {
      time = params.horizon.max_time;
      sis_out.censored = true;
      if (!sir_done) sir_out.censored = true;
      break;
    }
    time += wait;

    const double x = rng.uniform01() * total;
    if (x < attempts) {
      // source i ~ degree among SIS-infected, then a uniform neighbor of i
      const double target = x / beta;
      long long acc = 0;
      int source = sis.infected.back();
      for (const int v : sis.infected) {
        acc += g.degree(v);
        if (static_cast<double>(acc) > target) {
          source = v;
          break;
        }
      }
      const auto nb = g.neighbors(source);
      const int dest = nb[static_cast<size_t>(rng.below(nb.size()))];
      if (sis.compartments[static_cast<size_t>(dest)] == Compartment::Susceptible) {
        sis.infect(g, dest);
        deg_sum += g.degree(dest);
        ++sis_out.event_count;
      }
      if (!sir_done &&
          sir.compartments[static_cast<size_t>(source)] == Compartment::Infected &&
          sir.compartments[static_cast<size_t>(dest)] == Compartment::Susceptible) {
        assert(sis.compartments[static_cast<size_t>(dest)] == Compartment::Infected);
        sir.infect(g, dest);
        ++sir_out.event_count;
      }
    } else if (x < attempts + sis.infected_count) {
      size_t idx = static_cast<size_t>(x - attempts);
      if (idx >= sis.infected.size()) idx = sis.infected.size() - 1;
      const int v = sis.infected[idx];
      sis.recover(g, v, Model::SIS);
      deg_sum -= g.degree(v);
      ++sis_out.event_count;
      if (!sir_done && sir.compartments[static_cast<size_t>(v)] == Compartment::Infected) {
        sir.recover(g, v, Model::SIR);
        ++sir_out.event_count;
        if (sir.infected_count == 0) {
          sir_done = true;
          sir_out.extinction_time = time;
          sir_out.eventual_infected = sir.resistant_count;
        }
      }
    } else {
      double target = x - attempts - sis.infected_count;
      double acc = 0.0;
      int dest = -1;
      const size_t n = sis.external_rates.size();
      for (size_t v = 0; v < n; ++v) {
        if (sis.external_rates[v] <= 0.0) continue;
        acc += sis.external_rates[v];
        dest = static_cast<int>(v);
        if (acc > target) break;
      }
      if (dest >= 0) {
        if (sis.compartments[static_cast<size_t>(dest)] == Compartment::Susceptible) {
          sis.infect(g, dest);
          deg_sum += g.degree(dest);
          ++sis_out.event_count;
        }
        if (!sir_done &&
            sir.compartments[static_cast<size_t>(dest)] == Compartment::Susceptible) {
          assert(sis.compartments[static_cast<size_t>(dest)] == Compartment::Infected);
          sir.infect(g, dest);
          ++sir_out.event_count;
        }
      }
    }

    ++steps;
    if (steps >= params.horizon.max_events && sis.infected_count > 0) {
      sis_out.censored = true;
      if (!sir_done) sir_out.censored = true;
      break;
    }
  }

  assert(sir_done || sir.infected_count <= sis.infected_count);
  sis_out.extinction_time = time;
  sis_out.eventual_infected = sis.peak_infected;
  if (!sir_done && !sir_out.censored) {
    // The SIS chain absorbed; the SIR set is contained in it, so it absorbed
    // no later than this same instant.
    sir_out.extinction_time = time;
    sir_out.eventual_infected = sir.resistant_count;
  } else if (sir_out.censored) {
    sir_out.extinction_time = time;
    sir_out.eventual_infected = sir.resistant_count;
  }
  return {sis_out, sir_out};
}

void write_outcomes_csv(std::ostream& out, std::span<const RunOutcome> outcomes, Model model) {
  out << "seed,model,extinction_time,censored,eventual_infected,event_count\n";
  const std::string name = to_string(model);
  char buf[32];
  for (const RunOutcome& r : outcomes) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.extinction_time);
    out << r.seed << ',' << name << ',' << buf << ',' << (r.censored ? 1 : 0) << ','
        << r.eventual_infected << ',' << r.event_count << "\n";
  }
}

}  // namespace epinet
