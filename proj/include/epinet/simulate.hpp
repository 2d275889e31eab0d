#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/strategy.hpp"

namespace epinet {

enum class Model { SIS, SIR };

std::string to_string(Model model);
Model model_from_string(const std::string& name);

// Run limits. Time is in cure-rate units (recovery rate 1). A run stopped by
// either limit is censored; its extinction_time is then only a lower bound.
struct Horizon {
  double max_time = std::numeric_limits<double>::infinity();
  uint64_t max_events = std::numeric_limits<uint64_t>::max();

  void validate() const;
};

// Full dynamic state of one trajectory. edge_pressure[i] counts infected
// neighbors of i and is maintained incrementally for every node;
// susceptible_pressure is its sum over currently susceptible nodes.
struct EpidemicState {
  std::vector<Compartment> compartments;
  std::vector<int32_t> infected;      // unordered list of infected nodes
  std::vector<int32_t> infected_pos;  // node -> slot in `infected`, -1 if absent
  int infected_count = 0;
  std::vector<int32_t> edge_pressure;
  long long susceptible_pressure = 0;
  double time = 0.0;
  std::vector<double> external_rates;
  int peak_infected = 0;
  int resistant_count = 0;

  void init(const Graph& g, std::span<const int> initial_infected);
  void infect(const Graph& g, int v);
  void recover(const Graph& g, int v, Model model);
};

// Recomputes the incremental bookkeeping from scratch; true iff it matches.
bool audit_state(const EpidemicState& state, const Graph& g);

struct RunOutcome {
  double extinction_time = 0.0;
  // SIR: resistant nodes at absorption (or at the horizon when censored).
  // SIS: peak simultaneous infected count, kept for diagnostics.
  int eventual_infected = 0;
  uint64_t event_count = 0;
  bool censored = false;
  uint64_t seed = 0;
};

struct SimParams {
  Model model = Model::SIS;
  double beta = 0.0;
  StrategySpec strategy;
  std::vector<int> initial_infected;
  Horizon horizon;
  // When > 0, rerun audit_state every this many events and throw on mismatch.
  uint64_t audit_every = 0;

  void validate(const Graph& g) const;
};

// Exact event-driven jump-process simulation. Identical (inputs, seed) yield
// an identical trajectory. If `trace` is non-null each event is logged as a
// line "<time> <INTRINSIC|EXTERNAL|RECOVER> <node>".
RunOutcome simulate(const Graph& g, const SimParams& params, uint64_t seed,
                    std::ostream* trace = nullptr);

// Optional per-replication initial set override for batch runs
// (replication index, replication seed) -> initial infected set.
using InitialSampler = std::function<std::vector<int>(int, uint64_t)>;

// Replication k runs with seed derive_seed(base_seed, k); outcomes are
// ordered by k, so serial and parallel execution give identical results.
std::vector<RunOutcome> simulate_batch(const Graph& g, const SimParams& params,
                                       int replications, uint64_t base_seed,
                                       int threads = 0,
                                       const InitialSampler& initial = nullptr);

// Serial reference for the batch kernel, kept for tests and benchmarks.
std::vector<RunOutcome> simulate_batch_serial(const Graph& g, const SimParams& params,
                                              int replications, uint64_t base_seed,
                                              const InitialSampler& initial = nullptr);

// SIS and SIR trajectories driven by one shared randomness stream: every
// potential event (edge infection attempt, node recovery, external attempt)
// uses the same draw in both chains, and a recovery makes the node resistant
// in the SIR chain but susceptible again in the SIS chain. The SIR infected
// set then never leaves the SIS infected set, so whenever neither run is
// censored, sis.extinction_time >= sir.extinction_time holds pathwise.
std::pair<RunOutcome, RunOutcome> coupled_sis_sir(const Graph& g, const SimParams& params,
                                                  uint64_t seed);

// CSV with header "seed,model,extinction_time,censored,eventual_infected,event_count".
void write_outcomes_csv(std::ostream& out, std::span<const RunOutcome> outcomes, Model model);

}  // namespace epinet
