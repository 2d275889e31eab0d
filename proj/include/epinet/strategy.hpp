#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet {

enum class Compartment : uint8_t { Susceptible = 0, Infected = 1, Resistant = 2 };

enum class StrategyKind {
  Null,
  TargetedMaxDegree,
  DegreeThreshold,
  Uniform,
  LinearScaling,
  StaticLongRange,
};

StrategyKind strategy_kind_from_string(const std::string& name);
std::string to_string(StrategyKind kind);

// External-infection policy description. The emitted rate vector always
// satisfies sum_i L_i <= mu(state) and L == 0 whenever nothing is infected
// (the engine enforces the latter independently of the policy).
struct StrategySpec {
  StrategyKind kind = StrategyKind::Null;
  double mu = 0.0;               // budget for the constant-budget policies
  double gamma = 0.0;            // linear-scaling slope
  double alpha = 1.0;            // linear-scaling cap exponent, in (0,1]
  int degree_threshold = 1;      // DegreeThreshold policy
  double beta_ext = -1.0;        // StaticLongRange per-edge rate; <0 means "use intrinsic beta"
  std::vector<Edge> long_range_edges;
  uint64_t seed = 0;             // policy randomness (DegreeThreshold fallback pick)

  void validate() const;
  // Budget mu(state) available at `infected` infected nodes on an n-node graph.
  double budget(int infected, int n) const;
};

// Per-run evaluation context: immutable spec plus the derived lookup tables
// and the policy's own RNG stream. One instance per trajectory.
class StrategyRuntime {
 public:
  StrategyRuntime(const StrategySpec& spec, const Graph& g, double intrinsic_beta,
                  uint64_t run_seed);

  // Writes the rate vector for the current compartments into `out`
  // (size node_count). Pure in (compartments, draw index).
  void fill_rates(std::span<const Compartment> compartments, int infected_count,
                  std::span<double> out);

  const StrategySpec& spec() const { return spec_; }

 private:
  StrategySpec spec_;
  const Graph* graph_;
  double edge_rate_ = 0.0;            // StaticLongRange per-edge rate
  double cap_ = 0.0;                  // LinearScaling budget cap gamma*floor(n^alpha)
  std::vector<int> by_degree_;        // nodes sorted by (degree desc, index asc)
  std::vector<std::vector<int>> long_range_adj_;
  RngStream rng_;
};

}  // namespace epinet
