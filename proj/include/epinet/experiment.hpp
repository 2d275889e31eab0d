#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epinet/chains.hpp"
#include "epinet/graph.hpp"
#include "epinet/metrics.hpp"
#include "epinet/simulate.hpp"
#include "epinet/stats.hpp"

#include "json.hpp"

namespace epinet {

enum class InitialRule { FixedList, UniformRandomK, MaxDegreeNode };

struct GraphFamilySpec {
  std::string family;     // complete|cycle|path|star|gnp|torus|small_world|power_law|file
  double p = 0.0;         // gnp
  double exponent = 2.0;  // small_world
  int attachment = 2;     // power_law
  std::string file;       // file family
  uint64_t seed = 0;      // random families; derived from the experiment seed by default

  // Instantiates the family at sweep size `n` (leaves for stars, side for
  // grid-based families, node count otherwise).
  Graph build(int n) const;
};

// Builds a graph from a compact spec string such as "cycle:100",
// "gnp:1000,0.01,7", "star:200", "torus:10", "smallworld:20,2,7",
// "powerlaw:5000,2,7", "complete:30" or a path to an edge-list file.
Graph parse_generator_spec(const std::string& spec);

struct ExperimentConfig {
  GraphFamilySpec graph;
  Model model = Model::SIS;
  double beta = 0.0;
  StrategySpec strategy;
  InitialRule initial_rule = InitialRule::UniformRandomK;
  int initial_k = 1;
  std::vector<int> initial_fixed;
  int replications = 1000;
  Horizon horizon{};             // default event cap set in parse/validate
  std::vector<int> sweep;        // sweep sizes; {50,100,200,400} by default
  uint64_t base_seed = 1;
  std::string csv_path;          // optional; sweeps expand to <stem>_n<k><ext>
  std::string json_path;         // optional
  int threads = 0;               // 0 = all available
  std::vector<int> eta_sizes;    // eta(m) values to report per point
  EtaMode eta_mode = EtaMode::Exact;
  double alpha = 0.5;            // n^alpha used by regime classification

  void validate() const;
};

// Key-value configuration document; one "key value..." pair per line,
// '#' starts a comment. Keys mirror the ExperimentConfig field names.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

struct SweepPointReport {
  int n = 0;
  int node_count = 0;
  BatchSummary summary;
  GraphMetrics metrics;
};

struct SweepReport {
  std::vector<SweepPointReport> points;
  bool regression_run = false;
  std::string regression_verdict;  // "ok" | "exceeds horizon" | "fewer than 3 points"
  std::optional<ScalingFit> fit;
  RegimeCertificate regime;

  nlohmann::ordered_json to_json(const ExperimentConfig& config) const;
};

// Runs the batches for every sweep point, writes the per-run CSV files and
// the summary JSON (when paths are configured), and returns the report.
// Deterministic under (config, base_seed).
SweepReport run_experiment(const ExperimentConfig& config);

std::vector<int> resolve_initial_set(const ExperimentConfig& config, const Graph& g,
                                     uint64_t run_seed);

nlohmann::ordered_json bound_report_json(const std::string& kind,
                                         const nlohmann::ordered_json& parameters,
                                         const BirthDeathChain& chain, int start,
                                         const RegimeCertificate* certificate = nullptr);

}  // namespace epinet
