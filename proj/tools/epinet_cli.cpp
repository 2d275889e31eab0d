// Command-line front end: metrics, simulate, sweep, bounds, classify.

#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "epinet/chains.hpp"
#include "epinet/experiment.hpp"
#include "epinet/graph.hpp"
#include "epinet/metrics.hpp"
#include "epinet/rng.hpp"
#include "epinet/simulate.hpp"

using namespace epinet;
using nlohmann::ordered_json;

namespace {

ordered_json metrics_json(const Graph& g, const GraphMetrics& m) {
  ordered_json j;
  j["node_count"] = g.node_count();
  j["edge_count"] = g.edge_count();
  j["d_max"] = m.d_max;
  j["d_avg"] = m.d_avg;
  j["lambda1"] = m.lambda1;
  j["lambda1_tolerance"] = m.lambda1_tolerance;
  for (const auto& [size, eta] : m.eta) {
    j["eta"][std::to_string(size)] = {{"value", eta.value}, {"exact", eta.exact}};
  }
  return j;
}

int cmd_metrics(const std::string& spec, std::vector<int> eta_sizes, bool sampled,
                int threads) {
  const Graph g = parse_generator_spec(spec);
  EtaMode mode = sampled ? EtaMode::Sampled : EtaMode::Exact;
  if (mode == EtaMode::Exact && g.node_count() > kEtaExhaustiveCap && !eta_sizes.empty()) {
    std::cerr << "note: graph too large for exact eta, using sampled upper bounds\n";
    mode = EtaMode::Sampled;
  }
  const GraphMetrics m = compute_metrics(g, eta_sizes, mode, 1e-10, threads);
  std::cout << metrics_json(g, m).dump(2) << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, bool sweep_all, const std::string& trace_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  if (!sweep_all && cfg.sweep.size() > 1) cfg.sweep.resize(1);
  const SweepReport report = run_experiment(cfg);
  std::cout << report.to_json(cfg).dump(2) << "\n";

  if (!trace_path.empty()) {
    // Event log for replication 0 of the first sweep point.
    const Graph g = cfg.graph.build(cfg.sweep.front());
    SimParams p;
    p.model = cfg.model;
    p.beta = cfg.beta;
    p.strategy = cfg.strategy;
    p.horizon = cfg.horizon;
    const uint64_t point_seed =
        derive_seed(cfg.base_seed, static_cast<uint64_t>(cfg.sweep.front()), 0x7074);
    const uint64_t run_seed = derive_seed(point_seed, 0);
    p.initial_infected = resolve_initial_set(cfg, g, run_seed);
    std::ofstream trace(trace_path);
    if (!trace) throw std::runtime_error("cannot open trace output: " + trace_path);
    (void)simulate(g, p, run_seed, &trace);
  }
  return 0;
}

int cmd_bounds(const std::string& which, double beta, int d_max, double mu, int n,
               const std::string& graph_spec, double gamma, double alpha) {
  ordered_json params;
  params["beta"] = beta;
  if (which == "upper") {
    params["d_max"] = d_max;
    params["mu"] = mu;
    params["n"] = n;
    const auto chain = sis_upper_chain(beta, d_max, mu, n);
    ordered_json j = bound_report_json("sis_upper_chain", params, chain, 1);
    if (beta * d_max < 1.0 && beta * d_max > 0.0) {
      j["subcritical_series_bound"] = subcritical_series_bound(beta, d_max, mu, n);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (which == "lower") {
    const Graph g = parse_generator_spec(graph_spec);
    const int m = static_cast<int>(
        std::floor(std::pow(static_cast<double>(g.node_count()), alpha)));
    if (m < 1 || m >= g.node_count()) {
      throw std::invalid_argument("bounds: floor(n^alpha) outside {1..n-1}");
    }
    std::vector<double> eta(static_cast<size_t>(m) + 1, 0.0);
    const bool exact = g.node_count() <= kEtaExhaustiveCap;
    for (int i = 1; i <= m; ++i) {
      eta[static_cast<size_t>(i)] =
          isoperimetric_constant(g, i, exact ? EtaMode::Exact : EtaMode::Sampled).value;
    }
    const int nodes = g.node_count();
    const auto chain = sis_lower_chain(
        beta, [&eta](int i) { return eta[static_cast<size_t>(i)]; },
        [gamma, nodes](int i) { return gamma * i * (1.0 - static_cast<double>(i) / nodes); },
        m);
    params["graph"] = graph_spec;
    params["gamma"] = gamma;
    params["alpha"] = alpha;
    params["m"] = m;
    params["eta_exact"] = exact;
    std::cout << bound_report_json("sis_lower_chain", params, chain, 1).dump(2) << "\n";
    return 0;
  }
  throw std::invalid_argument("bounds: --chain must be upper or lower");
}

int cmd_classify(const std::string& graph_spec, double beta, const std::string& strategy,
                 double mu, double gamma, double alpha, int threads) {
  const Graph g = parse_generator_spec(graph_spec);
  StrategySpec spec;
  spec.kind = strategy_kind_from_string(strategy);
  spec.mu = mu;
  spec.gamma = gamma;
  if (spec.kind == StrategyKind::LinearScaling) spec.alpha = alpha;

  std::vector<int> eta_sizes;
  const int m =
      static_cast<int>(std::floor(std::pow(static_cast<double>(g.node_count()), alpha)));
  bool eta_exact = true;
  if (spec.kind == StrategyKind::LinearScaling && m >= 1 && m < g.node_count()) {
    eta_sizes.push_back(m);
    eta_exact = g.node_count() <= kEtaExhaustiveCap;
  }
  const GraphMetrics metrics =
      compute_metrics(g, eta_sizes, eta_exact ? EtaMode::Exact : EtaMode::Sampled, 1e-10,
                      threads);
  const RegimeCertificate cert =
      regime_classify(beta, metrics, g.node_count(), spec, alpha);

  ordered_json j;
  j["graph"] = graph_spec;
  j["beta"] = beta;
  j["strategy"] = strategy;
  j["metrics"] = metrics_json(g, metrics);
  j["regime"] = to_string(cert.regime);
  if (!cert.inequality.empty()) {
    j["inequality"] = cert.inequality;
    j["margin"] = cert.margin;
  }
  if (!cert.diagnostic.empty()) j["diagnostic"] = cert.diagnostic;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIS/SIR epidemics with external infection agents"};
  app.require_subcommand(1);

  std::string graph_spec, config_path, trace_path, chain_kind = "upper", strategy = "null";
  std::vector<int> eta_sizes;
  bool sampled = false;
  int threads = 0, d_max = 1, n = 100;
  double beta = 0.1, mu = 0.0, gamma = 0.0, alpha = 0.5;

  auto* metrics = app.add_subcommand("metrics", "graph metrics as JSON");
  metrics->add_option("graph", graph_spec, "graph file or generator spec")->required();
  metrics->add_option("--eta", eta_sizes, "eta(m) sizes to compute");
  metrics->add_flag("--sampled", sampled, "use sampled eta upper bounds");
  metrics->add_option("--threads", threads, "worker threads (0 = all)");

  auto* simulate_cmd = app.add_subcommand("simulate", "run one sweep point of a config");
  simulate_cmd->add_option("config", config_path, "experiment config file")->required();
  simulate_cmd->add_option("--trace", trace_path,
                           "write replication 0's event log (\"<time> <kind> <node>\")");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a full experiment sweep");
  sweep_cmd->add_option("config", config_path, "experiment config file")->required();

  auto* bounds = app.add_subcommand("bounds", "analytic chain bound report as JSON");
  bounds->add_option("--chain", chain_kind, "upper|lower")->required();
  bounds->add_option("--beta", beta, "intrinsic infection rate")->required();
  bounds->add_option("--dmax", d_max, "max degree (upper chain)");
  bounds->add_option("--mu", mu, "external budget (upper chain)");
  bounds->add_option("--n", n, "chain length (upper chain)");
  bounds->add_option("--graph", graph_spec, "graph spec (lower chain eta source)");
  bounds->add_option("--gamma", gamma, "linear-scaling slope (lower chain)");
  bounds->add_option("--alpha", alpha, "cap exponent (lower chain)");

  auto* classify = app.add_subcommand("classify", "regime certificate as JSON");
  classify->add_option("--graph", graph_spec, "graph file or generator spec")->required();
  classify->add_option("--beta", beta, "intrinsic infection rate")->required();
  classify->add_option("--strategy", strategy, "external strategy kind")->required();
  classify->add_option("--mu", mu, "constant budget");
  classify->add_option("--gamma", gamma, "linear-scaling slope");
  classify->add_option("--alpha", alpha, "cap exponent");
  classify->add_option("--threads", threads, "worker threads (0 = all)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (metrics->parsed()) return cmd_metrics(graph_spec, eta_sizes, sampled, threads);
    if (simulate_cmd->parsed()) return cmd_run(config_path, false, trace_path);
    if (sweep_cmd->parsed()) return cmd_run(config_path, true, "");
    if (bounds->parsed())
      return cmd_bounds(chain_kind, beta, d_max, mu, n, graph_spec, gamma, alpha);
    if (classify->parsed())
      return cmd_classify(graph_spec, beta, strategy, mu, gamma, alpha, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
