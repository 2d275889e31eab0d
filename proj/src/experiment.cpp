#include "epinet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "epinet/rng.hpp"

namespace epinet {

Graph GraphFamilySpec::build(int n) const {
  if (family == "complete") return generate_complete(n);
  if (family == "cycle") return generate_cycle(n);
  if (family == "path") return generate_path(n);
  if (family == "star") return generate_star(n);
  if (family == "gnp") return generate_gnp(n, p, seed);
  if (family == "torus") return generate_grid_torus(n);
  if (family == "small_world") return generate_small_world(n, exponent, seed);
  if (family == "power_law") return generate_power_law(n, attachment, seed);
  if (family == "file") return read_edge_list_file(file);
  throw std::invalid_argument("unknown graph family: " + family);
}

Graph parse_generator_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return read_edge_list_file(spec);
  const std::string family = spec.substr(0, colon);
  std::vector<std::string> args;
  {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(item);
  }
  auto want = [&](size_t lo, size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw std::invalid_argument("generator spec " + family + ": wrong argument count");
    }
  };
  auto arg_i = [&](size_t i) { return std::stoi(args.at(i)); };
  auto arg_d = [&](size_t i) { return std::stod(args.at(i)); };
  auto arg_u = [&](size_t i, uint64_t dflt) {
    return args.size() > i ? static_cast<uint64_t>(std::stoull(args[i])) : dflt;
  };
  if (family == "complete") { want(1, 1); return generate_complete(arg_i(0)); }
  if (family == "cycle") { want(1, 1); return generate_cycle(arg_i(0)); }
  if (family == "path") { want(1, 1); return generate_path(arg_i(0)); }
  if (family == "star") { want(1, 1); return generate_star(arg_i(0)); }
  if (family == "torus") { want(1, 1); return generate_grid_torus(arg_i(0)); }
  if (family == "gnp") { want(2, 3); return generate_gnp(arg_i(0), arg_d(1), arg_u(2, 0)); }
  if (family == "smallworld" || family == "small_world") {
    want(2, 3);
    return generate_small_world(arg_i(0), arg_d(1), arg_u(2, 0));
  }
  if (family == "powerlaw" || family == "power_law") {
    want(2, 3);
    return generate_power_law(arg_i(0), arg_i(1), arg_u(2, 0));
  }
  throw std::invalid_argument("unknown generator spec: " + spec);
}

void ExperimentConfig::validate() const {
  if (graph.family.empty()) throw std::invalid_argument("config: graph family required");
  if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be > 0");
  strategy.validate();
  if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
  horizon.validate();
  if (sweep.empty()) throw std::invalid_argument("config: sweep list must not be empty");
  if (initial_rule == InitialRule::UniformRandomK && initial_k < 1) {
    throw std::invalid_argument("config: initial random k must be >= 1");
  }
  if (initial_rule == InitialRule::FixedList && initial_fixed.empty()) {
    throw std::invalid_argument("config: initial fixed list must not be empty");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("config: alpha in (0,1]");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.horizon.max_events = 1000000;  // desk-scale default
  cfg.sweep = {50, 100, 200, 400};
  bool sweep_given = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    try {
      if (key == "graph") {
        ss >> cfg.graph.family;
      } else if (key == "graph_file") {
        cfg.graph.family = "file";
        ss >> cfg.graph.file;
      } else if (key == "p") {
        ss >> cfg.graph.p;
      } else if (key == "exponent") {
        ss >> cfg.graph.exponent;
      } else if (key == "attachment") {
        ss >> cfg.graph.attachment;
      } else if (key == "graph_seed") {
        ss >> cfg.graph.seed;
      } else if (key == "model") {
        std::string m;
        ss >> m;
        cfg.model = model_from_string(m);
      } else if (key == "beta") {
        ss >> cfg.beta;
      } else if (key == "strategy") {
        std::string k;
        ss >> k;
        cfg.strategy.kind = strategy_kind_from_string(k);
      } else if (key == "mu") {
        ss >> cfg.strategy.mu;
      } else if (key == "gamma") {
        ss >> cfg.strategy.gamma;
      } else if (key == "alpha") {
        ss >> cfg.strategy.alpha;
        cfg.alpha = cfg.strategy.alpha;
      } else if (key == "degree_threshold") {
        ss >> cfg.strategy.degree_threshold;
      } else if (key == "beta_ext") {
        ss >> cfg.strategy.beta_ext;
      } else if (key == "strategy_seed") {
        ss >> cfg.strategy.seed;
      } else if (key == "long_range_file") {
        std::string path;
        ss >> path;
        std::ifstream lr(path);
        if (!lr) throw std::runtime_error("cannot open long-range edge file: " + path);
        int u, v;
        while (lr >> u >> v) cfg.strategy.long_range_edges.emplace_back(u, v);
      } else if (key == "initial") {
        std::string rule;
        ss >> rule;
        if (rule == "random") {
          cfg.initial_rule = InitialRule::UniformRandomK;
          if (!(ss >> cfg.initial_k)) cfg.initial_k = 1;
        } else if (rule == "max_degree") {
          cfg.initial_rule = InitialRule::MaxDegreeNode;
        } else if (rule == "fixed") {
          cfg.initial_rule = InitialRule::FixedList;
          int v;
          while (ss >> v) cfg.initial_fixed.push_back(v);
        } else {
          throw std::invalid_argument("unknown initial rule: " + rule);
        }
      } else if (key == "replications") {
        ss >> cfg.replications;
      } else if (key == "horizon_time") {
        ss >> cfg.horizon.max_time;
      } else if (key == "horizon_events") {
        ss >> cfg.horizon.max_events;
      } else if (key == "sweep") {
        cfg.sweep.clear();
        sweep_given = true;
        int v;
        while (ss >> v) cfg.sweep.push_back(v);
      } else if (key == "seed") {
        ss >> cfg.base_seed;
      } else if (key == "csv") {
        ss >> cfg.csv_path;
      } else if (key == "json") {
        ss >> cfg.json_path;
      } else if (key == "threads") {
        ss >> cfg.threads;
      } else if (key == "eta_m") {
        int v;
        while (ss >> v) cfg.eta_sizes.push_back(v);
      } else if (key == "eta_mode") {
        std::string m;
        ss >> m;
        if (m == "exact") cfg.eta_mode = EtaMode::Exact;
        else if (m == "sampled") cfg.eta_mode = EtaMode::Sampled;
        else throw std::invalid_argument("eta_mode must be exact or sampled");
      } else {
        throw std::invalid_argument("unknown config key: " + key);
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (cfg.graph.family == "file" && !sweep_given) cfg.sweep = {0};
  if (cfg.graph.seed == 0) cfg.graph.seed = derive_seed(cfg.base_seed, 0x677261);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

std::vector<int> resolve_initial_set(const ExperimentConfig& config, const Graph& g,
                                     uint64_t run_seed) {
  switch (config.initial_rule) {
    case InitialRule::FixedList:
      return config.initial_fixed;
    case InitialRule::MaxDegreeNode: {
      int best = 0;
      for (int v = 1; v < g.node_count(); ++v) {
        if (g.degree(v) > g.degree(best)) best = v;
      }
      return {best};
    }
    case InitialRule::UniformRandomK: {
      RngStream rng(derive_seed(run_seed, 0, kStreamInitialSet));
      const int n = g.node_count();
      const int k = std::min(config.initial_k, n);
      std::vector<int> out;
      out.reserve(static_cast<size_t>(k));
      while (static_cast<int>(out.size()) < k) {
        const int v = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
      return out;
    }
  }
  return {};
}

namespace {

std::string csv_path_for_point(const std::string& base, int n, bool single_point) {
  if (single_point) return base;
  const auto dot = base.rfind('.');
  const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
  const std::string ext = dot == std::string::npos ? ".csv" : base.substr(dot);
  return stem + "_n" + std::to_string(n) + ext;
}

nlohmann::ordered_json summary_json(const BatchSummary& s) {
  nlohmann::ordered_json j;
  j["runs"] = s.runs;
  j["censored"] = s.censored;
  j["censored_fraction"] = s.censored_fraction;
  j["mean"] = s.mean;
  j["stderr"] = s.se;
  j["median"] = s.median;
  j["ci95"] = {s.ci.lo, s.ci.hi};
  j["mean_eventual_infected"] = s.mean_eventual;
  return j;
}

}  // namespace

nlohmann::ordered_json SweepReport::to_json(const ExperimentConfig& config) const {
  nlohmann::ordered_json j;
  j["model"] = to_string(config.model);
  j["beta"] = config.beta;
  j["strategy"] = to_string(config.strategy.kind);
  j["replications"] = config.replications;
  j["base_seed"] = config.base_seed;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& pt : points) {
    nlohmann::ordered_json p;
    p["n"] = pt.n;
    p["node_count"] = pt.node_count;
    p["d_max"] = pt.metrics.d_max;
    p["d_avg"] = pt.metrics.d_avg;
    p["lambda1"] = pt.metrics.lambda1;
    if (!pt.metrics.eta.empty()) {
      nlohmann::ordered_json etas;
      for (const auto& [m, res] : pt.metrics.eta) {
        etas[std::to_string(m)] = {{"value", res.value}, {"exact", res.exact}};
      }
      p["eta"] = etas;
    }
    p["summary"] = summary_json(pt.summary);
    j["points"].push_back(p);
  }
  j["regression"]["verdict"] = regression_verdict;
  if (fit) {
    j["regression"]["family"] = to_string(fit->best);
    j["regression"]["power_law_exponent"] = fit->exponent;
    j["regression"]["exponent_ci95"] = {fit->exponent_lo, fit->exponent_hi};
    for (const auto& fam : fit->families) {
      nlohmann::ordered_json fj;
      fj["aicc"] = std::isfinite(fam.aicc) ? nlohmann::ordered_json(fam.aicc)
                                           : nlohmann::ordered_json("unsupported");
      fj["rss"] = fam.rss;
      for (const auto& [k, v] : fam.params) fj[k] = v;
      j["regression"]["families"][to_string(fam.family)] = fj;
    }
  }
  j["regime"]["label"] = to_string(regime.regime);
  if (!regime.inequality.empty()) {
    j["regime"]["inequality"] = regime.inequality;
    j["regime"]["margin"] = regime.margin;
  }
  if (!regime.diagnostic.empty()) j["regime"]["diagnostic"] = regime.diagnostic;
  return j;
}

SweepReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  SweepReport report;

  for (const int n : config.sweep) {
    const Graph g = config.graph.build(n);
    SimParams params;
    params.model = config.model;
    params.beta = config.beta;
    params.strategy = config.strategy;
    params.horizon = config.horizon;
    if (config.initial_rule != InitialRule::UniformRandomK) {
      params.initial_infected = resolve_initial_set(config, g, 0);
    } else {
      params.initial_infected = {0};  // placeholder; sampler overrides per run
    }
    InitialSampler sampler = nullptr;
    if (config.initial_rule == InitialRule::UniformRandomK) {
      const ExperimentConfig* cfg = &config;
      const Graph* graph = &g;
      sampler = [cfg, graph](int, uint64_t run_seed) {
        return resolve_initial_set(*cfg, *graph, run_seed);
      };
    }
    const uint64_t point_seed = derive_seed(config.base_seed, static_cast<uint64_t>(n), 0x7074);
    const auto outcomes =
        simulate_batch(g, params, config.replications, point_seed, config.threads, sampler);

    SweepPointReport pt;
    pt.n = n;
    pt.node_count = g.node_count();
    pt.summary = summarize(outcomes, 0.95, 1000, derive_seed(point_seed, 0x6369));
    std::vector<int> eta_sizes = config.eta_sizes;
    if (config.strategy.kind == StrategyKind::LinearScaling) {
      const int m = static_cast<int>(
          std::floor(std::pow(static_cast<double>(g.node_count()), config.alpha)));
      if (m >= 1 && m < g.node_count()) eta_sizes.push_back(m);
    }
    std::sort(eta_sizes.begin(), eta_sizes.end());
    eta_sizes.erase(std::unique(eta_sizes.begin(), eta_sizes.end()), eta_sizes.end());
    EtaMode mode = config.eta_mode;
    if (mode == EtaMode::Exact && g.node_count() > kEtaExhaustiveCap) mode = EtaMode::Sampled;
    pt.metrics = compute_metrics(g, eta_sizes, mode, 1e-10, config.threads,
                                 derive_seed(point_seed, 0x657461));
    report.points.push_back(std::move(pt));

    if (!config.csv_path.empty()) {
      const std::string path = csv_path_for_point(config.csv_path, n, config.sweep.size() == 1);
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot open CSV output: " + path);
      write_outcomes_csv(out, outcomes, config.model);
    }
  }

  // Regression across sweep points; censoring-heavy points rule it out and
  // that is itself the verdict.
  const bool heavy_censoring =
      std::any_of(report.points.begin(), report.points.end(),
                  [](const SweepPointReport& p) { return p.summary.censored_fraction >= 0.10; });
  if (report.points.size() < 3) {
    report.regression_verdict = "fewer than 3 points";
  } else if (heavy_censoring) {
    report.regression_verdict = "exceeds horizon";
  } else {
    std::vector<ScalingPoint> pts;
    for (const auto& p : report.points) {
      pts.push_back({static_cast<double>(p.n), p.summary.mean, p.summary.se});
    }
    report.fit = fit_scaling(pts);
    report.regression_run = true;
    report.regression_verdict = "ok";
  }

  report.regime = regime_classify(config.beta, report.points.back().metrics,
                                  report.points.back().node_count, config.strategy,
                                  config.alpha);

  if (!config.json_path.empty()) {
    std::ofstream out(config.json_path);
    if (!out) throw std::runtime_error("cannot open JSON output: " + config.json_path);
    out << report.to_json(config).dump(2) << "\n";
  }
  return report;
}

nlohmann::ordered_json bound_report_json(const std::string& kind,
                                         const nlohmann::ordered_json& parameters,
                                         const BirthDeathChain& chain, int start,
                                         const RegimeCertificate* certificate) {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["parameters"] = parameters;
  if (certificate) {
    j["regime"] = to_string(certificate->regime);
    if (!certificate->inequality.empty()) {
      j["certificate_inequality"] = certificate->inequality;
      j["certificate_margin"] = certificate->margin;
    }
    if (!certificate->diagnostic.empty()) j["diagnostic"] = certificate->diagnostic;
  }
  const double log_steps = log_expected_absorption_from_1(chain);
  j["log_expected_absorption_steps_from_1"] = log_steps;
  j["evaluation_method"] = "detailed-balance closed form (log space)";
  if (log_steps < 690.0) {
    j["expected_absorption_steps_from_1"] = std::exp(log_steps);
    j["expected_absorption_steps"] =
        expected_absorption_from_state(chain, start, TimeScale::Jumps);
    j["expected_absorption_time"] =
        expected_absorption_from_state(chain, start, TimeScale::Continuous);
    j["start_state"] = start;
  }
  return j;
}

}  // namespace epinet
