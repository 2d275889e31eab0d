#include "epinet/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epinet {

StrategyKind strategy_kind_from_string(const std::string& name) {
  if (name == "null") return StrategyKind::Null;
  if (name == "targeted_max_degree") return StrategyKind::TargetedMaxDegree;
  if (name == "degree_threshold") return StrategyKind::DegreeThreshold;
  if (name == "uniform") return StrategyKind::Uniform;
  if (name == "linear_scaling") return StrategyKind::LinearScaling;
  if (name == "static_long_range") return StrategyKind::StaticLongRange;
  throw std::invalid_argument("unknown strategy kind: " + name);
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Null: return "null";
    case StrategyKind::TargetedMaxDegree: return "targeted_max_degree";
    case StrategyKind::DegreeThreshold: return "degree_threshold";
    case StrategyKind::Uniform: return "uniform";
    case StrategyKind::LinearScaling: return "linear_scaling";
    case StrategyKind::StaticLongRange: return "static_long_range";
  }
  return "?";
}

void StrategySpec::validate() const {
  if (mu < 0.0) throw std::invalid_argument("strategy: mu must be >= 0");
  if (gamma < 0.0) throw std::invalid_argument("strategy: gamma must be >= 0");
  if (kind == StrategyKind::LinearScaling && (alpha <= 0.0 || alpha > 1.0)) {
    throw std::invalid_argument("strategy: alpha must be in (0,1]");
  }
  if (kind == StrategyKind::DegreeThreshold && degree_threshold < 1) {
    throw std::invalid_argument("strategy: degree_threshold must be >= 1");
  }
}

double StrategySpec::budget(int infected, int n) const {
  if (infected <= 0) return 0.0;
  switch (kind) {
    case StrategyKind::Null:
      return 0.0;
    case StrategyKind::LinearScaling: {
      const double cap = std::floor(std::pow(static_cast<double>(n), alpha));
      return gamma * std::min(static_cast<double>(infected), cap);
    }
    case StrategyKind::StaticLongRange:
      return beta_ext * static_cast<double>(long_range_edges.size());
    default:
      return mu;
  }
}

StrategyRuntime::StrategyRuntime(const StrategySpec& spec, const Graph& g,
                                 double intrinsic_beta, uint64_t run_seed)
    : spec_(spec),
      graph_(&g),
      rng_(derive_seed(run_seed, spec.seed, kStreamStrategy)) {
  spec_.validate();
  const int n = g.node_count();
  if (spec_.kind == StrategyKind::TargetedMaxDegree ||
      spec_.kind == StrategyKind::DegreeThreshold) {
    by_degree_.resize(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) by_degree_[static_cast<size_t>(v)] = v;
    std::stable_sort(by_degree_.begin(), by_degree_.end(), [&g](int a, int b) {
      return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
    });
  }
  if (spec_.kind == StrategyKind::StaticLongRange) {
    edge_rate_ = spec_.beta_ext < 0.0 ? intrinsic_beta : spec_.beta_ext;
    spec_.beta_ext = edge_rate_;
    long_range_adj_.resize(static_cast<size_t>(n));
    for (const auto& [u, v] : spec_.long_range_edges) {
      if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
        throw std::invalid_argument("strategy: bad long-range edge");
      }
      long_range_adj_[static_cast<size_t>(u)].push_back(v);
      long_range_adj_[static_cast<size_t>(v)].push_back(u);
    }
  }
  if (spec_.kind == StrategyKind::LinearScaling) {
    cap_ = spec_.gamma * std::floor(std::pow(static_cast<double>(n), spec_.alpha));
  }
}

void StrategyRuntime::fill_rates(std::span<const Compartment> compartments,
                                 int infected_count, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (infected_count <= 0) return;  // source exists only while something is infected
  const int n = graph_->node_count();

  switch (spec_.kind) {
    case StrategyKind::Null:
      return;

    case StrategyKind::TargetedMaxDegree:
      for (const int v : by_degree_) {
        if (compartments[static_cast<size_t>(v)] == Compartment::Susceptible) {
          out[static_cast<size_t>(v)] = spec_.mu;
          return;
        }
      }
      return;

    case StrategyKind::DegreeThreshold: {
      int fallback_count = 0;
      for (const int v : by_degree_) {
        if (compartments[static_cast<size_t>(v)] != Compartment::Susceptible) continue;
        if (graph_->degree(v) >= spec_.degree_threshold) {
          out[static_cast<size_t>(v)] = spec_.mu;
          return;
        }
        ++fallback_count;
      }
      if (fallback_count == 0) return;
      // No qualifying node: one uniformly random susceptible target.
      uint64_t pick = rng_.below(static_cast<uint64_t>(fallback_count));
      for (int v = 0; v < n; ++v) {
        if (compartments[static_cast<size_t>(v)] != Compartment::Susceptible) continue;
        if (pick == 0) {
          out[static_cast<size_t>(v)] = spec_.mu;
          return;
        }
        --pick;
      }
      return;
    }

    case StrategyKind::Uniform: {
      const double per_node = spec_.mu / n;  // every node, infected or not
      std::fill(out.begin(), out.end(), per_node);
      return;
    }

    case StrategyKind::LinearScaling: {
      const double budget = std::min(spec_.gamma * infected_count, cap_);
      const double per_node = budget / n;
      std::fill(out.begin(), out.end(), per_node);
      return;
    }

    case StrategyKind::StaticLongRange:
      // Counting only susceptible receivers keeps ||L||_1 <= beta_ext * |edges|.
      for (int v = 0; v < n; ++v) {
        if (compartments[static_cast<size_t>(v)] != Compartment::Susceptible) continue;
        int infected_peers = 0;
        for (const int w : long_range_adj_[static_cast<size_t>(v)]) {
          if (compartments[static_cast<size_t>(w)] == Compartment::Infected) ++infected_peers;
        }
        if (infected_peers > 0) {
          out[static_cast<size_t>(v)] = edge_rate_ * infected_peers;
        }
      }
      return;
  }
}

}  // namespace epinet
