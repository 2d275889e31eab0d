#include "epinet/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "epinet/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace epinet {

namespace {

// One mat-vec y = A x. Row-parallel, so the result is independent of the
// thread count (each row is summed serially).
void adjacency_matvec(const Graph& g, const std::vector<double>& x,
                      std::vector<double>& y, int threads) {
  const int n = g.node_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(std::max(1, threads))
#endif
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const int j : g.neighbors(i)) acc += x[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = acc;
  }
  (void)threads;
}

double norm2(const std::vector<double>& x) {
  double acc = 0.0;
  for (const double v : x) acc += v * v;
  return std::sqrt(acc);
}

SpectralResult power_iterate(const Graph& g, std::vector<double> v,
                             double tolerance, int max_iterations, int threads) {
  const int n = g.node_count();
  std::vector<double> y(static_cast<size_t>(n));
  const double nv = norm2(v);
  for (auto& e : v) e /= nv;
  double prev = -1.0;
  SpectralResult res;
  for (int it = 1; it <= max_iterations; ++it) {
    adjacency_matvec(g, v, y, threads);
    const double est = norm2(y);
    res.value = est;
    res.iterations = it;
    if (est == 0.0) {  // no spectral mass reachable from v
      res.converged = true;
      return res;
    }
    if (it > 1 && std::abs(est - prev) < tolerance) {
      res.converged = true;
      return res;
    }
    prev = est;
    for (size_t i = 0; i < y.size(); ++i) v[i] = y[i] / est;
  }
  return res;
}

}  // namespace

SpectralResult spectral_radius(const Graph& g, double tolerance,
                               int max_iterations, int threads) {
  if (g.node_count() == 0) throw std::invalid_argument("spectral radius: empty graph");
  if (tolerance <= 0.0) throw std::invalid_argument("spectral radius: tolerance must be > 0");
  if (g.edge_count() == 0) return {0.0, true, 0};

  std::vector<double> ones(static_cast<size_t>(g.node_count()), 1.0);
  SpectralResult res = power_iterate(g, std::move(ones), tolerance, max_iterations, threads);
  if (res.converged) return res;

  // Stagnated: one restart from a fixed pseudorandom positive vector, which
  // also has nonzero overlap with the Perron vector.
  RngStream rng(0x9d5f1cu);
  std::vector<double> v(static_cast<size_t>(g.node_count()));
  for (auto& e : v) e = 0.5 + rng.uniform01();
  SpectralResult retry = power_iterate(g, std::move(v), tolerance, max_iterations, threads);
  retry.iterations += res.iterations;
  if (!retry.converged && res.value > retry.value) retry.value = res.value;
  return retry;
}

namespace {

EtaResult eta_exact_masks(const Graph& g, int m, int threads) {
  const int n = g.node_count();
  std::vector<uint32_t> adj_mask(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (const int j : g.neighbors(i)) adj_mask[static_cast<size_t>(i)] |= 1u << j;
  }
  const uint32_t last = (n == 32) ? ~0u : ((1u << n) - 1u);
  double best = std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : best) num_threads(std::max(1, threads))
#endif
  for (int64_t ms = 1; ms <= static_cast<int64_t>(last); ++ms) {
    const uint32_t mask = static_cast<uint32_t>(ms);
    const int size = std::popcount(mask);
    if (size > m) continue;
    int boundary = 0;
    uint32_t rest = mask;
    while (rest) {
      const int i = std::countr_zero(rest);
      rest &= rest - 1;
      boundary += std::popcount(adj_mask[static_cast<size_t>(i)] & ~mask);
    }
    const double ratio = static_cast<double>(boundary) / size;
    if (ratio < best) best = ratio;
  }
  (void)threads;
  return {best, true};
}

}  // namespace

EtaResult isoperimetric_exact(const Graph& g, int m, int threads) {
  const int n = g.node_count();
  if (m < 1 || m >= n) throw std::invalid_argument("eta: require 1 <= m < node_count");
  if (n > kEtaExhaustiveCap) {
    throw std::invalid_argument(
        "eta: exact enumeration limited to " + std::to_string(kEtaExhaustiveCap) +
        " nodes; use sampled mode for larger graphs");
  }
  return eta_exact_masks(g, m, threads);
}

EtaResult isoperimetric_exact_serial(const Graph& g, int m) {
  const int n = g.node_count();
  if (m < 1 || m >= n) throw std::invalid_argument("eta: require 1 <= m < node_count");
  if (n > kEtaExhaustiveCap) {
    throw std::invalid_argument("eta: graph too large for exact enumeration");
  }
  return eta_exact_masks(g, m, 1);
}

EtaResult isoperimetric_sampled(const Graph& g, int m, int restarts, uint64_t seed) {
  const int n = g.node_count();
  if (m < 1 || m >= n) throw std::invalid_argument("eta: require 1 <= m < node_count");
  if (restarts < 1) throw std::invalid_argument("eta: need at least one restart");
  RngStream rng(derive_seed(seed, 0x657461));
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> in_set(static_cast<size_t>(n));
  std::vector<int> frontier;
  for (int r = 0; r < restarts; ++r) {
    std::fill(in_set.begin(), in_set.end(), 0);
    frontier.clear();
    int v = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    int size = 0;
    long long boundary = 0;
    for (;;) {
      in_set[static_cast<size_t>(v)] = 1;
      ++size;
      int inside = 0;
      for (const int w : g.neighbors(v)) {
        if (in_set[static_cast<size_t>(w)]) {
          ++inside;
        } else {
          frontier.push_back(w);
        }
      }
      boundary += g.degree(v) - 2 * inside;
      best = std::min(best, static_cast<double>(boundary) / size);
      if (size == m || best == 0.0) break;
      // Frontier entries may be stale duplicates already swallowed by the set.
      int next = -1;
      while (!frontier.empty()) {
        const size_t pick = rng.below(frontier.size());
        const int cand = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        if (!in_set[static_cast<size_t>(cand)]) {
          next = cand;
          break;
        }
      }
      if (next < 0) break;  // component exhausted; ratio 0 was recorded above
      v = next;
    }
    if (best == 0.0) break;
  }
  return {best, false};
}

EtaResult isoperimetric_constant(const Graph& g, int m, EtaMode mode, int threads,
                                 int restarts, uint64_t seed) {
  return mode == EtaMode::Exact ? isoperimetric_exact(g, m, threads)
                                : isoperimetric_sampled(g, m, restarts, seed);
}

GraphMetrics compute_metrics(const Graph& g, std::span<const int> eta_sizes,
                             EtaMode eta_mode, double lambda_tolerance,
                             int threads, uint64_t seed) {
  GraphMetrics metrics;
  metrics.d_max = g.max_degree();
  metrics.d_avg = g.avg_degree();
  const SpectralResult sr = spectral_radius(g, lambda_tolerance, 20000, threads);
  metrics.lambda1 = sr.value;
  metrics.lambda1_tolerance = lambda_tolerance;

  const double slack = 100.0 * lambda_tolerance + 1e-9;
  const double lower = std::max(metrics.d_avg, std::sqrt(static_cast<double>(metrics.d_max)));
  if (metrics.lambda1 > metrics.d_max + slack || lower > metrics.lambda1 + slack) {
    throw std::runtime_error("metrics: spectral estimate violates d_avg/sqrt(d_max) <= lambda1 <= d_max");
  }
  for (const int m : eta_sizes) {
    metrics.eta[m] = isoperimetric_constant(g, m, eta_mode, threads, 200, seed);
  }
  return metrics;
}

}  // namespace epinet
