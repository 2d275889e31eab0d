#pragma once

#include <cstdint>
#include <map>

#include "epinet/graph.hpp"

namespace epinet {

// Exact subset enumeration for eta is limited to this many nodes
// (<= ~2^20 subsets); larger graphs must use the sampled upper bound.
inline constexpr int kEtaExhaustiveCap = 20;

struct SpectralResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Power-iteration estimate of the adjacency spectral radius. Starts from the
// all-ones vector (nonzero Perron overlap on every graph with an edge) and
// retries once from a fixed pseudorandom vector if that stalls. The estimate
// ||Av||/||v|| is a Rayleigh quotient of A^2, so it approaches lambda1 from
// below and never exceeds it. `threads` > 1 parallelizes the mat-vec rows;
// results are bitwise identical for any thread count.
SpectralResult spectral_radius(const Graph& g, double tolerance = 1e-10,
                               int max_iterations = 20000, int threads = 1);

struct EtaResult {
  double value = 0.0;
  bool exact = false;
};

enum class EtaMode { Exact, Sampled };

// eta(m) = min over nonempty S, |S| <= m, of |E(S,S^c)| / |S|.
// Exact mode enumerates every subset (requires node_count <= kEtaExhaustiveCap
// and throws otherwise, directing the caller to sampled mode).
EtaResult isoperimetric_exact(const Graph& g, int m, int threads = 1);
// Serial reference for the enumeration kernel, kept for tests and benchmarks.
EtaResult isoperimetric_exact_serial(const Graph& g, int m);
// Upper bound from randomly grown candidate sets; exact=false.
EtaResult isoperimetric_sampled(const Graph& g, int m, int restarts, uint64_t seed);

EtaResult isoperimetric_constant(const Graph& g, int m, EtaMode mode,
                                 int threads = 1, int restarts = 200,
                                 uint64_t seed = 0);

struct GraphMetrics {
  int d_max = 0;
  double d_avg = 0.0;
  double lambda1 = 0.0;
  double lambda1_tolerance = 0.0;
  std::map<int, EtaResult> eta;  // only requested m values
};

// Computes d_max, d_avg, lambda1 and eta at the requested m values, and
// validates the spectral sandwich max(d_avg, sqrt(d_max)) <= lambda1 <= d_max
// within tolerance.
GraphMetrics compute_metrics(const Graph& g, std::span<const int> eta_sizes,
                             EtaMode eta_mode = EtaMode::Exact,
                             double lambda_tolerance = 1e-10, int threads = 1,
                             uint64_t seed = 0);

}  // namespace epinet
