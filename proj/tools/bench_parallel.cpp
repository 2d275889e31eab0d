// Benchmark comparing the serial reference kernels against their OpenMP
// counterparts: batch simulation, power iteration, exact eta enumeration.

#include <chrono>
#include <cstdio>
#include <string>

#include "epinet/graph.hpp"
#include "epinet/metrics.hpp"
#include "epinet/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace epinet;

namespace {

template <typename Fn>
double time_of(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  return dt.count();
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-24s %10.3fs %10.3fs %8.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 0;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  const bool quick = !(argc > 1 && std::string(argv[1]) == "--full");

  std::printf("kernel                      serial   parallel  speedup  (%d threads)\n",
              threads > 0 ? threads : 1);

  {
    const Graph g = generate_gnp(quick ? 500 : 2000, 8.0 / (quick ? 500 : 2000), 7);
    SimParams p;
    p.beta = 0.12;
    p.strategy.kind = StrategyKind::Uniform;
    p.strategy.mu = 1.0;
    p.initial_infected = {0, 1, 2};
    p.horizon.max_events = 200000;
    const int reps = quick ? 400 : 2000;
    std::vector<RunOutcome> a, b;
    const double ts = time_of([&] { a = simulate_batch_serial(g, p, reps, 42); });
    const double tp = time_of([&] { b = simulate_batch(g, p, reps, 42, threads); });
    row("simulate_batch", ts, tp);
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i].extinction_time != b[i].extinction_time) {
        std::printf("MISMATCH at replication %zu\n", i);
        return 1;
      }
    }
  }
  {
    const int n = quick ? 20000 : 100000;
    const Graph g = generate_gnp(n, 12.0 / n, 11);
    SpectralResult s1, s2;
    const double ts = time_of([&] { s1 = spectral_radius(g, 1e-12, 400, 1); });
    const double tp = time_of([&] { s2 = spectral_radius(g, 1e-12, 400, threads); });
    row("power_iteration", ts, tp);
    if (s1.value != s2.value) {
      std::printf("MISMATCH: %.17g vs %.17g\n", s1.value, s2.value);
      return 1;
    }
  }
  {
    const Graph g = generate_gnp(kEtaExhaustiveCap, 0.25, 3);
    const int m = kEtaExhaustiveCap / 2;
    EtaResult e1, e2;
    const double ts = time_of([&] { e1 = isoperimetric_exact_serial(g, m); });
    const double tp = time_of([&] { e2 = isoperimetric_exact(g, m, threads); });
    row("eta_exact_enumeration", ts, tp);
    if (e1.value != e2.value) {
      std::printf("MISMATCH: %.17g vs %.17g\n", e1.value, e2.value);
      return 1;
    }
  }
  return 0;
}
