#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>

#include "epinet/rng.hpp"
#include "epinet/strategy.hpp"

namespace epinet::oracle {

double lambda1_dense(const Graph& g) {
  const int n = g.node_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (const int v : g.neighbors(u)) a(u, v) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  return solver.eigenvalues().maxCoeff();
}

double eta_bruteforce(const Graph& g, int m) {
  const int n = g.node_count();
  const auto edges = g.edges();
  std::vector<char> in_set(static_cast<size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int)> recurse = [&](int idx, int size) {
    if (idx == n) {
      if (size == 0) return;
      int boundary = 0;
      for (const auto& [u, v] : edges) {
        if (in_set[static_cast<size_t>(u)] != in_set[static_cast<size_t>(v)]) ++boundary;
      }
      best = std::min(best, static_cast<double>(boundary) / size);
      return;
    }
    recurse(idx + 1, size);
    if (size < m) {
      in_set[static_cast<size_t>(idx)] = 1;
      recurse(idx + 1, size + 1);
      in_set[static_cast<size_t>(idx)] = 0;
    }
  };
  recurse(0, 0);
  return best;
}

RunOutcome naive_simulate(const Graph& g, const SimParams& params, uint64_t seed) {
  const int n = g.node_count();
  RunOutcome out;
  out.seed = seed;
  if (params.initial_infected.empty()) return out;

  std::vector<Compartment> comp(static_cast<size_t>(n), Compartment::Susceptible);
  for (const int v : params.initial_infected) comp[static_cast<size_t>(v)] = Compartment::Infected;

  StrategyRuntime strategy(params.strategy, g, params.beta, seed);
  RngStream rng(derive_seed(seed, 0x6e616976, 7));
  std::vector<double> external(static_cast<size_t>(n), 0.0);
  std::vector<double> rate(static_cast<size_t>(n), 0.0);
  double time = 0.0;
  int peak = 0;

  for (;;) {
    int infected = 0;
    for (const Compartment c : comp) infected += c == Compartment::Infected;
    peak = std::max(peak, infected);
    if (infected == 0) break;

    strategy.fill_rates(comp, infected, external);
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
      double r = 0.0;
      if (comp[static_cast<size_t>(v)] == Compartment::Infected) {
        r = 1.0;
      } else if (comp[static_cast<size_t>(v)] == Compartment::Susceptible) {
        int pressure = 0;
        for (const int w : g.neighbors(v)) {
          pressure += comp[static_cast<size_t>(w)] == Compartment::Infected;
        }
        r = params.beta * pressure + external[static_cast<size_t>(v)];
      }
      rate[static_cast<size_t>(v)] = r;
      total += r;
    }

    const double wait = rng.exponential(total);
    if (time + wait > params.horizon.max_time) {
      time = params.horizon.max_time;
      out.censored = true;
      break;
    }
    time += wait;
    const double x = rng.uniform01() * total;
    double acc = 0.0;
    int chosen = -1;
    for (int v = 0; v < n; ++v) {
      if (rate[static_cast<size_t>(v)] <= 0.0) continue;
      acc += rate[static_cast<size_t>(v)];
      chosen = v;
      if (acc > x) break;
    }
    if (comp[static_cast<size_t>(chosen)] == Compartment::Infected) {
      comp[static_cast<size_t>(chosen)] =
          params.model == Model::SIS ? Compartment::Susceptible : Compartment::Resistant;
    } else {
      comp[static_cast<size_t>(chosen)] = Compartment::Infected;
    }
    ++out.event_count;
    if (out.event_count >= params.horizon.max_events) {
      int still = 0;
      for (const Compartment c : comp) still += c == Compartment::Infected;
      if (still > 0) {
        out.censored = true;
        break;
      }
    }
  }

  out.extinction_time = time;
  if (params.model == Model::SIR) {
    int resistant = 0;
    for (const Compartment c : comp) resistant += c == Compartment::Resistant;
    out.eventual_infected = resistant;
  } else {
    out.eventual_infected = peak;
  }
  return out;
}

namespace {

// Gaussian elimination with partial pivoting; A is row-major n x n.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (pivot != col) {
      for (size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    const double d = a[col * n + col];
    if (d == 0.0) throw std::runtime_error("oracle: singular system");
    for (size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / d;
      if (f == 0.0) continue;
      for (size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (size_t c = ri + 1; c < n; ++c) acc -= a[ri * n + c] * x[c];
    x[ri] = acc / a[ri * n + ri];
  }
  return x;
}

}  // namespace

double star_sis_expected_extinction(int leaves, double beta, double mu, bool hub_start) {
  const int m = leaves;
  const size_t states = 2 * static_cast<size_t>(m + 1);
  auto idx = [m](int hub, int l) { return static_cast<size_t>(hub) * (m + 1) + l; };
  std::vector<double> a(states * states, 0.0);
  std::vector<double> b(states, 0.0);
  for (int hub = 0; hub <= 1; ++hub) {
    for (int l = 0; l <= m; ++l) {
      const size_t s = idx(hub, l);
      if (hub == 0 && l == 0) {  // absorbed
        a[s * states + s] = 1.0;
        continue;
      }
      std::vector<std::pair<size_t, double>> moves;
      if (hub == 1) {
        const double up = beta * (m - l) + (l < m ? mu : 0.0);
        if (up > 0.0) moves.emplace_back(idx(1, l + 1), up);
        moves.emplace_back(idx(0, l), 1.0);
        if (l > 0) moves.emplace_back(idx(1, l - 1), static_cast<double>(l));
      } else {
        moves.emplace_back(idx(1, l), beta * l + mu);
        if (l > 0) moves.emplace_back(idx(0, l - 1), static_cast<double>(l));
      }
      double total = 0.0;
      for (const auto& [t, r] : moves) total += r;
      a[s * states + s] = total;
      for (const auto& [t, r] : moves) a[s * states + t] -= r;
      b[s] = 1.0;
    }
  }
  const auto h = solve_dense(std::move(a), std::move(b));
  return hub_start ? h[idx(1, 0)] : h[idx(0, 1)];
}

double star_sir_expected_eventual(int leaves, double beta, double mu, bool hub_start) {
  const int m = leaves;
  // Backward induction over s = infected + resistant leaves (nondecreasing),
  // hub phase 0->1->2 (S,I,R; also monotone), infected-leaf recovery within a
  // layer. g[phase][li] = E[final resistant count | state].
  std::vector<std::vector<double>> next;
  std::vector<std::vector<double>> layer1, layer0;
  for (int s = m; s >= 0; --s) {
    std::vector<std::vector<double>> cur(3, std::vector<double>(static_cast<size_t>(s) + 1, 0.0));
    const int ls = m - s;  // susceptible leaves
    for (int phase = 2; phase >= 0; --phase) {
      for (int li = 0; li <= s; ++li) {
        const int lr = s - li;
        if (li == 0 && phase != 1) {
          cur[phase][0] = lr + (phase == 2 ? 1.0 : 0.0);
          continue;
        }
        std::vector<std::pair<double, double>> terms;  // (rate, value)
        if (phase == 1) {
          if (ls > 0) terms.emplace_back(beta * ls + mu, next[1][static_cast<size_t>(li) + 1]);
          terms.emplace_back(1.0, cur[2][static_cast<size_t>(li)]);
          if (li > 0) terms.emplace_back(li, cur[1][static_cast<size_t>(li) - 1]);
        } else if (phase == 0) {
          terms.emplace_back(beta * li + mu, cur[1][static_cast<size_t>(li)]);
          if (li > 0) terms.emplace_back(li, cur[0][static_cast<size_t>(li) - 1]);
        } else {
          if (ls > 0) terms.emplace_back(mu, next[2][static_cast<size_t>(li) + 1]);
          if (li > 0) terms.emplace_back(li, cur[2][static_cast<size_t>(li) - 1]);
        }
        double total = 0.0, acc = 0.0;
        for (const auto& [r, v] : terms) {
          total += r;
          acc += r * v;
        }
        cur[phase][static_cast<size_t>(li)] = acc / total;
      }
    }
    next = cur;
    if (s == 1) layer1 = cur;
    if (s == 0) layer0 = cur;
  }
  return hub_start ? layer0[1][0] : layer1[0][1];
}

double bd_absorption_dense(const std::vector<double>& up, const std::vector<double>& down,
                           int start, bool continuous) {
  const int n = static_cast<int>(down.size()) - 1;
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> b(static_cast<size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    const double u = (i < n) ? up[static_cast<size_t>(i)] : 0.0;
    const double d = down[static_cast<size_t>(i)];
    const size_t r = static_cast<size_t>(i) - 1;
    a[r * n + r] = u + d;
    if (i < n) a[r * n + r + 1] = -u;
    if (i > 1) a[r * n + r - 1] = -d;
    b[r] = continuous ? 1.0 : (u + d);
  }
  const auto h = solve_dense(std::move(a), std::move(b));
  return h[static_cast<size_t>(start) - 1];
}

}  // namespace epinet::oracle
