#include "epinet/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epinet/rng.hpp"

namespace epinet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum exp(xs)) without overflow; xs may contain -inf.
double log_sum_exp(const std::vector<double>& xs) {
  double m = -kInf;
  for (const double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double acc = 0.0;
  for (const double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

// Prefix sums of log(p_{k-1,k}/p_{k,k-1}) for k = 1..n, with p_{0,1} = 1.
// These are simultaneously log(pi~(k)/pi~(0)) for the reflected companion and
// the log terms of the absorption-time closed form.
std::vector<double> log_balance_prefixes(const BirthDeathChain& chain) {
  const int n = chain.state_max;
  std::vector<double> prefix(static_cast<size_t>(n) + 1, 0.0);
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double log_up_prev =
        (k == 1) ? 0.0 : std::log(chain.up[static_cast<size_t>(k) - 1]) -
                             std::log(chain.total_rate(k - 1));
    const double log_down = std::log(chain.down[static_cast<size_t>(k)]) -
                            std::log(chain.total_rate(k));
    acc += log_up_prev - log_down;
    prefix[static_cast<size_t>(k)] = acc;
  }
  return prefix;
}

}  // namespace

void BirthDeathChain::validate() const {
  if (state_max < 1) throw std::invalid_argument("chain: state_max must be >= 1");
  if (up.size() != static_cast<size_t>(state_max) + 1 ||
      down.size() != static_cast<size_t>(state_max) + 1) {
    throw std::invalid_argument("chain: rate vectors must have state_max+1 entries");
  }
  for (int i = 1; i <= state_max; ++i) {
    if (!(down[static_cast<size_t>(i)] > 0.0)) {
      throw std::invalid_argument("chain: down rate must be > 0 at state " + std::to_string(i));
    }
    if (up[static_cast<size_t>(i)] < 0.0) {
      throw std::invalid_argument("chain: negative up rate at state " + std::to_string(i));
    }
  }
}

BirthDeathChain BirthDeathChain::reflected() const {
  BirthDeathChain copy = *this;
  copy.boundary = Boundary::ReflectingAtZero;
  return copy;
}

BirthDeathChain make_chain(int state_max, const RateFn& up, const RateFn& down,
                           Boundary boundary) {
  BirthDeathChain chain;
  chain.state_max = state_max;
  chain.boundary = boundary;
  chain.up.assign(static_cast<size_t>(state_max) + 1, 0.0);
  chain.down.assign(static_cast<size_t>(state_max) + 1, 0.0);
  for (int i = 1; i <= state_max; ++i) {
    if (i < state_max) chain.up[static_cast<size_t>(i)] = up(i);
    chain.down[static_cast<size_t>(i)] = down(i);
  }
  chain.validate();
  return chain;
}

std::vector<double> stationary_reflected(const BirthDeathChain& chain) {
  if (chain.boundary != Boundary::ReflectingAtZero) {
    throw std::invalid_argument("stationary: chain must reflect at 0");
  }
  chain.validate();
  for (int i = 1; i < chain.state_max; ++i) {
    if (chain.up[static_cast<size_t>(i)] == 0.0) {
      throw std::invalid_argument(
          "stationary: zero up rate at interior state " + std::to_string(i) +
          " decomposes the chain");
    }
  }
  const std::vector<double> prefix = log_balance_prefixes(chain);
  const double lse = log_sum_exp(prefix);
  std::vector<double> pi(prefix.size());
  for (size_t k = 0; k < prefix.size(); ++k) pi[k] = std::exp(prefix[k] - lse);
  return pi;
}

double log_expected_absorption_from_1(const BirthDeathChain& chain) {
  if (chain.boundary != Boundary::AbsorbingAtZero) {
    throw std::invalid_argument("absorption: chain must be absorbing at 0");
  }
  chain.validate();
  std::vector<double> prefix = log_balance_prefixes(chain);
  prefix.erase(prefix.begin());  // closed form sums k = 1..n
  const double log_value = log_sum_exp(prefix);

  // Ehrenfest cross-check against the reflected companion whenever the chain
  // is irreducible and the quantities are representable.
  bool irreducible = true;
  for (int i = 1; i < chain.state_max; ++i) {
    if (chain.up[static_cast<size_t>(i)] == 0.0) irreducible = false;
  }
  if (irreducible && log_value < 690.0) {
    const std::vector<double> pi = stationary_reflected(chain.reflected());
    if (pi[0] > 0.0) {
      const double via_pi = 1.0 / pi[0] - 1.0;
      const double direct = std::exp(log_value);
      if (std::abs(via_pi - direct) > 1e-9 * std::max(1.0, std::abs(direct))) {
        throw std::logic_error("absorption: closed form disagrees with Ehrenfest identity");
      }
    }
  }
  return log_value;
}

double expected_absorption_from_1(const BirthDeathChain& chain) {
  return std::exp(log_expected_absorption_from_1(chain));
}

double expected_absorption_from_state(const BirthDeathChain& chain, int start,
                                      TimeScale scale) {
  if (chain.boundary != Boundary::AbsorbingAtZero) {
    throw std::invalid_argument("absorption: chain must be absorbing at 0");
  }
  chain.validate();
  const int n = chain.state_max;
  if (start < 1 || start > n) throw std::invalid_argument("absorption: start outside {1..n}");

  // First-step analysis, h(0) = 0:
  //   (up+down) h(i) = inc(i) + up(i) h(i+1) + down(i) h(i-1)
  // with inc = up+down for jump counts, 1 for continuous time. Tridiagonal
  // forward elimination expressing h(i) = alpha(i) + beta(i) h(i+1).
  std::vector<double> alpha(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> beta_c(static_cast<size_t>(n) + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double up = chain.up[static_cast<size_t>(i)];
    const double down = chain.down[static_cast<size_t>(i)];
    const double rate = up + down;
    const double inc = (scale == TimeScale::Jumps) ? rate : 1.0;
    const double denom = rate - down * beta_c[static_cast<size_t>(i) - 1];
    alpha[static_cast<size_t>(i)] =
        (inc + down * alpha[static_cast<size_t>(i) - 1]) / denom;
    beta_c[static_cast<size_t>(i)] = up / denom;
  }
  std::vector<double> h(static_cast<size_t>(n) + 1, 0.0);
  for (int i = n; i >= 1; --i) {
    const double next = (i == n) ? 0.0 : h[static_cast<size_t>(i) + 1];
    h[static_cast<size_t>(i)] = alpha[static_cast<size_t>(i)] +
                                beta_c[static_cast<size_t>(i)] * next;
  }
  return h[static_cast<size_t>(start)];
}

ChainMcResult simulate_jump_chain(const BirthDeathChain& chain, int start, int paths,
                                  uint64_t seed) {
  if (chain.boundary != Boundary::AbsorbingAtZero) {
    throw std::invalid_argument("chain mc: chain must be absorbing at 0");
  }
  chain.validate();
  if (start < 1 || start > chain.state_max) throw std::invalid_argument("chain mc: bad start");
  if (paths < 1) throw std::invalid_argument("chain mc: need at least one path");

  RngStream rng(derive_seed(seed, 0x62646d63));
  double sum_steps = 0.0, sq_steps = 0.0, sum_time = 0.0, sq_time = 0.0;
  for (int p = 0; p < paths; ++p) {
    int state = start;
    uint64_t steps = 0;
    double t = 0.0;
    while (state > 0) {
      const double rate = chain.total_rate(state);
      t += rng.exponential(rate);
      const double x = rng.uniform01() * rate;
      state += (x < chain.up[static_cast<size_t>(state)]) ? 1 : -1;
      ++steps;
    }
    const double s = static_cast<double>(steps);
    sum_steps += s;
    sq_steps += s * s;
    sum_time += t;
    sq_time += t * t;
  }
  ChainMcResult res;
  res.paths = paths;
  res.mean_steps = sum_steps / paths;
  res.mean_time = sum_time / paths;
  if (paths > 1) {
    const double var_s = (sq_steps - paths * res.mean_steps * res.mean_steps) / (paths - 1);
    const double var_t = (sq_time - paths * res.mean_time * res.mean_time) / (paths - 1);
    res.se_steps = std::sqrt(std::max(0.0, var_s) / paths);
    res.se_time = std::sqrt(std::max(0.0, var_t) / paths);
  }
  return res;
}

BirthDeathChain sis_upper_chain(double beta, int d_max, double mu, int n) {
  if (beta < 0.0 || mu < 0.0 || d_max < 0 || n < 1) {
    throw std::invalid_argument("upper chain: invalid parameters");
  }
  return make_chain(
      n, [=](int i) { return beta * d_max * i + mu; },
      [](int i) { return static_cast<double>(i); }, Boundary::AbsorbingAtZero);
}

BirthDeathChain sis_lower_chain(double beta, const RateFn& eta_values,
                                const RateFn& mu_values, int m) {
  if (beta < 0.0 || m < 1) throw std::invalid_argument("lower chain: invalid parameters");
  return make_chain(
      m, [&, beta](int i) { return beta * eta_values(i) * i + mu_values(i); },
      [](int i) { return static_cast<double>(i); }, Boundary::AbsorbingAtZero);
}

double subcritical_series_bound(double beta, int d_max, double mu, int n) {
  const double r0 = beta * d_max;
  if (r0 >= 1.0) {
    throw std::invalid_argument("series bound: beta*d_max must be < 1 (series diverges)");
  }
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("series bound: requires beta*d_max > 0");
  }
  if (mu < 0.0 || n < 1) throw std::invalid_argument("series bound: invalid parameters");
  const double c = mu / r0;

  // Grow n until the term ratio is safely geometric, then bound the tail.
  int terms = n;
  auto ratio_at = [&](int k) {
    return r0 * std::pow(static_cast<double>(k + 2) / (k + 1), c);
  };
  const double target = 0.5 * (1.0 + r0);
  while (ratio_at(terms) >= target && terms < (1 << 28)) terms *= 2;

  std::vector<double> log_terms;
  log_terms.reserve(static_cast<size_t>(terms) + 1);
  const double log_r = std::log(r0);
  for (int k = 1; k <= terms; ++k) {
    log_terms.push_back(k * log_r + c * std::log(static_cast<double>(k) + 1.0));
  }
  const double r_tail = ratio_at(terms);
  const double log_tail = (terms + 1) * log_r +
                          c * std::log(static_cast<double>(terms) + 2.0) -
                          std::log1p(-r_tail);
  log_terms.push_back(log_tail);
  return std::exp(log_sum_exp(log_terms));
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Subcritical: return "SUBCRITICAL";
    case Regime::CriticalCandidate: return "CRITICAL-CANDIDATE";
    case Regime::SupercriticalCandidate: return "SUPERCRITICAL-CANDIDATE";
    case Regime::Unclassified: return "UNCLASSIFIED";
  }
  return "?";
}

RegimeCertificate regime_classify(double beta, const GraphMetrics& metrics, int node_count,
                                  const StrategySpec& strategy, double alpha) {
  RegimeCertificate cert;
  const double bd = beta * metrics.d_max;
  const double bl = beta * metrics.lambda1;

  if (strategy.kind == StrategyKind::LinearScaling) {
    const int m = static_cast<int>(std::floor(std::pow(static_cast<double>(node_count), alpha)));
    const auto it = metrics.eta.find(m);
    if (it == metrics.eta.end()) {
      cert.diagnostic = "eta(" + std::to_string(m) + ") not present in metrics";
      return cert;
    }
    const double lhs = beta * it->second.value + strategy.gamma;
    if (lhs > 1.0) {
      cert.regime = Regime::SupercriticalCandidate;
      cert.inequality = "beta*eta(floor(n^alpha)) + gamma > 1";
      cert.margin = lhs - 1.0;
      return cert;
    }
    cert.diagnostic = "linear-scaling budget but beta*eta + gamma = " + std::to_string(lhs);
    return cert;
  }

  if (bd < 1.0) {
    cert.regime = Regime::Subcritical;
    cert.inequality = "beta*d_max < 1";
    cert.margin = 1.0 - bd;
    return cert;
  }
  if (bl < 1.0) {
    cert.regime = Regime::CriticalCandidate;
    cert.inequality = "beta*lambda1 < 1 <= beta*d_max";
    cert.margin = 1.0 - bl;
    cert.diagnostic = "critical-claim strength beta*d_max = " + std::to_string(bd);
    return cert;
  }
  cert.diagnostic = "beta*lambda1 >= 1: above the certified bands";
  return cert;
}

}  // namespace epinet
