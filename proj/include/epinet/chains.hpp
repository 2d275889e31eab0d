#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epinet/metrics.hpp"
#include "epinet/strategy.hpp"

namespace epinet {

enum class Boundary { AbsorbingAtZero, ReflectingAtZero };

// Birth-death chain on {0,...,state_max} with reflection at the top
// (p_{n,n-1} = 1). Rates are stored per state; the embedded jump chain has
// p_{i,i+1} = up/(up+down) and p_{i,i-1} = down/(up+down).
struct BirthDeathChain {
  int state_max = 0;
  std::vector<double> up;    // up[i] defined for 1 <= i <= n-1; up[n] forced to 0
  std::vector<double> down;  // down[i] > 0 for 1 <= i <= n
  Boundary boundary = Boundary::AbsorbingAtZero;

  double jump_up_prob(int i) const { return up[i] / (up[i] + down[i]); }
  double jump_down_prob(int i) const { return down[i] / (up[i] + down[i]); }
  double total_rate(int i) const { return up[i] + down[i]; }

  BirthDeathChain reflected() const;  // same rates, reflecting boundary
  void validate() const;
};

using RateFn = std::function<double(int)>;

BirthDeathChain make_chain(int state_max, const RateFn& up, const RateFn& down,
                           Boundary boundary = Boundary::AbsorbingAtZero);

// Stationary distribution of the reflected chain's embedded jump chain,
// solved from detailed balance in log space (p_{0,1} = 1).
std::vector<double> stationary_reflected(const BirthDeathChain& chain);

// log E[number of jumps to hit 0 from state 1] for the absorbing chain,
// via the closed form  E = sum_{k=1}^n prod_{i=1}^k p_{i-1,i}/p_{i,i-1}
// with p_{0,1} taken as 1. Cross-checked internally against 1/pi~(0) - 1
// of the reflected companion.
double log_expected_absorption_from_1(const BirthDeathChain& chain);
// exp() of the above; +inf when the log value overflows a double.
double expected_absorption_from_1(const BirthDeathChain& chain);

enum class TimeScale { Jumps, Continuous };

// Expected hitting "time" of 0 from state L by an exact first-step-analysis
// tridiagonal solve: jump count (increment 1 per transition) or continuous
// time (increment 1/total_rate per visit).
double expected_absorption_from_state(const BirthDeathChain& chain, int start,
                                      TimeScale scale = TimeScale::Jumps);

struct ChainMcResult {
  double mean_steps = 0.0;
  double se_steps = 0.0;
  double mean_time = 0.0;
  double se_time = 0.0;
  int paths = 0;
};

// Monte Carlo over the embedded jump chain (with exponential holds for the
// continuous clock); the sanity oracle for the closed forms.
ChainMcResult simulate_jump_chain(const BirthDeathChain& chain, int start, int paths,
                                  uint64_t seed);

// Dominating chain for the infected count:  i -> i+1 at beta*d_max*i + mu,
// i -> i-1 at i. Its absorption time upper-bounds the SIS extinction time on
// any graph with that d_max under any strategy of budget <= mu.
BirthDeathChain sis_upper_chain(double beta, int d_max, double mu, int n);

// Under-dominating chain on {0,...,m}:  i -> i+1 at beta*eta(i)*i + mu(i),
// i -> i-1 at i, where eta(i) never exceeds the target graph's isoperimetric
// value and mu(i) never exceeds the strategy's effective success rate.
BirthDeathChain sis_lower_chain(double beta, const RateFn& eta_values,
                                const RateFn& mu_values, int m);

// Majorant series  sum_k (beta*d_max)^k (k+1)^(mu/(beta*d_max)); partial sum
// to n terms plus a geometric tail bound. Throws when beta*d_max >= 1.
double subcritical_series_bound(double beta, int d_max, double mu, int n);

enum class Regime { Subcritical, CriticalCandidate, SupercriticalCandidate, Unclassified };

std::string to_string(Regime regime);

struct RegimeCertificate {
  Regime regime = Regime::Unclassified;
  std::string inequality;  // which test fired
  double margin = 0.0;     // numeric slack of that inequality
  std::string diagnostic;  // set when Unclassified
};

// Classifies (beta, graph metrics, strategy) into the three regimes:
//   Subcritical           beta*d_max < 1 with a constant budget,
//   CriticalCandidate     beta*lambda1 < 1 <= beta*d_max with a constant budget,
//   SupercriticalCandidate linear-scaling budget with beta*eta(floor(n^alpha)) + gamma > 1.
RegimeCertificate regime_classify(double beta, const GraphMetrics& metrics, int node_count,
                                  const StrategySpec& strategy, double alpha);

}  // namespace epinet
