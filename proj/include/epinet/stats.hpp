#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "epinet/simulate.hpp"

namespace epinet {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Percentile bootstrap interval for the sample mean; deterministic under seed.
Interval bootstrap_ci(std::span<const double> samples, double level, int resamples,
                      uint64_t seed);

double mean_of(std::span<const double> xs);
double stderr_of(std::span<const double> xs);
double median_of(std::vector<double> xs);  // by value: sorts its copy

// Summary of one batch. Censored runs never enter the moments; they are
// reported through censored_fraction alongside every statistic.
struct BatchSummary {
  int runs = 0;
  int censored = 0;
  double censored_fraction = 0.0;
  double mean = 0.0;    // uncensored extinction times
  double se = 0.0;
  double median = 0.0;
  Interval ci{};
  double mean_eventual = 0.0;  // uncensored eventual_infected
  double se_eventual = 0.0;
};

BatchSummary summarize(std::span<const RunOutcome> outcomes, double ci_level = 0.95,
                       int resamples = 1000, uint64_t seed = 1);

enum class FitFamily { Constant, Logarithmic, PowerLaw, StretchedExponential };

std::string to_string(FitFamily family);

struct ScalingPoint {
  double n = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;  // 0 means "unknown"; CI then falls back to residuals
};

struct FamilyFit {
  FitFamily family = FitFamily::Constant;
  std::map<std::string, double> params;
  double rss = 0.0;   // weighted residual sum of squares on log-transformed data
  double aicc = 0.0;  // +inf when the family cannot be supported by N points
};

struct ScalingFit {
  FitFamily best = FitFamily::Constant;
  std::vector<FamilyFit> families;
  // Power-law exponent with its 95% interval, reported for every input
  // (propagated from the per-point standard errors when provided).
  double exponent = 0.0;
  double exponent_lo = 0.0;
  double exponent_hi = 0.0;

  const FamilyFit& fit_for(FitFamily family) const;
};

// Least-squares fits of T ~ c, T ~ c*log n, T ~ c*n^k and log T ~ b + c*n^a
// (a over a small grid) on log-transformed means; family selection by
// small-sample-corrected information criterion, ties broken toward fewer
// parameters. Requires >= 3 distinct n values and positive means.
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

}  // namespace epinet
