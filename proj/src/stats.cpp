#include "epinet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epinet/rng.hpp"

namespace epinet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double mean_of(std::span<const double> xs) {
  double acc = 0.0;
  for (const double x : xs) acc += x;
  return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

double stderr_of(std::span<const double> xs) {
  const size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (const double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(n - 1) / static_cast<double>(n));
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Interval bootstrap_ci(std::span<const double> samples, double level, int resamples,
                      uint64_t seed) {
  if (samples.size() < 2) throw std::invalid_argument("bootstrap: need at least 2 samples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap: level in (0,1)");
  if (resamples < 1) throw std::invalid_argument("bootstrap: resamples must be >= 1");

  RngStream rng(derive_seed(seed, 0x62737472));
  const size_t n = samples.size();
  std::vector<double> means(static_cast<size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += samples[rng.below(n)];
    means[static_cast<size_t>(r)] = acc / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2.0;
  auto rank = [&](double q) {
    const auto idx = static_cast<size_t>(q * (resamples - 1) + 0.5);
    return means[std::min(idx, means.size() - 1)];
  };
  return {rank(tail), rank(1.0 - tail)};
}

BatchSummary summarize(std::span<const RunOutcome> outcomes, double ci_level,
                       int resamples, uint64_t seed) {
  BatchSummary s;
  s.runs = static_cast<int>(outcomes.size());
  std::vector<double> times, eventual;
  times.reserve(outcomes.size());
  for (const RunOutcome& r : outcomes) {
    if (r.censored) {
      ++s.censored;
      continue;
    }
    times.push_back(r.extinction_time);
    eventual.push_back(static_cast<double>(r.eventual_infected));
  }
  s.censored_fraction = s.runs ? static_cast<double>(s.censored) / s.runs : 0.0;
  if (!times.empty()) {
    s.mean = mean_of(times);
    s.se = stderr_of(times);
    s.median = median_of(times);
    s.mean_eventual = mean_of(eventual);
    s.se_eventual = stderr_of(eventual);
    if (times.size() >= 2) s.ci = bootstrap_ci(times, ci_level, resamples, seed);
  }
  return s;
}

std::string to_string(FitFamily family) {
  switch (family) {
    case FitFamily::Constant: return "constant";
    case FitFamily::Logarithmic: return "log";
    case FitFamily::PowerLaw: return "power_law";
    case FitFamily::StretchedExponential: return "stretched_exponential";
  }
  return "?";
}

const FamilyFit& ScalingFit::fit_for(FitFamily family) const {
  for (const FamilyFit& f : families) {
    if (f.family == family) return f;
  }
  throw std::logic_error("fit_scaling: family missing");
}

namespace {

struct Wls {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_var = 0.0;  // from the per-point variances (known-sigma WLS)
  double rss = 0.0;        // weighted residual sum of squares
};

// Weighted least squares y ~ intercept + slope * x.
Wls wls_line(const std::vector<double>& x, const std::vector<double>& y,
             const std::vector<double>& w) {
  const size_t n = x.size();
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  Wls fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.slope_var = 1.0 / sxx;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    fit.rss += w[i] * r * r;
  }
  return fit;
}

double wls_mean_rss(const std::vector<double>& y, const std::vector<double>& w,
                    double* mean_out) {
  double sw = 0.0, swy = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    sw += w[i];
    swy += w[i] * y[i];
  }
  const double m = swy / sw;
  if (mean_out) *mean_out = m;
  double rss = 0.0;
  for (size_t i = 0; i < y.size(); ++i) rss += w[i] * (y[i] - m) * (y[i] - m);
  return rss;
}

// Small-sample-corrected information criterion on the log-transformed data.
// With per-point sigmas the weighted RSS is the chi^2 of a known-variance
// Gaussian likelihood; without them the usual N*log(RSS/N) form applies.
double aicc(double rss, int n_points, int k_params, bool known_sigma) {
  if (n_points - k_params - 1 < 1) return kInf;  // unsupportable with these points
  const double base = known_sigma
                          ? rss
                          : n_points * std::log(std::max(rss, 1e-300) / n_points);
  return base + 2.0 * k_params +
         2.0 * k_params * (k_params + 1.0) / (n_points - k_params - 1.0);
}

}  // namespace

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw std::invalid_argument("fit_scaling: need at least 3 points");
  {
    std::vector<double> ns;
    for (const auto& p : points) ns.push_back(p.n);
    std::sort(ns.begin(), ns.end());
    if (std::adjacent_find(ns.begin(), ns.end()) != ns.end()) {
      throw std::invalid_argument("fit_scaling: duplicate n values");
    }
  }
  bool known_sigma = true;
  std::vector<double> x, y, w;
  for (const auto& p : points) {
    if (!(p.n > 1.0)) throw std::invalid_argument("fit_scaling: n must exceed 1");
    if (!(p.mean > 0.0)) throw std::invalid_argument("fit_scaling: means must be positive");
    x.push_back(std::log(p.n));
    y.push_back(std::log(p.mean));
    if (p.stderr_mean > 0.0) {
      const double sigma_log = p.stderr_mean / p.mean;
      w.push_back(1.0 / (sigma_log * sigma_log));
    } else {
      known_sigma = false;
      w.push_back(1.0);
    }
  }
  if (!known_sigma) std::fill(w.begin(), w.end(), 1.0);

  ScalingFit out;

  {  // T ~ c
    FamilyFit f;
    f.family = FitFamily::Constant;
    double m = 0.0;
    f.rss = wls_mean_rss(y, w, &m);
    f.params["c"] = std::exp(m);
    f.aicc = aicc(f.rss, n, 1, known_sigma);
    out.families.push_back(std::move(f));
  }
  {  // T ~ c * log n
    FamilyFit f;
    f.family = FitFamily::Logarithmic;
    std::vector<double> shifted(y.size());
    for (size_t i = 0; i < y.size(); ++i) shifted[i] = y[i] - std::log(x[i]);
    double m = 0.0;
    f.rss = wls_mean_rss(shifted, w, &m);
    f.params["c"] = std::exp(m);
    f.aicc = aicc(f.rss, n, 1, known_sigma);
    out.families.push_back(std::move(f));
  }
  {  // T ~ c * n^k
    FamilyFit f;
    f.family = FitFamily::PowerLaw;
    const Wls fit = wls_line(x, y, w);
    f.rss = fit.rss;
    f.params["c"] = std::exp(fit.intercept);
    f.params["k"] = fit.slope;
    f.aicc = aicc(f.rss, n, 2, known_sigma);
    out.families.push_back(std::move(f));

    out.exponent = fit.slope;
    double se;
    if (known_sigma) {
      se = std::sqrt(fit.slope_var);
    } else {
      const double s2 = n > 2 ? fit.rss / (n - 2) : 0.0;
      se = std::sqrt(s2 * fit.slope_var);
    }
    out.exponent_lo = fit.slope - 1.959963984540054 * se;
    out.exponent_hi = fit.slope + 1.959963984540054 * se;
  }
  {  // log T ~ b + c * n^a over an exponent grid
    FamilyFit f;
    f.family = FitFamily::StretchedExponential;
    double best_rss = kInf, best_a = 0.0, best_b = 0.0, best_c = 0.0;
    std::vector<double> na(x.size());
    for (int step = 1; step <= 20; ++step) {
      const double a = 0.05 * step;
      for (size_t i = 0; i < x.size(); ++i) na[i] = std::exp(a * x[i]);  // n^a
      const Wls fit = wls_line(na, y, w);
      if (fit.rss < best_rss) {
        best_rss = fit.rss;
        best_a = a;
        best_b = fit.intercept;
        best_c = fit.slope;
      }
    }
    f.rss = best_rss;
    f.params["a"] = best_a;
    f.params["b"] = best_b;
    f.params["c"] = best_c;
    f.aicc = aicc(f.rss, n, 3, known_sigma);
    out.families.push_back(std::move(f));
  }

  const FamilyFit* best = &out.families.front();
  for (const FamilyFit& f : out.families) {
    if (f.aicc < best->aicc - 1e-12) best = &f;
  }
  out.best = best->family;
  return out;
}

}  // namespace epinet
