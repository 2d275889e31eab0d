#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "epinet/rng.hpp"
#include "epinet/stats.hpp"

using namespace epinet;

TEST_CASE("bootstrap on constant samples collapses to the constant") {
  const std::vector<double> xs(20, 3.5);
  const Interval ci = bootstrap_ci(xs, 0.95, 500, 7);
  CHECK(ci.lo == 3.5);
  CHECK(ci.hi == 3.5);
}

TEST_CASE("bootstrap is deterministic under its seed") {
  std::vector<double> xs;
  RngStream rng(5);
  for (int i = 0; i < 100; ++i) xs.push_back(rng.uniform01());
  const Interval a = bootstrap_ci(xs, 0.9, 800, 42);
  const Interval b = bootstrap_ci(xs, 0.9, 800, 42);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
  CHECK(a.lo < a.hi);
}

TEST_CASE("bootstrap coverage for the Exponential(1) mean") {
  int covered = 0;
  for (uint64_t rep = 0; rep < 100; ++rep) {
    RngStream rng(derive_seed(1000, rep));
    std::vector<double> xs;
    xs.reserve(10000);
    for (int i = 0; i < 10000; ++i) xs.push_back(rng.exponential(1.0));
    const Interval ci = bootstrap_ci(xs, 0.95, 400, rep);
    if (ci.lo <= 1.0 && 1.0 <= ci.hi) ++covered;
  }
  CHECK(covered >= 90);
}

TEST_CASE("bootstrap input validation") {
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS((void)bootstrap_ci(one, 0.95, 100, 1), std::invalid_argument);
  const std::vector<double> two = {1.0, 2.0};
  CHECK_THROWS_AS((void)bootstrap_ci(two, 1.5, 100, 1), std::invalid_argument);
}

TEST_CASE("summaries keep censored runs out of the moments") {
  std::vector<RunOutcome> outcomes(4);
  outcomes[0].extinction_time = 2.0;
  outcomes[1].extinction_time = 4.0;
  outcomes[2].extinction_time = 100.0;
  outcomes[2].censored = true;
  outcomes[3].extinction_time = 6.0;
  const BatchSummary s = summarize(outcomes);
  CHECK(s.runs == 4);
  CHECK(s.censored == 1);
  CHECK(s.censored_fraction == doctest::Approx(0.25));
  CHECK(s.mean == doctest::Approx(4.0));
  CHECK(s.median == doctest::Approx(4.0));
}

TEST_CASE("fit recovers exact synthetic families") {
  SUBCASE("constant") {
    std::vector<ScalingPoint> pts;
    for (const double n : {50.0, 100.0, 200.0, 400.0}) pts.push_back({n, 5.0, 0.0});
    const ScalingFit fit = fit_scaling(pts);
    CHECK(fit.best == FitFamily::Constant);
    CHECK(std::abs(fit.exponent) < 1e-9);
  }
  SUBCASE("power law with tight exponent interval") {
    std::vector<ScalingPoint> pts;
    for (const double n : {50.0, 100.0, 200.0, 400.0}) {
      pts.push_back({n, 2.0 * std::pow(n, 1.5), 0.0});
    }
    const ScalingFit fit = fit_scaling(pts);
    CHECK(fit.best == FitFamily::PowerLaw);
    CHECK(fit.exponent == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(fit.exponent_hi - fit.exponent_lo < 1e-6);
    CHECK(fit.fit_for(FitFamily::PowerLaw).params.at("c") == doctest::Approx(2.0));
  }
  SUBCASE("stretched exponential beats power law") {
    std::vector<ScalingPoint> pts;
    for (const double n : {10.0, 20.0, 30.0, 40.0, 50.0, 60.0}) {
      pts.push_back({n, std::exp(0.3 * n), 0.0});
    }
    const ScalingFit fit = fit_scaling(pts);
    CHECK(fit.best == FitFamily::StretchedExponential);
    CHECK(fit.fit_for(FitFamily::StretchedExponential).params.at("a") == doctest::Approx(1.0));
    CHECK(fit.fit_for(FitFamily::StretchedExponential).aicc <
          fit.fit_for(FitFamily::PowerLaw).aicc);
  }
  SUBCASE("genuine stretched exponent lands on the grid") {
    std::vector<ScalingPoint> pts;
    for (const double n : {20.0, 60.0, 120.0, 250.0, 500.0, 1000.0}) {
      pts.push_back({n, std::exp(0.8 * std::pow(n, 0.45)), 0.0});
    }
    const ScalingFit fit = fit_scaling(pts);
    CHECK(fit.best == FitFamily::StretchedExponential);
    CHECK(fit.fit_for(FitFamily::StretchedExponential).params.at("a") == doctest::Approx(0.45));
  }
}

TEST_CASE("fit recovers families under 5 percent noise") {
  RngStream rng(2718);
  const std::vector<double> ns = {50, 100, 200, 400, 800};
  auto noisy = [&](double value) {
    return value * (1.0 + 0.05 * (2.0 * rng.uniform01() - 1.0));
  };
  SUBCASE("power law exponent within 5 percent") {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<ScalingPoint> pts;
      for (const double n : ns) pts.push_back({n, noisy(3.0 * std::pow(n, 1.2)), 0.0});
      const ScalingFit fit = fit_scaling(pts);
      CHECK(fit.best == FitFamily::PowerLaw);
      CHECK(std::abs(fit.exponent - 1.2) < 0.05 * 1.2);
    }
  }
  SUBCASE("constant stays constant") {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<ScalingPoint> pts;
      for (const double n : ns) pts.push_back({n, noisy(7.0), noisy(7.0) * 0.03});
      CHECK(fit_scaling(pts).best == FitFamily::Constant);
    }
  }
  SUBCASE("exponential growth stays stretched-exponential") {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<ScalingPoint> pts;
      for (const double n : {10.0, 20.0, 30.0, 40.0, 50.0, 60.0}) {
        pts.push_back({n, noisy(std::exp(0.3 * n)), 0.0});
      }
      CHECK(fit_scaling(pts).best == FitFamily::StretchedExponential);
    }
  }
}

TEST_CASE("fit input validation") {
  std::vector<ScalingPoint> two = {{10, 1, 0}, {20, 2, 0}};
  CHECK_THROWS_AS((void)fit_scaling(two), std::invalid_argument);
  std::vector<ScalingPoint> dup = {{10, 1, 0}, {10, 2, 0}, {20, 2, 0}};
  CHECK_THROWS_AS((void)fit_scaling(dup), std::invalid_argument);
  std::vector<ScalingPoint> nonpos = {{10, 1, 0}, {20, 0.0, 0}, {30, 2, 0}};
  CHECK_THROWS_AS((void)fit_scaling(nonpos), std::invalid_argument);
}
