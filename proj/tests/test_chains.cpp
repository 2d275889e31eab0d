#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "epinet/chains.hpp"
#include "epinet/rng.hpp"
#include "support/oracles.hpp"

using namespace epinet;

namespace {

// Random mildly-subcritical chain; ratios stay bounded so every evaluation
// route (closed form, solve, Monte Carlo) is usable.
BirthDeathChain random_chain(RngStream& rng, int n_max, Boundary boundary) {
  const int n = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(n_max - 1)));
  std::vector<double> up(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> down(static_cast<size_t>(n) + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    down[static_cast<size_t>(i)] = 0.5 + 1.5 * rng.uniform01();
    if (i < n) {
      up[static_cast<size_t>(i)] = down[static_cast<size_t>(i)] * (0.15 + 0.75 * rng.uniform01());
    }
  }
  BirthDeathChain chain{n, std::move(up), std::move(down), boundary};
  chain.validate();
  return chain;
}

}  // namespace

TEST_CASE("stationary distribution of tiny reflected chains") {
  // Two states: p_{0,1} = 1 by reflection, p_{1,0} = 1 at the top.
  const auto two = make_chain(1, [](int) { return 0.0; }, [](int) { return 1.0; },
                              Boundary::ReflectingAtZero);
  const auto pi2 = stationary_reflected(two);
  CHECK(pi2[0] == doctest::Approx(0.5));
  CHECK(pi2[1] == doctest::Approx(0.5));

  // Three states, up(1) = down(1), down(2) = 1: detailed balance by hand
  // gives pi ~ (1, 2, 1).
  const auto three = make_chain(2, [](int) { return 1.0; }, [](int) { return 1.0; },
                                Boundary::ReflectingAtZero);
  const auto pi3 = stationary_reflected(three);
  CHECK(pi3[0] == doctest::Approx(0.25));
  CHECK(pi3[1] == doctest::Approx(0.5));
  CHECK(pi3[2] == doctest::Approx(0.25));
}

TEST_CASE("stationary distribution with unit jump ratios has flat interior") {
  const auto chain = make_chain(6, [](int) { return 1.0; }, [](int) { return 1.0; },
                                Boundary::ReflectingAtZero);
  const auto pi = stationary_reflected(chain);
  for (int i = 2; i <= 5; ++i) {
    CHECK(pi[static_cast<size_t>(i)] == doctest::Approx(pi[1]).epsilon(1e-12));
  }
}

TEST_CASE("stationary rejects decomposed and absorbing chains") {
  auto chain = make_chain(3, [](int i) { return i == 1 ? 0.0 : 1.0; },
                          [](int) { return 1.0; }, Boundary::ReflectingAtZero);
  CHECK_THROWS_AS((void)stationary_reflected(chain), std::invalid_argument);
  const auto absorbing = make_chain(3, [](int) { return 1.0; }, [](int) { return 1.0; });
  CHECK_THROWS_AS((void)stationary_reflected(absorbing), std::invalid_argument);
}

TEST_CASE("absorption from 1: guaranteed single down-step cases") {
  const auto one = make_chain(1, [](int) { return 0.0; }, [](int) { return 1.0; });
  CHECK(expected_absorption_from_1(one) == doctest::Approx(1.0));

  // up == 0 everywhere: one jump regardless of chain length
  const auto flat = make_chain(5, [](int) { return 0.0; }, [](int) { return 2.0; });
  CHECK(expected_absorption_from_1(flat) == doctest::Approx(1.0));
  CHECK(expected_absorption_from_state(flat, 1, TimeScale::Jumps) == doctest::Approx(1.0));
}

TEST_CASE("absorption closed form on a hand-solved symmetric-rate chain") {
  // up(i) = down(i) = 1, n = 5. Jump probabilities are 1/2 in the interior
  // and 1 down at the top. The closed-form terms are then
  //   k = 1..4: prod = R(k)/down(k) = 2,   k = 5: 2 * (1/2)/1 * ... = 1,
  // so E[T_{1,0}] = 2+2+2+2+1 = 9.
  const auto chain = make_chain(5, [](int) { return 1.0; }, [](int) { return 1.0; });
  CHECK(expected_absorption_from_1(chain) == doctest::Approx(9.0).epsilon(1e-12));
  const auto mc = simulate_jump_chain(chain, 1, 100000, 77);
  CHECK(std::abs(mc.mean_steps - 9.0) <= 3.0 * mc.se_steps);
}

TEST_CASE("dominating-chain instance: closed form vs linear solve to 1e-10") {
  const auto chain = sis_upper_chain(0.5, 1, 1.0, 10);  // beta*d_max = 0.5, mu = 1
  const double closed = expected_absorption_from_1(chain);
  const double solved = expected_absorption_from_state(chain, 1, TimeScale::Jumps);
  CHECK(std::abs(closed - solved) <= 1e-10 * std::abs(solved));
  CHECK(solved ==
        doctest::Approx(oracle::bd_absorption_dense(chain.up, chain.down, 1, false))
            .epsilon(1e-10));
}

TEST_CASE("Ehrenfest identity on random chains") {
  RngStream rng(808);
  for (int rep = 0; rep < 50; ++rep) {
    const auto chain = random_chain(rng, 200, Boundary::AbsorbingAtZero);
    const double direct = expected_absorption_from_1(chain);
    const auto pi = stationary_reflected(chain.reflected());
    CHECK(std::abs(direct + 1.0 - 1.0 / pi[0]) <= 1e-9 * (direct + 1.0));
  }
}

TEST_CASE("linear solve agrees with dense oracle and closed form") {
  RngStream rng(909);
  for (int rep = 0; rep < 40; ++rep) {
    const auto chain = random_chain(rng, 120, Boundary::AbsorbingAtZero);
    const double closed = expected_absorption_from_1(chain);
    const double solved = expected_absorption_from_state(chain, 1, TimeScale::Jumps);
    CHECK(std::abs(closed - solved) <= 1e-9 * std::abs(solved));
    const double dense = oracle::bd_absorption_dense(chain.up, chain.down, 1, false);
    CHECK(solved == doctest::Approx(dense).epsilon(1e-9));
    const double cont = expected_absorption_from_state(chain, 1, TimeScale::Continuous);
    CHECK(cont ==
          doctest::Approx(oracle::bd_absorption_dense(chain.up, chain.down, 1, true))
              .epsilon(1e-9));
  }
}

TEST_CASE("absorption from L: consistency, monotonicity, Monte Carlo") {
  RngStream rng(1311);
  for (int rep = 0; rep < 20; ++rep) {
    const auto chain = random_chain(rng, 60, Boundary::AbsorbingAtZero);
    CHECK(expected_absorption_from_state(chain, 1) ==
          doctest::Approx(expected_absorption_from_1(chain)).epsilon(1e-9));
    double prev = 0.0;
    for (int L = 1; L <= chain.state_max; ++L) {
      const double h = expected_absorption_from_state(chain, L);
      CHECK(h >= prev - 1e-12);
      prev = h;
    }
  }
  const auto sym = make_chain(5, [](int) { return 1.0; }, [](int) { return 1.0; });
  const double exact3 = expected_absorption_from_state(sym, 3);
  const auto mc = simulate_jump_chain(sym, 3, 100000, 4242);
  CHECK(std::abs(mc.mean_steps - exact3) <= 3.0 * mc.se_steps);
  CHECK(std::abs(mc.mean_time - expected_absorption_from_state(sym, 3, TimeScale::Continuous)) <=
        3.0 * mc.se_time);
}

TEST_CASE("sis_upper_chain follows the series bound shape") {
  // E[T] = sum_k (prod_k + prod_{k-1}) over the rate-ratio products, so it is
  // below twice the majorant series plus one.
  const auto chain = sis_upper_chain(0.6, 1, 1.0, 50);
  const double value = expected_absorption_from_1(chain);
  CHECK(std::isfinite(value));
  const double series = subcritical_series_bound(0.6, 1, 1.0, 400);
  CHECK(value <= 2.0 * series + 1.0);
}

TEST_CASE("sis_lower_chain lower bound from the per-step product") {
  // beta*eta = 0.5, gamma = 0.7 on n = 200 so each factor is >= 1.13 up to
  // m = 20; the absorption sum then dominates (1.1)^20.
  const int n = 200;
  const auto chain = sis_lower_chain(
      0.5, [](int) { return 1.0; },
      [n](int i) { return 0.7 * i * (1.0 - static_cast<double>(i) / n); }, 20);
  CHECK(expected_absorption_from_1(chain) >= std::pow(1.1, 20));

  const auto trivial = sis_lower_chain(0.0, [](int) { return 0.0; },
                                       [](int) { return 0.0; }, 4);
  CHECK(expected_absorption_from_1(trivial) == doctest::Approx(1.0));
}

TEST_CASE("subcritical series bound") {
  CHECK(subcritical_series_bound(0.5, 1, 0.0, 100) == doctest::Approx(1.0).epsilon(1e-12));

  // direct high-precision summation oracle, far past where terms vanish
  const double bound = subcritical_series_bound(0.5, 1, 0.5, 200);
  double direct = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    direct += std::pow(0.5, k) * std::pow(k + 1.0, 0.5 / 0.5);
  }
  CHECK(bound == doctest::Approx(direct).epsilon(1e-9));

  CHECK_THROWS_AS((void)subcritical_series_bound(1.0, 1, 0.5, 100), std::invalid_argument);
  CHECK_THROWS_AS((void)subcritical_series_bound(0.5, 3, 0.5, 100), std::invalid_argument);
}

TEST_CASE("log-space evaluation survives supercritical magnitudes") {
  // ratios ~ e: log E[T] grows to ~n, far past double overflow at n = 11000
  const auto chain = make_chain(11000, [](int i) { return std::exp(1.0) * i; },
                                [](int i) { return static_cast<double>(i); });
  const double log_value = log_expected_absorption_from_1(chain);
  CHECK(std::isfinite(log_value));
  CHECK(log_value > 10000.0);
  CHECK(std::isinf(expected_absorption_from_1(chain)));
}

TEST_CASE("regime classification certificates") {
  StrategySpec constant_mu;
  constant_mu.kind = StrategyKind::TargetedMaxDegree;
  constant_mu.mu = 1.0;

  GraphMetrics sub;
  sub.d_max = 3;
  sub.lambda1 = 2.5;
  const auto cert1 = regime_classify(0.2, sub, 100, constant_mu, 0.5);
  CHECK(cert1.regime == Regime::Subcritical);
  CHECK(cert1.margin == doctest::Approx(0.4));

  GraphMetrics star;
  star.d_max = 100;
  star.lambda1 = 10.0;
  const auto cert2 = regime_classify(0.05, star, 101, constant_mu, 0.5);
  CHECK(cert2.regime == Regime::CriticalCandidate);

  StrategySpec scaling;
  scaling.kind = StrategyKind::LinearScaling;
  scaling.gamma = 0.9;
  scaling.alpha = 0.5;
  GraphMetrics k30;
  k30.d_max = 29;
  k30.lambda1 = 29.0;
  k30.eta[5] = {25.0, true};
  const auto cert3 = regime_classify(0.02, k30, 30, scaling, 0.5);
  CHECK(cert3.regime == Regime::SupercriticalCandidate);
  CHECK(cert3.margin == doctest::Approx(0.4));

  GraphMetrics missing = k30;
  missing.eta.clear();
  const auto cert4 = regime_classify(0.02, missing, 30, scaling, 0.5);
  CHECK(cert4.regime == Regime::Unclassified);
  CHECK_FALSE(cert4.diagnostic.empty());
}
