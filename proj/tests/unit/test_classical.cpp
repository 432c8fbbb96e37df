#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "vcb/classical.hpp"
#include "vcb/error.hpp"

using namespace vcb;

TEST_CASE("Bernoulli spec validation and threshold count") {
  CHECK_THROWS_AS(BernoulliSpec(0, 0.5, 0.5), InputError);
  CHECK_THROWS_AS(BernoulliSpec(10, 1.0, 0.5), InputError);
  CHECK_THROWS_AS(BernoulliSpec(10, 0.5, 0.0), InputError);
  CHECK(BernoulliSpec(30, 0.5, 0.5).threshold_count() == 23);
  // n p (1 + delta) = 6 exactly up to rounding.
  CHECK(BernoulliSpec(10, 0.3, 1.0).threshold_count() == 6);
}

TEST_CASE("closed-form bounds at the figure settings") {
  const BernoulliSpec spec(30, 0.5, 0.5);
  CHECK(chernoff_upper_simple(spec) == doctest::Approx(-0.9375));
  CHECK(chernoff_upper_tight(spec) == doctest::Approx(15.0 * (0.5 - 1.5 * std::log(1.5))));
  CHECK(chernoff_lower_tail(spec) == doctest::Approx(-1.875));
  CHECK_THROWS_AS(chernoff_upper_simple(BernoulliSpec(10, 0.1, 5.0)), InputError);
  CHECK_THROWS_AS(chernoff_lower_tail(BernoulliSpec(10, 0.1, 1.0)), InputError);
}

TEST_CASE("relaxed objective is minimized at log(1 + delta) with the tight closed form as minimum") {
  for (double delta : {0.1, 0.5, 1.0, 2.0}) {
    const BernoulliSpec spec(40, 0.3, delta);
    const ScalarMinimum m = minimize_iid_relaxed_objective(spec, 1e-10);
    CHECK(m.argmin == doctest::Approx(std::log1p(delta)).epsilon(1e-6));
    CHECK(m.value == doctest::Approx(chernoff_upper_tight(spec)).epsilon(1e-9));
  }
}

TEST_CASE("exact iid objective minimizer has the closed form") {
  const BernoulliSpec spec(30, 0.5, 0.5);
  const ScalarMinimum m = minimize_iid_objective(spec, 1e-10);
  const double p = 0.5;
  const double a = 0.75;  // p (1 + delta)
  CHECK(m.argmin == doctest::Approx(std::log(a * (1 - p) / (p * (1 - a)))).epsilon(1e-6));
  CHECK(m.value <= chernoff_upper_tight(spec));
}

TEST_CASE("binomial tails match a long-double oracle") {
  for (int n : {1, 5, 16, 30}) {
    for (double p : {0.1, 0.5, 0.8}) {
      for (int k = 1; k <= n; k += std::max(1, n / 5)) {
        CHECK(binomial_log_upper_tail(n, p, k) == doctest::Approx(oracle::binomial_tail(n, p, k)).epsilon(1e-9));
      }
    }
  }
  CHECK(binomial_log_upper_tail(10, 0.5, 0) == 0.0);
  CHECK(binomial_log_upper_tail(10, 0.5, 11) == -INFINITY);
}

TEST_CASE("classical bounds dominate the exact tail") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 16);
    const double p = uniform(rng, 0.05, 0.95);
    const double delta = uniform(rng, 0.05, 3.0);
    const BernoulliSpec spec(n, p, delta);
    const int k = spec.threshold_count();
    const double tail = k > n ? -INFINITY : oracle::binomial_tail(n, p, k);
    CHECK(chernoff_upper_tight(spec) >= tail - 1e-12);
    CHECK(minimize_iid_objective(spec).value >= tail - 1e-12);
    if (delta < 2.0 * std::exp(1.0) - 1.0) CHECK(chernoff_upper_simple(spec) >= tail - 1e-12);
  }
}

TEST_CASE("spin conversion of a binary chain preserves the distribution") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    BinaryMarkovParams q{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1),
                         uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const int n = 2 + trial;
    const ChainModel chain = spin_chain_from_binary(n, q);
    for (int k = 0; k <= n; ++k) {
      CHECK(chain_count_log_prob(chain, k) == doctest::Approx(oracle::binary_chain_tail(n, q, k)).epsilon(1e-10));
    }
    // Unnormalized weights agree too, through the log offset.
    std::vector<long double> w;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      long double s = 0;
      for (int i = 0; i < n; ++i) {
        const int b = mask >> i & 1U;
        s += b ? q.theta1 : q.theta0;
        if (i + 1 < n) {
          const int c = mask >> (i + 1) & 1U;
          s += b ? (c ? q.theta11 : q.theta10) : (c ? q.theta01 : q.theta00);
        }
      }
      w.push_back(s);
    }
    CHECK(chain_phi(chain) == doctest::Approx(oracle::log_sum(w)).epsilon(1e-10));
  }
}

TEST_CASE("Markov objective equals the tilted enumeration and bounds the tail") {
  BinaryMarkovParams q;
  q.theta1 = 0.2;
  q.theta11 = -1.0;
  const int n = 12;
  const ChainModel chain = spin_chain_from_binary(n, q);
  for (double lam : {0.0, 0.4, 1.3}) {
    const double t = 7.5;
    std::vector<long double> all, tilted;
    for (const auto& x : oracle::all_configs(n)) {
      const long double w = oracle::log_weight(chain.model(), x);
      all.push_back(w);
      tilted.push_back(w + lam * oracle::count_plus(x));
    }
    const double ref = -lam * t + oracle::log_sum(tilted) - oracle::log_sum(all);
    CHECK(markov_objective(chain, t, lam) == doctest::Approx(ref).epsilon(1e-10));
  }
  const BoundResult b = markov_chernoff(chain, 8);
  CHECK(b.value >= oracle::binary_chain_tail(n, q, 8));
  CHECK(markov_chernoff(chain, 0).value == 0.0);
  CHECK_THROWS_AS(markov_chernoff(chain, n + 1), InputError);
}

TEST_CASE("independent chain reduces to the iid objective") {
  const BernoulliSpec spec(20, 0.3, 0.5);
  BinaryMarkovParams q;
  q.theta1 = std::log(0.3 / 0.7);
  const ChainModel chain = spin_chain_from_binary(20, q);
  for (double lam : {0.0, 0.5, 2.0}) {
    CHECK(markov_objective(chain, spec.upper_threshold(), lam) ==
          doctest::Approx(iid_mgf_objective(spec, lam)).epsilon(1e-10));
  }
}
