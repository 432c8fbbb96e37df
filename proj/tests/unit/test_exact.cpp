#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "vcb/error.hpp"
#include "vcb/exact.hpp"

using namespace vcb;

TEST_CASE("brute-force partition function and event probabilities match the oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 8;
    const ExponentialModel m = oracle::random_model(Graph::complete(n), rng, 1.0);
    CHECK(brute_phi(m) == doctest::Approx(oracle::log_z(m)).epsilon(1e-12));
    const Event e(NodeMarginal{n - 1, 1});
    CHECK(event_log_prob(m, e) ==
          doctest::Approx(oracle::log_prob(m, [&](const auto& x) { return x[n - 1] == 1; })).epsilon(1e-10));
    const auto mu = brute_marginals(m);
    const auto ref = oracle::means(m);
    for (int s = 0; s < n; ++s) CHECK(mu.node_means[s] == doctest::Approx(ref[s]).epsilon(1e-10));
    for (int k = 0; k < m.num_edges(); ++k) CHECK(mu.edge_means[k] == doctest::Approx(ref[n + k]).epsilon(1e-10));
  }
}

TEST_CASE("empty events have log probability -inf") {
  const ExponentialModel m(Graph::path(3), {0.1, 0.2, 0.3}, {0.5, -0.5});
  CHECK(brute_phi_event(m, Event::spin_sum_at_least(3, 3.0)) > -INFINITY);
  const Event none(LinearThreshold{{1.0, 1.0, 1.0}, 3.5});
  CHECK(brute_phi_event(m, none) == -INFINITY);
  CHECK(event_log_prob(m, none) == -INFINITY);
  CHECK(event_log_prob(m, Event::full_space(3)) == doctest::Approx(0.0));
}

TEST_CASE("zero-node model is its offset") {
  const ExponentialModel m(Graph(0, {}), {}, {}, 1.25);
  CHECK(brute_phi(m) == doctest::Approx(1.25));
}

TEST_CASE("enumeration refuses large models") {
  const ExponentialModel m(Graph(kMaxEnumerationNodes + 1, {}),
                           std::vector<double>(kMaxEnumerationNodes + 1, 0.0), {});
  CHECK_THROWS_AS(brute_phi(m), ScaleExceeded);
}

TEST_CASE("chain and tree recursions match the oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 14;
    const ExponentialModel chain = oracle::random_model(Graph::path(n), rng, 2.0);
    CHECK(chain_phi(ChainModel(chain)) == doctest::Approx(oracle::log_z(chain)).epsilon(1e-12));
    const ExponentialModel tree = oracle::random_model(oracle::random_tree(n, rng), rng, 2.0);
    CHECK(tree_phi(tree) == doctest::Approx(oracle::log_z(tree)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ChainModel(ExponentialModel(Graph::cycle(4), std::vector<double>(4, 0.0),
                                              std::vector<double>(4, 0.0))),
                  InputError);
  CHECK_THROWS_AS(tree_phi(ExponentialModel(Graph::cycle(4), std::vector<double>(4, 0.0),
                                            std::vector<double>(4, 0.0))),
                  InputError);
}

TEST_CASE("chain recursion handles a long chain without overflow") {
  const int n = 400;
  const ExponentialModel m(Graph::path(n), std::vector<double>(n, 3.0), std::vector<double>(n - 1, 4.0));
  // With these fields the all-plus configuration dominates.
  const double all_plus = 3.0 * n + 4.0 * (n - 1);
  const double v = chain_phi(ChainModel(m));
  CHECK(std::isfinite(v));
  CHECK(v >= all_plus);
  CHECK(v <= all_plus + 1.0);
}

TEST_CASE("count tail dynamic program matches enumeration") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + trial % 16;
    const ExponentialModel m = oracle::random_model(Graph::path(n), rng, 1.0);
    for (int k : {0, 1, n / 2, n}) {
      const double ref = oracle::log_prob(m, [&](const auto& x) { return oracle::count_plus(x) >= k; });
      CHECK(chain_count_log_prob(ChainModel(m), k) == doctest::Approx(ref).epsilon(1e-10));
    }
    CHECK_THROWS_AS(chain_count_log_prob(ChainModel(m), n + 1), InputError);
  }
}
