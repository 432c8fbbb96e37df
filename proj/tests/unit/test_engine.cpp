#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "vcb/engine.hpp"
#include "vcb/error.hpp"
#include "vcb/harness.hpp"

using namespace vcb;

namespace {

const MethodSelector kTree{UpperMethod::trbp, LowerMethod::mean_field};
const MethodSelector kLogdet{UpperMethod::logdet, LowerMethod::mean_field};
const MethodSelector kExact{UpperMethod::exact, LowerMethod::exact};

}  // namespace

TEST_CASE("method names round-trip") {
  for (UpperMethod m : {UpperMethod::trbp, UpperMethod::logdet, UpperMethod::exact})
    CHECK(parse_upper_method(to_string(m)) == m);
  for (LowerMethod m : {LowerMethod::mean_field, LowerMethod::m_best, LowerMethod::exact})
    CHECK(parse_lower_method(to_string(m)) == m);
  CHECK(parse_lower_method("mean_field") == LowerMethod::mean_field);
  CHECK_THROWS_AS(parse_upper_method("bethe"), InputError);
}

TEST_CASE("clamping reproduces the restricted partition function") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const ExponentialModel m = oracle::random_model(trial % 2 ? Graph::grid(2, 3) : Graph::complete(5), rng, 1.0);
    const int n = m.num_nodes();
    const int s = trial % n;
    const int t = (trial + 2) % n;
    const Spin vs = trial % 3 ? 1 : -1;
    const Spin vt = trial % 4 ? -1 : 1;
    const ExponentialModel one = clamp(m, {{s, vs}});
    CHECK(one.num_nodes() == n - 1);
    CHECK(oracle::log_z(one) == doctest::Approx(oracle::log_z(m, [&](const auto& x) { return x[s] == vs; })).epsilon(1e-12));
    const ExponentialModel two = clamp(m, {{s, vs}, {t, vt}});
    CHECK(oracle::log_z(two) ==
          doctest::Approx(oracle::log_z(m, [&](const auto& x) { return x[s] == vs && x[t] == vt; })).epsilon(1e-12));
  }
  const ExponentialModel pair(Graph::path(2), {0.3, -0.2}, {0.9}, 0.1);
  const ExponentialModel empty = clamp(pair, {{0, 1}, {1, -1}});
  CHECK(empty.num_nodes() == 0);
  CHECK(empty.log_offset() == doctest::Approx(0.1 + 0.3 + 0.2 - 0.9));
  CHECK_FALSE(clamp_assignments(Event::spin_sum_at_least(3, 1)).has_value());
  CHECK(clamp_assignments(Event(PairMarginal{0, 2, 1, -1}))->size() == 2);
}

TEST_CASE("exact selector gives the exact log probability") {
  Rng rng(6);
  const ExponentialModel m = oracle::random_model(Graph::cycle(5), rng, 1.0);
  const Event e(PairMarginal{1, 3, -1, 1});
  const double ref = oracle::log_prob(m, [](const auto& x) { return x[1] == -1 && x[3] == 1; });
  CHECK(bound_event_upper(m, e, kExact, {}).value == doctest::Approx(ref).epsilon(1e-10));
  CHECK(bound_event_lower(m, e, kExact, {}).value == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("upper and lower event bounds sandwich log p") {
  int checked = 0;
  for (int trial = 0; trial < 8; ++trial) {
    for (Coupling c : {Coupling::repulsive, Coupling::mixed, Coupling::attractive}) {
      const ExponentialModel m = random_model(TrialSpec{GraphKind::grid3x3, c, 0.25, 1.0, 20, 11}, trial);
      const int s = trial;
      const Edge ed = m.graph().edge(trial + 1);
      for (const Event& e : {Event(NodeMarginal{s, 1}), Event(PairMarginal{ed.s, ed.t, 1, -1})}) {
        const double lp = e.variant().index() == 0
                              ? oracle::log_prob(m, [&](const auto& x) { return x[s] == 1; })
                              : oracle::log_prob(m, [&](const auto& x) { return x[ed.s] == 1 && x[ed.t] == -1; });
        for (const MethodSelector& sel : {kTree, kLogdet}) {
          const BoundResult up = bound_event_upper(m, e, sel, {});
          const BoundResult lo = bound_event_lower(m, e, sel, {});
          if (!up.diagnostics.converged || !lo.diagnostics.converged) continue;
          ++checked;
          CHECK(up.value >= lp - 1e-6);
          CHECK(lo.value <= lp + 1e-6);
          CHECK(up.value <= 0.0);
          CHECK(up.direction == Direction::upper);
          CHECK(lo.direction == Direction::lower);
        }
      }
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("upper bounds report the raw value when clipped") {
  // Two nodes strongly tied: the mean-field lower bound on Phi is loose enough
  // that the raw upper bound on p(x_0 = +1) can exceed 1.
  const ExponentialModel m(Graph::path(2), {0.0, 0.0}, {-3.0});
  const BoundResult up = bound_event_upper(m, Event(NodeMarginal{0, 1}), kTree, {});
  CHECK(up.value <= 0.0);
  if (up.diagnostics.clipped) CHECK(up.diagnostics.raw_value > 0.0);
  else CHECK(up.value == doctest::Approx(up.diagnostics.raw_value));
}

TEST_CASE("non-marginal events need exact restricted partition functions") {
  const ExponentialModel m = random_model(TrialSpec{}, 0);
  const Event e = Event::spin_sum_at_least(9, 3);
  CHECK_THROWS_AS(bound_event_upper(m, e, kTree, {}), UnsupportedError);
  CHECK_THROWS_AS(bound_event_lower(m, e, kLogdet, {}), UnsupportedError);
  const double ref = oracle::log_prob(m, [](const auto& x) { return 2 * oracle::count_plus(x) - 9 >= 3; });
  CHECK(bound_event_upper(m, e, MethodSelector{UpperMethod::exact, LowerMethod::exact}, {}).value ==
        doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("batched bounds equal single calls") {
  const ExponentialModel m = random_model(TrialSpec{GraphKind::full9, Coupling::mixed, 0.25, 0.5, 20, 2}, 3);
  std::vector<Event> events;
  for (int s = 0; s < 9; ++s) events.emplace_back(NodeMarginal{s, s % 2 ? 1 : -1});
  events.emplace_back(PairMarginal{2, 7, 1, 1});
  for (const MethodSelector& sel : {kTree, kLogdet}) {
    const auto up = bound_events_upper(m, events, sel, {});
    const auto lo = bound_events_lower(m, events, sel, {});
    REQUIRE(up.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
      CHECK(up[i].value == doctest::Approx(bound_event_upper(m, events[i], sel, {}).value).epsilon(1e-12));
      CHECK(lo[i].value == doctest::Approx(bound_event_lower(m, events[i], sel, {}).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("lambda bound is valid and zero on the whole space") {
  Rng rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const ExponentialModel m = oracle::random_model(Graph::cycle(6), rng, 0.8);
    const Event e = Event::spin_sum_at_least(6, 2);
    const double lp = oracle::log_prob(m, [](const auto& x) { return 2 * oracle::count_plus(x) - 6 >= 2; });
    const LambdaBound lb = chernoff_lambda_bound(m, e, kTree, {});
    CHECK(lb.bound.value >= lp - 1e-6);
    CHECK(lb.bound.value <= 0.0);
    CHECK(lb.bound.method.rfind("lambda:count", 0) == 0);
    // J at the reported lambda reproduces the reported value.
    const double phi_l = estimate_phi_lower(m, LowerMethod::mean_field, {}).value;
    CHECK(std::min(0.0, chernoff_objective(m, e, lb.lambda, kTree, {}, phi_l)) ==
          doctest::Approx(lb.bound.value).epsilon(1e-9));
  }
  const ExponentialModel m = oracle::random_model(Graph::path(4), rng, 0.5);
  const LambdaBound whole = chernoff_lambda_bound(m, Event::full_space(4), kExact, {});
  CHECK(whole.bound.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("full lambda path is at least as tight as the count direction") {
  Rng rng(9);
  const ExponentialModel m = oracle::random_model(Graph::path(5), rng, 0.7);
  const Event e = Event::spin_sum_at_least(5, 1);
  LambdaOptions count;
  count.path = LambdaOptions::Path::count_direction;
  LambdaOptions full;
  full.path = LambdaOptions::Path::full;
  const double a = chernoff_lambda_bound(m, e, kExact, {}, count).bound.value;
  const double b = chernoff_lambda_bound(m, e, kExact, {}, full).bound.value;
  const double lp = oracle::log_prob(m, [](const auto& x) { return 2 * oracle::count_plus(x) - 5 >= 1; });
  CHECK(b <= a + 1e-4);
  CHECK(b >= lp - 1e-6);
}

TEST_CASE("count-direction bound matches a brute-force scan over alpha") {
  Rng rng(10);
  const ExponentialModel m = oracle::random_model(Graph::path(6), rng, 0.6);
  const Event e = Event::spin_sum_at_least(6, 2);
  LambdaOptions count;
  count.path = LambdaOptions::Path::count_direction;
  const double got = chernoff_lambda_bound(m, e, kExact, {}, count).bound.value;
  // Independent scan: S_C(-alpha 1) = -alpha * 2 for alpha >= 0, Phi by enumeration.
  const double z = oracle::log_z(m);
  double best = INFINITY;
  for (int k = 0; k <= 8000; ++k) {
    const double alpha = k * 1e-3;
    std::vector<double> shift(static_cast<std::size_t>(m.dim()), 0.0);
    for (int s = 0; s < 6; ++s) shift[static_cast<std::size_t>(s)] = alpha;
    best = std::min(best, -2.0 * alpha + oracle::log_z(m.shifted(shift)) - z);
  }
  CHECK(got == doctest::Approx(std::min(best, 0.0)).epsilon(1e-5));
}

TEST_CASE("exact Chernoff bound is tight for node marginals") {
  Rng rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    const ExponentialModel m = oracle::random_model(trial % 2 ? Graph::cycle(5) : Graph::path(5), rng, 1.0);
    const TightnessResult r = tightness_check(m, Event(NodeMarginal{trial, 1}));
    CHECK(r.log_prob == doctest::Approx(oracle::log_prob(m, [&](const auto& x) { return x[trial] == 1; })).epsilon(1e-10));
    CHECK(r.gap >= -1e-9);
    CHECK(r.gap <= 1e-3);
    CHECK(r.passed);
  }
}
