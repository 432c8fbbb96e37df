#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../support/oracles.hpp"
#include "vcb/classical.hpp"
#include "vcb/error.hpp"
#include "vcb/harness.hpp"

using namespace vcb;

TEST_CASE("enum names round-trip") {
  for (GraphKind g : {GraphKind::grid3x3, GraphKind::full9}) CHECK(parse_graph_kind(to_string(g)) == g);
  for (Coupling c : {Coupling::repulsive, Coupling::mixed, Coupling::attractive}) CHECK(parse_coupling(to_string(c)) == c);
  for (TableMethod m : all_table_methods()) CHECK(parse_table_method(to_string(m)) == m);
  CHECK(parse_domain("binary") == Domain::binary);
  CHECK_THROWS_AS(parse_coupling("ferro"), InputError);
  CHECK(all_table_methods().size() == 4);
}

TEST_CASE("table graphs") {
  CHECK(make_graph(GraphKind::grid3x3).num_edges() == 12);
  CHECK(make_graph(GraphKind::full9).num_edges() == 36);
}

TEST_CASE("random models are deterministic and respect coupling signs") {
  TrialSpec spec{GraphKind::full9, Coupling::repulsive, 0.25, 0.5, 20, 99};
  for (int trial = 0; trial < 5; ++trial) {
    const ExponentialModel a = random_model(spec, trial);
    const ExponentialModel b = random_model(spec, trial);
    CHECK(a.params() == b.params());
    for (double w : a.edge_params()) CHECK((w <= 0.0 && w >= -1.0));
    for (double w : a.node_params()) CHECK(std::abs(w) <= 0.25);
  }
  CHECK(random_model(spec, 0).params() != random_model(spec, 1).params());
  spec.coupling = Coupling::attractive;
  const ExponentialModel attractive = random_model(spec, 2);
  for (double w : attractive.edge_params()) CHECK((w >= 0.0 && w <= 1.0));
  spec.coupling = Coupling::mixed;
  const ExponentialModel mixed = random_model(spec, 2);
  for (double w : mixed.edge_params()) CHECK(std::abs(w) <= 0.5);

  // Same stream: node draws come first.
  Rng rng(99 ^ 3);
  const ExponentialModel m = random_model(spec, 3);
  for (int s = 0; s < 9; ++s) CHECK(m.node_param(s) == uniform(rng, -0.25, 0.25));
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), InputError);
}

TEST_CASE("binary potentials convert to an equivalent spin model") {
  Rng rng(4);
  const ExponentialModel pot = oracle::random_model(Graph::grid(2, 3), rng, 1.5);
  const ExponentialModel spin = binary_to_spin(pot);
  // Every configuration: both forms give the same log weight up to the offsets.
  for (const auto& x : oracle::all_configs(6)) {
    long double w = pot.log_offset();
    for (int s = 0; s < 6; ++s) w += pot.node_param(s) * (x[s] == 1);
    int e = 0;
    for (const Edge& ed : pot.graph().edges()) w += pot.edge_param(e++) * (x[ed.s] == 1 && x[ed.t] == 1);
    CHECK(double(oracle::log_weight(spin, x)) == doctest::Approx(double(w)).epsilon(1e-12));
  }
}

TEST_CASE("l1 error") {
  const std::vector<double> a{0.1, 0.5, 0.9};
  const std::vector<double> b{0.2, 0.5, 0.6};
  CHECK(l1_error(a, b) == doctest::Approx(0.4 / 3));
  CHECK(l1_error(a, a) == 0.0);
  CHECK(l1_error(std::vector<double>{0, 1}, std::vector<double>{1, 0}) == 1.0);
  CHECK_THROWS_AS(l1_error(a, std::vector<double>{0.1}), InputError);
  CHECK_THROWS_AS(l1_error(std::vector<double>{}, std::vector<double>{}), InputError);
}

TEST_CASE("tree-based table rows are accurate on nearly uncoupled models") {
  const TrialSpec spec{GraphKind::grid3x3, Coupling::mixed, 0.25, 1e-9, 5, 1};
  const auto rows = run_table(spec, Targets::node, all_table_methods(), {});
  REQUIRE(rows.size() == 4);
  for (const TableRow& r : rows) {
    CHECK(r.kept + r.discarded == 5);
    CHECK(r.violations == 0);
    // The log-det relaxation is not exact even without couplings.
    if (r.method == TableMethod::mf_tree_lower || r.method == TableMethod::tree_mf_upper) CHECK(r.mean_l1 <= 1e-3);
    else CHECK(r.mean_l1 <= 0.5);
  }
}

TEST_CASE("table rows are reproducible and the csv is stable") {
  const TrialSpec spec{GraphKind::grid3x3, Coupling::attractive, 0.25, 1.0, 4, 7};
  const std::vector<TableMethod> methods{TableMethod::mf_tree_lower, TableMethod::tree_mf_upper};
  std::ostringstream a, b;
  write_table_csv(a, run_table(spec, Targets::pair, methods, {}));
  write_table_csv(b, run_table(spec, Targets::pair, methods, {}));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("method,", 0) == 0);
}

TEST_CASE("figure data: Markov chain without coupling matches iid trials") {
  const Figure1Data d = figure1_data(12, 0.4, 0.5, 0.0, 31, 3.0);
  REQUIRE(d.lambda.size() == 31);
  CHECK(d.lambda.front() == 0.0);
  CHECK(d.lambda.back() == doctest::Approx(3.0));
  for (std::size_t i = 0; i < d.lambda.size(); ++i)
    CHECK(d.markov_objective[i] == doctest::Approx(d.iid_objective[i]).epsilon(1e-9));
}

TEST_CASE("figure data: reference lines and ordering") {
  const Figure1Data d = figure1_data(30, 0.5, 0.5, -1.0, 200, 3.0);
  const auto& ref = d.reference;
  CHECK(ref.at("threshold_count").get<int>() == 23);
  const double iid_true = ref.at("iid_true").get<double>();
  CHECK(iid_true == doctest::Approx(oracle::binomial_tail(30, 0.5, 23)).epsilon(1e-10));
  CHECK(ref.at("classical_simple").get<double>() >= ref.at("classical_tight").get<double>() - 1e-12);
  CHECK(ref.at("iid_min").at("value").get<double>() >= iid_true);
  CHECK(ref.at("markov_min").at("value").get<double>() >= ref.at("markov_true").get<double>());
  CHECK(ref.at("markov_min").at("value").get<double>() < ref.at("iid_min").at("value").get<double>());
  std::ostringstream csv;
  write_figure1_csv(csv, d);
  CHECK(csv.str().rfind("lambda,iid_objective,markov_objective\n", 0) == 0);
  CHECK_THROWS_AS(figure1_data(30, 1.5, 0.5, -1.0), InputError);
}

TEST_CASE("oracle suite passes") {
  const SuiteReport r = run_oracle_suite(3, 10);
  CHECK(r.passed());
  CHECK_FALSE(r.lines.empty());
}
