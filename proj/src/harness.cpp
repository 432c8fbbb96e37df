#include "vcb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vcb/classical.hpp"
#include "vcb/engine.hpp"
#include "vcb/error.hpp"
#include "vcb/exact.hpp"
#include "vcb/numeric.hpp"
#include "vcb/random.hpp"

namespace vcb {

std::string to_string(GraphKind g) { return g == GraphKind::grid3x3 ? "grid3x3" : "full9"; }

std::string to_string(Coupling c) {
  switch (c) {
    case Coupling::repulsive: return "repulsive";
    case Coupling::mixed: return "mixed";
    case Coupling::attractive: return "attractive";
  }
  return "unknown";
}

std::string to_string(Targets t) { return t == Targets::node ? "node" : "pair"; }

std::string to_string(Domain d) { return d == Domain::spin ? "spin" : "binary"; }

std::string to_string(TableMethod m) {
  switch (m) {
    case TableMethod::mf_tree_lower: return "mf_tree_lower";
    case TableMethod::mf_sdp_lower: return "mf_sdp_lower";
    case TableMethod::tree_mf_upper: return "tree_mf_upper";
    case TableMethod::sdp_heuristic: return "sdp_heuristic";
  }
  return "unknown";
}

GraphKind parse_graph_kind(const std::string& s) {
  if (s == "grid3x3") return GraphKind::grid3x3;
  if (s == "full9") return GraphKind::full9;
  throw InputError("unknown graph \"" + s + "\" (expected grid3x3 or full9)");
}

Coupling parse_coupling(const std::string& s) {
  if (s == "repulsive") return Coupling::repulsive;
  if (s == "mixed") return Coupling::mixed;
  if (s == "attractive") return Coupling::attractive;
  throw InputError("unknown coupling \"" + s + "\" (expected repulsive, mixed or attractive)");
}

Targets parse_targets(const std::string& s) {
  if (s == "node") return Targets::node;
  if (s == "pair") return Targets::pair;
  throw InputError("unknown targets \"" + s + "\" (expected node or pair)");
}

Domain parse_domain(const std::string& s) {
  if (s == "spin") return Domain::spin;
  if (s == "binary") return Domain::binary;
  throw InputError("unknown domain \"" + s + "\" (expected spin or binary)");
}

TableMethod parse_table_method(const std::string& s) {
  for (TableMethod m : all_table_methods())
    if (to_string(m) == s) return m;
  throw InputError("unknown table method \"" + s + "\"");
}

const std::vector<TableMethod>& all_table_methods() {
  static const std::vector<TableMethod> methods{TableMethod::mf_tree_lower, TableMethod::mf_sdp_lower,
                                                TableMethod::tree_mf_upper, TableMethod::sdp_heuristic};
  return methods;
}

void TrialSpec::validate() const {
  if (!(d_pot > 0.0) || !std::isfinite(d_pot)) throw InputError("d_pot must be positive");
  if (!(d_coup > 0.0) || !std::isfinite(d_coup)) throw InputError("d_coup must be positive");
  if (trials < 1) throw InputError("trials must be at least 1");
}

Graph make_graph(GraphKind kind) {
  return kind == GraphKind::grid3x3 ? Graph::grid(3, 3) : Graph::complete(9);
}

ExponentialModel binary_to_spin(const ExponentialModel& potentials) {
  const Graph& g = potentials.graph();
  std::vector<double> nodes(static_cast<std::size_t>(g.num_nodes()));
  std::vector<double> edges(static_cast<std::size_t>(g.num_edges()));
  double offset = potentials.log_offset();
  for (int s = 0; s < g.num_nodes(); ++s) {
    nodes[static_cast<std::size_t>(s)] = 0.5 * potentials.node_param(s);
    offset += 0.5 * potentials.node_param(s);
  }
  // a b_s b_t = a/4 (1 + x_s + x_t + x_s x_t)
  for (int e = 0; e < g.num_edges(); ++e) {
    const double q = 0.25 * potentials.edge_param(e);
    edges[static_cast<std::size_t>(e)] = q;
    nodes[static_cast<std::size_t>(g.edge(e).s)] += q;
    nodes[static_cast<std::size_t>(g.edge(e).t)] += q;
    offset += q;
  }
  return ExponentialModel(g, std::move(nodes), std::move(edges), offset);
}

ExponentialModel random_model(const TrialSpec& spec, int trial_index) {
  spec.validate();
  Graph g = make_graph(spec.graph);
  Rng rng(spec.seed ^ static_cast<std::uint64_t>(trial_index));
  std::vector<double> nodes(static_cast<std::size_t>(g.num_nodes()));
  for (double& v : nodes) v = uniform(rng, -spec.d_pot, spec.d_pot);
  double lo = -spec.d_coup;
  double hi = spec.d_coup;
  if (spec.coupling == Coupling::repulsive) {
    lo = -2.0 * spec.d_coup;
    hi = 0.0;
  } else if (spec.coupling == Coupling::attractive) {
    lo = 0.0;
    hi = 2.0 * spec.d_coup;
  }
  std::vector<double> edges(static_cast<std::size_t>(g.num_edges()));
  for (double& v : edges) v = uniform(rng, lo, hi);
  ExponentialModel drawn(std::move(g), std::move(nodes), std::move(edges));
  return spec.domain == Domain::spin ? drawn : binary_to_spin(drawn);
}

double l1_error(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size()) {
    throw InputError("l1_error: " + std::to_string(estimates.size()) + " estimates for " +
                     std::to_string(truths.size()) + " truths");
  }
  if (estimates.empty()) throw InputError("l1_error: no targets");
  double s = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) s += std::abs(estimates[i] - truths[i]);
  return s / static_cast<double>(truths.size());
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct MethodOutcome {
  std::vector<double> estimates;
  bool converged = true;
  bool violated = false;
};

MethodOutcome from_bounds(const std::vector<BoundResult>& bounds, std::span<const double> truths) {
  MethodOutcome out;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const BoundResult& b = bounds[i];
    const double p = std::exp(b.value);
    out.converged = out.converged && b.diagnostics.converged;
    if (b.direction == Direction::lower ? p > truths[i] + 1e-6 : p < truths[i] - 1e-6) out.violated = true;
    out.estimates.push_back(clamp01(p));
  }
  return out;
}

}  // namespace

std::vector<TableRow> run_table(const TrialSpec& spec, Targets targets,
                                std::span<const TableMethod> methods, const ApproxConfig& cfg) {
  spec.validate();
  cfg.validate();
  const MethodSelector tree_mf{UpperMethod::trbp, LowerMethod::mean_field};
  const MethodSelector sdp_mf{UpperMethod::logdet, LowerMethod::mean_field};

  std::vector<std::vector<double>> errors(methods.size());
  std::vector<TableRow> rows(methods.size());
  for (std::size_t k = 0; k < methods.size(); ++k) rows[k].method = methods[k];

  for (int trial = 0; trial < spec.trials; ++trial) {
    const ExponentialModel model = random_model(spec, trial);
    const Graph& g = model.graph();
    const PseudoMarginals exact = brute_marginals(model);

    std::vector<Event> events;
    std::vector<double> truths;
    if (targets == Targets::node) {
      for (int s = 0; s < g.num_nodes(); ++s) {
        events.emplace_back(NodeMarginal{s, 1});
        truths.push_back(exact.node_prob(s, 1));
      }
    } else {
      for (int e = 0; e < g.num_edges(); ++e) {
        events.emplace_back(PairMarginal{g.edge(e).s, g.edge(e).t, 1, 1});
        truths.push_back(exact.pair_prob(g, e, 1, 1));
      }
    }

    for (std::size_t k = 0; k < methods.size(); ++k) {
      MethodOutcome out;
      switch (methods[k]) {
        case TableMethod::mf_tree_lower:
          out = from_bounds(bound_events_lower(model, events, tree_mf, cfg), truths);
          break;
        case TableMethod::mf_sdp_lower:
          out = from_bounds(bound_events_lower(model, events, sdp_mf, cfg), truths);
          break;
        case TableMethod::tree_mf_upper:
          out = from_bounds(bound_events_upper(model, events, tree_mf, cfg), truths);
          break;
        case TableMethod::sdp_heuristic: {
          const ApproxResult r = logdet_sdp_upper(model, cfg);
          out.converged = r.bound.diagnostics.converged;
          const PseudoMarginals& mu = r.marginals;
          if (targets == Targets::node) {
            for (int s = 0; s < g.num_nodes(); ++s) out.estimates.push_back(clamp01(mu.node_prob(s, 1)));
          } else {
            for (int e = 0; e < g.num_edges(); ++e) out.estimates.push_back(clamp01(mu.pair_prob(g, e, 1, 1)));
          }
          break;
        }
      }
      if (!out.converged) {
        ++rows[k].discarded;
        continue;
      }
      if (out.violated) ++rows[k].violations;
      errors[k].push_back(l1_error(out.estimates, truths));
    }
  }

  for (std::size_t k = 0; k < methods.size(); ++k) {
    const auto& e = errors[k];
    TableRow& row = rows[k];
    row.kept = static_cast<int>(e.size());
    if (e.empty()) {
      row.mean_l1 = row.std_l1 = std::nan("");
      continue;
    }
    double sum = 0.0;
    for (double v : e) sum += v;
    row.mean_l1 = sum / static_cast<double>(e.size());
    double ss = 0.0;
    for (double v : e) ss += (v - row.mean_l1) * (v - row.mean_l1);
    row.std_l1 = e.size() > 1 ? std::sqrt(ss / static_cast<double>(e.size() - 1)) : 0.0;
  }
  return rows;
}

void write_table_csv(std::ostream& os, std::span<const TableRow> rows) {
  os << "method,mean_l1,std_l1,discarded\n";
  char buf[128];
  for (const TableRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%d\n", to_string(r.method).c_str(), r.mean_l1, r.std_l1,
                  r.discarded);
    os << buf;
  }
}

Figure1Data figure1_data(int n, double p, double delta, double theta_pair, int points, double lambda_max) {
  const BernoulliSpec spec(n, p, delta);
  if (points < 2) throw InputError("figure needs at least 2 lambda points");
  if (!(lambda_max > 0.0)) throw InputError("lambda_max must be positive");
  if (!std::isfinite(theta_pair)) throw InputError("theta_pair must be finite");

  BinaryMarkovParams params;
  params.theta1 = std::log(p / (1.0 - p));
  params.theta11 = theta_pair;
  const ChainModel chain = spin_chain_from_binary(n, params);
  const double threshold = spec.upper_threshold();
  const int k = spec.threshold_count();

  Figure1Data d;
  for (int i = 0; i < points; ++i) {
    const double lam = lambda_max * i / (points - 1);
    d.lambda.push_back(lam);
    d.iid_objective.push_back(iid_mgf_objective(spec, lam));
    d.markov_objective.push_back(markov_objective(chain, threshold, lam));
  }

  const ScalarMinimum iid_min = minimize_iid_objective(spec);
  const ScalarMinimum markov_min =
      minimize_golden([&](double lam) { return markov_objective(chain, threshold, lam); }, 0.0, 8.0);
  nlohmann::json& r = d.reference;
  r["n"] = n;
  r["p"] = p;
  r["delta"] = delta;
  r["theta_pair"] = theta_pair;
  r["threshold"] = threshold;
  r["threshold_count"] = k;
  if (delta < 2.0 * std::exp(1.0) - 1.0) {
    r["classical_simple"] = chernoff_upper_simple(spec);
  } else {
    r["classical_simple"] = nullptr;
  }
  r["classical_tight"] = chernoff_upper_tight(spec);
  r["iid_true"] = k > n ? kNegInf : binomial_log_upper_tail(n, p, k);
  r["markov_true"] = k > n ? kNegInf : chain_count_log_prob(chain, k);
  r["iid_min"] = {{"lambda", iid_min.argmin}, {"value", iid_min.value}};
  r["markov_min"] = {{"lambda", markov_min.argmin}, {"value", markov_min.value}};
  r["binary_params"] = {{"theta0", params.theta0},   {"theta1", params.theta1},
                        {"theta00", params.theta00}, {"theta01", params.theta01},
                        {"theta10", params.theta10}, {"theta11", params.theta11}};
  const ExponentialModel& m = chain.model();
  r["spin_params"] = {{"node_params", std::vector<double>(m.node_params().begin(), m.node_params().end())},
                      {"edge_params", std::vector<double>(m.edge_params().begin(), m.edge_params().end())},
                      {"log_offset", m.log_offset()}};
  if (!std::isfinite(r["iid_true"].get<double>())) r["iid_true"] = nullptr;
  if (!std::isfinite(r["markov_true"].get<double>())) r["markov_true"] = nullptr;
  return d;
}

void write_figure1_csv(std::ostream& os, const Figure1Data& data) {
  os << "lambda,iid_objective,markov_objective\n";
  char buf[128];
  for (std::size_t i = 0; i < data.lambda.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f,%.10f,%.10f\n", data.lambda[i], data.iid_objective[i],
                  data.markov_objective[i]);
    os << buf;
  }
}

const std::vector<Cell>& table_cells() {
  static const std::vector<Cell> cells{
      {GraphKind::grid3x3, Coupling::repulsive, 0.25, 1.0},  {GraphKind::grid3x3, Coupling::repulsive, 0.25, 2.0},
      {GraphKind::grid3x3, Coupling::mixed, 0.25, 1.0},      {GraphKind::grid3x3, Coupling::mixed, 0.25, 2.0},
      {GraphKind::grid3x3, Coupling::attractive, 0.25, 1.0}, {GraphKind::grid3x3, Coupling::attractive, 0.25, 2.0},
      {GraphKind::full9, Coupling::repulsive, 0.25, 0.25},   {GraphKind::full9, Coupling::repulsive, 0.25, 0.50},
      {GraphKind::full9, Coupling::mixed, 0.25, 0.25},       {GraphKind::full9, Coupling::mixed, 0.25, 0.50},
      {GraphKind::full9, Coupling::attractive, 0.25, 0.06},  {GraphKind::full9, Coupling::attractive, 0.25, 0.12},
  };
  return cells;
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string check_line(bool ok, const std::string& what) { return (ok ? "ok   " : "FAIL ") + what; }

ExponentialModel random_on(Graph g, Rng& rng, double scale) {
  std::vector<double> nodes(static_cast<std::size_t>(g.num_nodes()));
  std::vector<double> edges(static_cast<std::size_t>(g.num_edges()));
  for (double& v : nodes) v = uniform(rng, -scale, scale);
  for (double& v : edges) v = uniform(rng, -scale, scale);
  return ExponentialModel(std::move(g), std::move(nodes), std::move(edges), uniform(rng, -1.0, 1.0));
}

Graph random_tree(int n, Rng& rng) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) {
    const int parent = static_cast<int>(uniform01(rng) * v);
    edges.push_back({parent, v});
  }
  return Graph(n, std::move(edges));
}

double brute_count_tail(const ExponentialModel& m, int k_min) {
  const int n = m.num_nodes();
  std::vector<double> in;
  std::vector<double> all;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
    const double w = m.log_unnorm_index(idx);
    all.push_back(w);
    int plus = 0;
    for (int i = 0; i < n; ++i) plus += spin_at(idx, i, n) > 0;
    if (plus >= k_min) in.push_back(w);
  }
  return in.empty() ? kNegInf : log_sum_exp(in) - log_sum_exp(all);
}

}  // namespace

SuiteReport run_oracle_suite(std::uint64_t seed, int models) {
  SuiteReport rep;
  Rng rng(seed);
  double chain_err = 0.0;
  double tree_err = 0.0;
  double count_err = 0.0;
  for (int i = 0; i < models; ++i) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 14);
    const ExponentialModel chain = random_on(Graph::path(n), rng, 1.5);
    chain_err = std::max(chain_err, std::abs(chain_phi(ChainModel(chain)) - brute_phi(chain)));
    const ExponentialModel tree = random_on(random_tree(n, rng), rng, 1.5);
    tree_err = std::max(tree_err, std::abs(tree_phi(tree) - brute_phi(tree)));
    const int nc = 1 + static_cast<int>(uniform01(rng) * 16);
    const ExponentialModel counted = random_on(Graph::path(nc), rng, 1.0);
    const int k = static_cast<int>(uniform01(rng) * (nc + 1));
    const double dp = chain_count_log_prob(ChainModel(counted), k);
    count_err = std::max(count_err, std::abs(dp - brute_count_tail(counted, k)));
  }
  const auto add = [&](double err, const char* what) {
    const bool ok = err <= 1e-9;
    rep.violations += ok ? 0 : 1;
    rep.lines.push_back(check_line(ok, fmt(what, err)));
  };
  add(chain_err, "chain transfer recursion vs enumeration: max error %.3g");
  add(tree_err, "tree elimination vs enumeration: max error %.3g");
  add(count_err, "count tail dynamic program vs enumeration: max error %.3g");
  return rep;
}

SuiteReport run_validity_suite(std::uint64_t seed, const ApproxConfig& cfg, int trials_per_cell) {
  SuiteReport rep;
  const MethodSelector tree_mf{UpperMethod::trbp, LowerMethod::mean_field};
  const MethodSelector sdp_mf{UpperMethod::logdet, LowerMethod::mean_field};
  constexpr double kTol = 1e-6;
  for (GraphKind gk : {GraphKind::grid3x3, GraphKind::full9}) {
    for (Coupling c : {Coupling::repulsive, Coupling::mixed, Coupling::attractive}) {
      std::vector<Cell> strengths;
      for (const Cell& cell : table_cells())
        if (cell.graph == gk && cell.coupling == c) strengths.push_back(cell);
      int checked = 0;
      int skipped = 0;
      int bad = 0;
      for (int trial = 0; trial < trials_per_cell; ++trial) {
        const Cell& cell = strengths[static_cast<std::size_t>(trial) % strengths.size()];
        const TrialSpec spec{gk, c, cell.d_pot, cell.d_coup, trials_per_cell, seed, Domain::spin};
        const ExponentialModel model = random_model(spec, trial);
        const double phi = brute_phi(model);

        const ApproxResult mf = mean_field_lower(model, cfg);
        const ApproxResult tr = trbp_upper(model, spanning_tree_rhos(model.graph()), cfg);
        const ApproxResult ld = logdet_sdp_upper(model, cfg);
        for (const ApproxResult* r : {&mf, &tr, &ld}) {
          if (!r->bound.diagnostics.converged) {
            ++skipped;
            continue;
          }
          ++checked;
          const bool ok = r == &mf ? r->bound.value <= phi + kTol : r->bound.value >= phi - kTol;
          bad += ok ? 0 : 1;
        }

        std::vector<Event> events;
        const Graph& g = model.graph();
        for (int s = 0; s < g.num_nodes(); ++s) {
          events.emplace_back(NodeMarginal{s, 1});
          events.emplace_back(NodeMarginal{s, -1});
        }
        for (const Edge& e : g.edges()) {
          for (Spin vs : {-1, 1})
            for (Spin vt : {-1, 1}) events.emplace_back(PairMarginal{e.s, e.t, vs, vt});
        }
        std::vector<double> truth;
        for (const Event& e : events) truth.push_back(event_log_prob(model, e));
        for (const MethodSelector& sel : {tree_mf, sdp_mf}) {
          const auto lower = bound_events_lower(model, events, sel, cfg);
          const auto upper = bound_events_upper(model, events, sel, cfg);
          for (std::size_t i = 0; i < events.size(); ++i) {
            for (const BoundResult* b : {&lower[i], &upper[i]}) {
              if (!b->diagnostics.converged) {
                ++skipped;
                continue;
              }
              ++checked;
              const bool ok = b->direction == Direction::lower ? b->value <= truth[i] + kTol
                                                               : b->value >= truth[i] - kTol;
              bad += ok ? 0 : 1;
            }
          }
        }
      }
      rep.violations += bad;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s %s: %d violations in %d checked bounds (%d unconverged skipped)",
                    to_string(gk).c_str(), to_string(c).c_str(), bad, checked, skipped);
      rep.lines.push_back(check_line(bad == 0, buf));
    }
  }
  return rep;
}

SuiteReport run_tightness_suite(std::uint64_t seed, int models) {
  SuiteReport rep;
  Rng rng(seed);
  double worst_marginal = 0.0;
  double worst_threshold = 0.0;
  for (int i = 0; i < models; ++i) {
    Graph g = i % 2 == 0 ? Graph::path(5) : Graph::cycle(5);
    const ExponentialModel model = random_on(std::move(g), rng, 1.0);
    const int node = static_cast<int>(uniform01(rng) * 5);
    const TightnessResult marginal = tightness_check(model, Event(NodeMarginal{node, 1}));
    const TightnessResult threshold = tightness_check(model, Event::spin_sum_at_least(5, 3.0));
    worst_marginal = std::max(worst_marginal, marginal.gap);
    worst_threshold = std::max(worst_threshold, threshold.gap);
  }
  const auto add = [&](double gap, const char* what) {
    const bool ok = gap <= 1e-3;
    rep.violations += ok ? 0 : 1;
    rep.lines.push_back(check_line(ok, fmt(what, gap)));
  };
  add(worst_marginal, "node marginal events: worst gap %.3g");
  add(worst_threshold, "threshold events sum(x) >= 3: worst gap %.3g");
  return rep;
}

}  // namespace vcb
