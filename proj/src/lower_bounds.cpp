#include <algorithm>
#include <cmath>
#include <numeric>

#include "vcb/approx.hpp"
#include "vcb/error.hpp"
#include "vcb/numeric.hpp"
#include "vcb/random.hpp"

namespace vcb {

void ApproxConfig::validate() const {
  if (max_iterations < 1) throw InputError("max_iterations must be at least 1");
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
  if (!(damping >= 0.0 && damping < 1.0)) throw InputError("damping must lie in [0, 1)");
  if (restarts < 0) throw InputError("restarts must be non-negative");
  if (mbest < 1) throw InputError("mbest must be at least 1");
}

namespace {

double mean_field_objective(const ExponentialModel& model, const std::vector<double>& m) {
  double value = 0.0;
  for (int s = 0; s < model.num_nodes(); ++s) {
    const double ms = m[static_cast<std::size_t>(s)];
    value += model.node_param(s) * ms + binary_entropy(0.5 * (1.0 + ms));
  }
  const auto edges = model.graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    value += model.edge_param(static_cast<int>(e)) * m[static_cast<std::size_t>(edges[e].s)] *
             m[static_cast<std::size_t>(edges[e].t)];
  }
  return value;
}

struct MeanFieldRun {
  std::vector<double> means;
  double value;
  int sweeps;
  bool converged;
  double last_change;
};

MeanFieldRun coordinate_ascent(const ExponentialModel& model, std::vector<double> m,
                               const ApproxConfig& cfg) {
  const Graph& g = model.graph();
  MeanFieldRun run{{}, 0.0, 0, false, 0.0};
  for (int sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
    double change = 0.0;
    for (int s = 0; s < model.num_nodes(); ++s) {
      double field = model.node_param(s);
      for (const Neighbor& nb : g.neighbors(s)) {
        field += model.edge_param(nb.edge) * m[static_cast<std::size_t>(nb.node)];
      }
      const double updated = std::tanh(field);
      change = std::max(change, std::abs(updated - m[static_cast<std::size_t>(s)]));
      m[static_cast<std::size_t>(s)] = updated;
    }
    run.sweeps = sweep;
    run.last_change = change;
    if (change < cfg.tolerance) {
      run.converged = true;
      break;
    }
  }
  run.value = mean_field_objective(model, m);
  run.means = std::move(m);
  return run;
}

}  // namespace

ApproxResult mean_field_lower(const ExponentialModel& model, const ApproxConfig& cfg) {
  cfg.validate();
  const int n = model.num_nodes();
  Rng rng(cfg.seed);

  MeanFieldRun best = coordinate_ascent(model, std::vector<double>(static_cast<std::size_t>(n), 0.0), cfg);
  int total_sweeps = best.sweeps;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> start(static_cast<std::size_t>(n));
    for (double& v : start) v = uniform(rng, -1.0, 1.0);
    MeanFieldRun run = coordinate_ascent(model, std::move(start), cfg);
    total_sweeps += run.sweeps;
    if (run.value > best.value) best = std::move(run);
  }

  ApproxResult out;
  out.bound.value = best.value + model.log_offset();
  out.bound.direction = Direction::lower;
  out.bound.method = "mean_field";
  out.bound.diagnostics.iterations = total_sweeps;
  out.bound.diagnostics.converged = best.converged || n == 0;
  out.bound.diagnostics.final_step = best.last_change;
  out.bound.diagnostics.raw_value = out.bound.value;

  out.marginals.node_means = best.means;
  for (const Edge& e : model.graph().edges()) {
    out.marginals.edge_means.push_back(best.means[static_cast<std::size_t>(e.s)] *
                                       best.means[static_cast<std::size_t>(e.t)]);
  }
  return out;
}

BoundResult m_best_lower(const ExponentialModel& model, std::uint64_t m) {
  const int n = model.num_nodes();
  if (n > kMaxEnumerationNodes) {
    throw ScaleExceeded("top-M enumeration needs n <= " + std::to_string(kMaxEnumerationNodes));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  if (m < 1 || m > total) {
    throw InputError("M must lie in [1, 2^n] = [1, " + std::to_string(total) + "]");
  }
  std::vector<std::pair<double, std::uint64_t>> scored(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) scored[idx] = {model.log_unnorm_index(idx), idx};
  auto better = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(m), scored.end(),
                    better);
  std::vector<double> kept(m);
  for (std::uint64_t i = 0; i < m; ++i) kept[i] = scored[i].first;

  BoundResult r;
  r.value = log_sum_exp(kept);
  r.direction = Direction::lower;
  r.method = "m_best";
  r.diagnostics.raw_value = r.value;
  r.diagnostics.note = "M = " + std::to_string(m);
  return r;
}

}  // namespace vcb
