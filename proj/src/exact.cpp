#include "vcb/exact.hpp"

#include <array>
#include <cmath>

#include "vcb/error.hpp"
#include "vcb/numeric.hpp"

namespace vcb {

namespace {

void require_enumerable(const ExponentialModel& model) {
  if (model.num_nodes() > kMaxEnumerationNodes) {
    throw ScaleExceeded("brute-force enumeration needs n <= " +
                        std::to_string(kMaxEnumerationNodes) + ", got n = " +
                        std::to_string(model.num_nodes()));
  }
}

std::vector<double> all_log_weights(const ExponentialModel& model) {
  require_enumerable(model);
  const std::uint64_t total = std::uint64_t{1} << model.num_nodes();
  std::vector<double> w(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) w[idx] = model.log_unnorm_index(idx);
  return w;
}

}  // namespace

double brute_phi(const ExponentialModel& model) { return log_sum_exp(all_log_weights(model)); }

double brute_phi_event(const ExponentialModel& model, const Event& event) {
  require_enumerable(model);
  event.validate(model.num_nodes());
  const int n = model.num_nodes();
  std::vector<double> w;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (event_contains(event, Config::from_index(idx, n))) w.push_back(model.log_unnorm_index(idx));
  }
  return log_sum_exp(w);
}

double event_log_prob(const ExponentialModel& model, const Event& event) {
  const double restricted = brute_phi_event(model, event);
  if (restricted == kNegInf) return kNegInf;
  return std::min(restricted - brute_phi(model), 0.0);
}

PseudoMarginals brute_marginals(const ExponentialModel& model) {
  const auto w = all_log_weights(model);
  const double phi = log_sum_exp(w);
  const int n = model.num_nodes();
  const auto edges = model.graph().edges();
  PseudoMarginals mu{std::vector<double>(static_cast<std::size_t>(n), 0.0),
                     std::vector<double>(edges.size(), 0.0)};
  for (std::uint64_t idx = 0; idx < w.size(); ++idx) {
    const double p = std::exp(w[idx] - phi);
    for (int i = 0; i < n; ++i) mu.node_means[static_cast<std::size_t>(i)] += p * spin_at(idx, i, n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      mu.edge_means[e] += p * spin_at(idx, edges[e].s, n) * spin_at(idx, edges[e].t, n);
    }
  }
  return mu;
}

ChainModel::ChainModel(ExponentialModel model) : model_(std::move(model)) {
  if (model_.num_nodes() < 1 || !model_.graph().is_path()) {
    throw InputError("chain model requires the path graph 0-1-...-(n-1)");
  }
}

double chain_phi(const ChainModel& chain) {
  const ExponentialModel& m = chain.model();
  const int n = m.num_nodes();
  // alpha[v] = log of the partial sum over x_0..x_i with x_i = spin(v).
  std::array<double, 2> alpha{-m.node_param(0), m.node_param(0)};
  for (int i = 1; i < n; ++i) {
    const double j = m.edge_param(i - 1);
    const double h = m.node_param(i);
    std::array<double, 2> next{};
    for (int v = 0; v < 2; ++v) {
      const double xi = v == 0 ? -1.0 : 1.0;
      next[static_cast<std::size_t>(v)] =
          xi * h + log_add_exp(alpha[0] - j * xi, alpha[1] + j * xi);
    }
    alpha = next;
  }
  return log_add_exp(alpha[0], alpha[1]) + m.log_offset();
}

double tree_phi(const ExponentialModel& model) {
  const Graph& g = model.graph();
  if (!g.is_tree()) throw InputError("tree_phi requires a connected graph with n - 1 edges");
  const int n = g.num_nodes();

  // Depth-first order from node 0; eliminate in reverse.
  std::vector<int> order;
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> parent_edge(static_cast<std::size_t>(n), -1);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (const Neighbor& nb : g.neighbors(u)) {
      if (!seen[static_cast<std::size_t>(nb.node)]) {
        seen[static_cast<std::size_t>(nb.node)] = 1;
        parent[static_cast<std::size_t>(nb.node)] = u;
        parent_edge[static_cast<std::size_t>(nb.node)] = nb.edge;
        stack.push_back(nb.node);
      }
    }
  }

  // belief[u][v]: log of the subtree sum below u with x_u = spin(v).
  std::vector<std::array<double, 2>> belief(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    belief[static_cast<std::size_t>(u)] = {-model.node_param(u), model.node_param(u)};
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    const int p = parent[static_cast<std::size_t>(u)];
    if (p < 0) continue;
    const double j = model.edge_param(parent_edge[static_cast<std::size_t>(u)]);
    const auto& bu = belief[static_cast<std::size_t>(u)];
    for (int v = 0; v < 2; ++v) {
      const double xp = v == 0 ? -1.0 : 1.0;
      belief[static_cast<std::size_t>(p)][static_cast<std::size_t>(v)] +=
          log_add_exp(bu[0] - j * xp, bu[1] + j * xp);
    }
  }
  return log_add_exp(belief[0][0], belief[0][1]) + model.log_offset();
}

double chain_count_log_prob(const ChainModel& chain, int k_min) {
  const ExponentialModel& m = chain.model();
  const int n = m.num_nodes();
  if (k_min < 0 || k_min > n) {
    throw InputError("k_min must lie in [0, " + std::to_string(n) + "], got " + std::to_string(k_min));
  }
  if (k_min == 0) return 0.0;

  // table[v][k]: log partial sum over x_0..x_i with x_i = spin(v) and k
  // plus-spins so far.
  const auto width = static_cast<std::size_t>(n + 1);
  std::array<std::vector<double>, 2> table{std::vector<double>(width, kNegInf),
                                           std::vector<double>(width, kNegInf)};
  table[0][0] = -m.node_param(0);
  table[1][1] = m.node_param(0);
  for (int i = 1; i < n; ++i) {
    const double j = m.edge_param(i - 1);
    const double h = m.node_param(i);
    std::array<std::vector<double>, 2> next{std::vector<double>(width, kNegInf),
                                            std::vector<double>(width, kNegInf)};
    for (int v = 0; v < 2; ++v) {
      const double xi = v == 0 ? -1.0 : 1.0;
      for (int k = 0; k <= i; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double incoming = log_add_exp(table[0][ku] - j * xi, table[1][ku] + j * xi);
        if (incoming == kNegInf) continue;
        const std::size_t dst = v == 1 ? ku + 1 : ku;
        next[static_cast<std::size_t>(v)][dst] = incoming + xi * h;
      }
    }
    table = std::move(next);
  }

  std::vector<double> all;
  std::vector<double> tail;
  for (int v = 0; v < 2; ++v) {
    for (int k = 0; k <= n; ++k) {
      const double w = table[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)];
      all.push_back(w);
      if (k >= k_min) tail.push_back(w);
    }
  }
  return std::min(log_sum_exp(tail) - log_sum_exp(all), 0.0);
}

}  // namespace vcb
