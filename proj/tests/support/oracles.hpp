#pragma once

// Reference computations for tests. Nothing here calls the library's exact
// inference; configurations are enumerated directly from the parameters.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "vcb/classical.hpp"
#include "vcb/model.hpp"
#include "vcb/random.hpp"

namespace oracle {

using Spins = std::vector<int>;

// Lexicographic over {-1, +1}^n with node 0 most significant.
inline std::vector<Spins> all_configs(int n) {
  std::vector<Spins> out;
  Spins x(static_cast<std::size_t>(n), -1);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (k >> (n - 1 - i)) & 1U ? 1 : -1;
    out.push_back(x);
  }
  return out;
}

inline long double log_weight(const vcb::ExponentialModel& m, const Spins& x) {
  long double w = m.log_offset();
  for (int s = 0; s < m.num_nodes(); ++s) w += m.node_param(s) * x[static_cast<std::size_t>(s)];
  int e = 0;
  for (const vcb::Edge& ed : m.graph().edges()) {
    w += m.edge_param(e++) * x[static_cast<std::size_t>(ed.s)] * x[static_cast<std::size_t>(ed.t)];
  }
  return w;
}

inline double log_sum(const std::vector<long double>& v) {
  if (v.empty()) return -INFINITY;
  long double mx = v.front();
  for (long double a : v) mx = std::max(mx, a);
  long double s = 0;
  for (long double a : v) s += std::exp(a - mx);
  return static_cast<double>(mx + std::log(s));
}

inline double log_z(const vcb::ExponentialModel& m, const std::function<bool(const Spins&)>& keep = {}) {
  std::vector<long double> w;
  for (const Spins& x : all_configs(m.num_nodes()))
    if (!keep || keep(x)) w.push_back(log_weight(m, x));
  return log_sum(w);
}

inline double log_prob(const vcb::ExponentialModel& m, const std::function<bool(const Spins&)>& in) {
  return log_z(m, in) - log_z(m);
}

// E[x_s] and E[x_s x_t] in edge order.
inline std::vector<double> means(const vcb::ExponentialModel& m) {
  const double z = log_z(m);
  std::vector<double> mu(static_cast<std::size_t>(m.dim()), 0.0);
  for (const Spins& x : all_configs(m.num_nodes())) {
    const double p = std::exp(static_cast<double>(log_weight(m, x)) - z);
    for (int s = 0; s < m.num_nodes(); ++s) mu[static_cast<std::size_t>(s)] += p * x[static_cast<std::size_t>(s)];
    int e = 0;
    for (const vcb::Edge& ed : m.graph().edges()) {
      mu[static_cast<std::size_t>(m.num_nodes() + e++)] +=
          p * x[static_cast<std::size_t>(ed.s)] * x[static_cast<std::size_t>(ed.t)];
    }
  }
  return mu;
}

inline int count_plus(const Spins& x) {
  return static_cast<int>(std::count(x.begin(), x.end(), 1));
}

// log P(Binomial(n, p) >= k), summed in long double.
inline double binomial_tail(int n, double p, int k) {
  long double s = 0;
  for (int j = std::max(k, 0); j <= n; ++j) {
    long double c = 1;
    for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
    s += c * std::pow(static_cast<long double>(p), j) * std::pow(static_cast<long double>(1 - p), n - j);
  }
  return static_cast<double>(std::log(s));
}

// Spanning trees by subset enumeration: per-edge frequency and tree count.
struct TreeCount {
  std::vector<double> edge_freq;
  long trees = 0;
};

inline TreeCount spanning_trees(const vcb::Graph& g) {
  const int n = g.num_nodes();
  const int m = g.num_edges();
  TreeCount out;
  out.edge_freq.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<long> hits(static_cast<std::size_t>(m), 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (std::popcount(mask) != n - 1) continue;
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
      return parent[static_cast<std::size_t>(v)] == v ? v : parent[static_cast<std::size_t>(v)] = find(parent[static_cast<std::size_t>(v)]);
    };
    bool acyclic = true;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!(mask >> e & 1U)) continue;
      const int a = find(g.edge(e).s);
      const int b = find(g.edge(e).t);
      if (a == b) acyclic = false;
      parent[static_cast<std::size_t>(a)] = b;
    }
    if (!acyclic) continue;
    ++out.trees;
    for (int e = 0; e < m; ++e)
      if (mask >> e & 1U) ++hits[static_cast<std::size_t>(e)];
  }
  for (int e = 0; e < m; ++e) out.edge_freq[static_cast<std::size_t>(e)] = double(hits[static_cast<std::size_t>(e)]) / double(out.trees);
  return out;
}

// log P(#ones >= k) for the {0,1} chain with node terms theta_b and
// transition terms theta_{b b'}, by enumeration.
inline double binary_chain_tail(int n, const vcb::BinaryMarkovParams& q, int k) {
  std::vector<long double> all;
  std::vector<long double> in;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    long double w = 0;
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      const int b = mask >> i & 1U;
      ones += b;
      w += b ? q.theta1 : q.theta0;
      if (i + 1 < n) {
        const int c = mask >> (i + 1) & 1U;
        w += b ? (c ? q.theta11 : q.theta10) : (c ? q.theta01 : q.theta00);
      }
    }
    all.push_back(w);
    if (ones >= k) in.push_back(w);
  }
  return log_sum(in) - log_sum(all);
}

inline vcb::ExponentialModel random_model(vcb::Graph g, vcb::Rng& rng, double scale) {
  std::vector<double> nodes(static_cast<std::size_t>(g.num_nodes()));
  std::vector<double> edges(static_cast<std::size_t>(g.num_edges()));
  for (double& v : nodes) v = vcb::uniform(rng, -scale, scale);
  for (double& v : edges) v = vcb::uniform(rng, -scale, scale);
  return vcb::ExponentialModel(std::move(g), std::move(nodes), std::move(edges), vcb::uniform(rng, -1.0, 1.0));
}

inline vcb::Graph random_tree(int n, vcb::Rng& rng) {
  std::vector<vcb::Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({static_cast<int>(vcb::uniform01(rng) * v), v});
  return vcb::Graph(n, std::move(edges));
}

}  // namespace oracle
