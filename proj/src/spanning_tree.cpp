#include <cmath>

#include <Eigen/Dense>

#include "vcb/approx.hpp"
#include "vcb/error.hpp"

namespace vcb {

namespace {

// Effective resistances on one connected component given by `nodes`.
void component_resistances(const Graph& graph, const std::vector<int>& nodes,
                           const std::vector<int>& local, std::vector<double>& rho) {
  const auto k = static_cast<Eigen::Index>(nodes.size());
  if (k < 2) return;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(k, k);
  for (int e = 0; e < graph.num_edges(); ++e) {
    const Edge& ed = graph.edge(e);
    const int a = local[static_cast<std::size_t>(ed.s)];
    const int b = local[static_cast<std::size_t>(ed.t)];
    if (a < 0 || b < 0) continue;
    lap(a, a) += 1.0;
    lap(b, b) += 1.0;
    lap(a, b) -= 1.0;
    lap(b, a) -= 1.0;
  }
  // L^+ = (L + J/k)^{-1} - J/k for a connected Laplacian.
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Constant(k, k, 1.0 / static_cast<double>(k));
  const Eigen::MatrixXd pinv = (lap + ones).ldlt().solve(Eigen::MatrixXd::Identity(k, k)) - ones;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const Edge& ed = graph.edge(e);
    const int a = local[static_cast<std::size_t>(ed.s)];
    const int b = local[static_cast<std::size_t>(ed.t)];
    if (a < 0 || b < 0) continue;
    rho[static_cast<std::size_t>(e)] = pinv(a, a) + pinv(b, b) - 2.0 * pinv(a, b);
  }
}

}  // namespace

EdgeAppearance spanning_forest_rhos(const Graph& graph) {
  const auto labels = graph.component_labels();
  const int comps = graph.num_components();
  std::vector<double> rho(static_cast<std::size_t>(graph.num_edges()), 0.0);
  for (int c = 0; c < comps; ++c) {
    std::vector<int> nodes;
    std::vector<int> local(static_cast<std::size_t>(graph.num_nodes()), -1);
    for (int v = 0; v < graph.num_nodes(); ++v) {
      if (labels[static_cast<std::size_t>(v)] == c) {
        local[static_cast<std::size_t>(v)] = static_cast<int>(nodes.size());
        nodes.push_back(v);
      }
    }
    component_resistances(graph, nodes, local, rho);
  }
  for (double& r : rho) r = std::min(r, 1.0);
  return {std::move(rho)};
}

EdgeAppearance spanning_tree_rhos(const Graph& graph) {
  if (graph.num_nodes() < 1 || !graph.is_connected()) {
    throw InputError("spanning_tree_rhos requires a connected graph");
  }
  return spanning_forest_rhos(graph);
}

}  // namespace vcb
