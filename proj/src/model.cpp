#include "vcb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "vcb/error.hpp"
#include "vcb/numeric.hpp"

namespace vcb {

namespace {

std::string edge_str(const Edge& e) {
  std::ostringstream os;
  os << "(" << e.s << ", " << e.t << ")";
  return os.str();
}

void require_spin(Spin v, const char* what) {
  if (v != 1 && v != -1) throw InputError(std::string(what) + " must be +1 or -1");
}

void require_node(int s, int n, const char* what) {
  if (s < 0 || s >= n) {
    throw InputError(std::string(what) + " index " + std::to_string(s) + " out of range [0, " +
                     std::to_string(n) + ")");
  }
}

void require_enumerable(int n) {
  if (n > kMaxEnumerationNodes) {
    throw ScaleExceeded("enumeration over 2^" + std::to_string(n) +
                        " configurations exceeds the supported scale (n <= " +
                        std::to_string(kMaxEnumerationNodes) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------- Graph

Graph::Graph(int num_nodes, std::vector<Edge> edges) : n_(num_nodes), edges_(std::move(edges)) {
  if (n_ < 0) throw InputError("node count must be non-negative");
  for (Edge& e : edges_) {
    if (e.s == e.t) throw InputError("self-loop at node " + std::to_string(e.s));
    if (e.s > e.t) std::swap(e.s, e.t);
    if (e.s < 0 || e.t >= n_) throw InputError("edge " + edge_str(e) + " has a node out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InputError("duplicate edge " + edge_str(*dup));
  }
  adjacency_.assign(static_cast<std::size_t>(n_), {});
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    adjacency_[static_cast<std::size_t>(ed.s)].push_back({ed.t, e});
    adjacency_[static_cast<std::size_t>(ed.t)].push_back({ed.s, e});
  }
}

Graph Graph::path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph Graph::cycle(int n) {
  if (n < 3) throw InputError("a cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, std::move(edges));
}

Graph Graph::complete(int n) {
  std::vector<Edge> edges;
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) edges.push_back({s, t});
  return Graph(n, std::move(edges));
}

Graph Graph::grid(int rows, int cols) {
  std::vector<Edge> edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

std::span<const Neighbor> Graph::neighbors(int node) const {
  return adjacency_.at(static_cast<std::size_t>(node));
}

std::optional<int> Graph::edge_index(int s, int t) const {
  if (s > t) std::swap(s, t);
  const Edge key{s, t};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<int>(it - edges_.begin());
}

std::vector<int> Graph::component_labels() const {
  std::vector<int> label(static_cast<std::size_t>(n_), -1);
  int next = 0;
  std::vector<int> stack;
  for (int root = 0; root < n_; ++root) {
    if (label[static_cast<std::size_t>(root)] >= 0) continue;
    label[static_cast<std::size_t>(root)] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : neighbors(u)) {
        if (label[static_cast<std::size_t>(nb.node)] < 0) {
          label[static_cast<std::size_t>(nb.node)] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return label;
}

int Graph::num_components() const {
  const auto labels = component_labels();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool Graph::is_connected() const { return num_components() <= 1; }

bool Graph::is_tree() const { return n_ >= 1 && num_edges() == n_ - 1 && is_connected(); }

bool Graph::is_path() const {
  if (num_edges() != std::max(n_ - 1, 0)) return false;
  for (int i = 0; i + 1 < n_; ++i) {
    if (edges_[static_cast<std::size_t>(i)] != Edge{i, i + 1}) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Config

Config::Config(std::vector<Spin> values) : values_(std::move(values)) {
  for (Spin v : values_) require_spin(v, "configuration entry");
}

Config Config::from_index(std::uint64_t index, int n) {
  std::vector<Spin> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = spin_at(index, i, n);
  return Config(std::move(v));
}

std::uint64_t Config::to_index() const {
  std::uint64_t index = 0;
  for (Spin v : values_) index = (index << 1U) | (v > 0 ? 1U : 0U);
  return index;
}

// ---------------------------------------------------------------- ExponentialModel

ExponentialModel::ExponentialModel(Graph graph, std::vector<double> node_params,
                                   std::vector<double> edge_params, double log_offset)
    : graph_(std::move(graph)),
      node_params_(std::move(node_params)),
      edge_params_(std::move(edge_params)),
      log_offset_(log_offset) {
  if (static_cast<int>(node_params_.size()) != graph_.num_nodes()) {
    throw InputError("node_params has length " + std::to_string(node_params_.size()) +
                     ", expected " + std::to_string(graph_.num_nodes()));
  }
  if (static_cast<int>(edge_params_.size()) != graph_.num_edges()) {
    throw InputError("edge_params has length " + std::to_string(edge_params_.size()) +
                     ", expected " + std::to_string(graph_.num_edges()));
  }
  for (double v : node_params_)
    if (!std::isfinite(v)) throw InputError("node_params contains a non-finite value");
  for (double v : edge_params_)
    if (!std::isfinite(v)) throw InputError("edge_params contains a non-finite value");
  if (!std::isfinite(log_offset_)) throw InputError("log_offset must be finite");
}

ExponentialModel ExponentialModel::from_edge_list(int n, const std::vector<Edge>& edges,
                                                  std::vector<double> node_params,
                                                  const std::vector<double>& edge_params,
                                                  double log_offset) {
  if (edges.size() != edge_params.size()) {
    throw InputError("edge_params has length " + std::to_string(edge_params.size()) +
                     ", expected " + std::to_string(edges.size()));
  }
  Graph graph(n, edges);
  std::vector<double> sorted(edge_params.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    sorted[static_cast<std::size_t>(*graph.edge_index(edges[i].s, edges[i].t))] = edge_params[i];
  }
  return ExponentialModel(std::move(graph), std::move(node_params), std::move(sorted), log_offset);
}

std::vector<double> ExponentialModel::params() const {
  std::vector<double> theta(node_params_);
  theta.insert(theta.end(), edge_params_.begin(), edge_params_.end());
  return theta;
}

ExponentialModel ExponentialModel::shifted(std::span<const double> lambda) const {
  if (static_cast<int>(lambda.size()) != dim()) {
    throw InputError("lambda has length " + std::to_string(lambda.size()) + ", expected " +
                     std::to_string(dim()));
  }
  std::vector<double> nodes(node_params_);
  std::vector<double> edges(edge_params_);
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) nodes[i] += lambda[i];
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e] += lambda[n + e];
  return ExponentialModel(graph_, std::move(nodes), std::move(edges), log_offset_);
}

ExponentialModel ExponentialModel::with_params(std::vector<double> node_params,
                                               std::vector<double> edge_params) const {
  return ExponentialModel(graph_, std::move(node_params), std::move(edge_params), log_offset_);
}

ExponentialModel ExponentialModel::with_offset(double log_offset) const {
  return ExponentialModel(graph_, node_params_, edge_params_, log_offset);
}

double ExponentialModel::log_unnorm_index(std::uint64_t index) const {
  const int n = num_nodes();
  double acc = log_offset_;
  for (int i = 0; i < n; ++i) acc += node_params_[static_cast<std::size_t>(i)] * spin_at(index, i, n);
  const auto edges = graph_.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    acc += edge_params_[e] * spin_at(index, edges[e].s, n) * spin_at(index, edges[e].t, n);
  }
  return acc;
}

std::vector<double> suff_stats(const ExponentialModel& model, const Config& x) {
  if (x.size() != model.num_nodes()) {
    throw InputError("configuration has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(model.num_nodes()));
  }
  std::vector<double> phi;
  phi.reserve(static_cast<std::size_t>(model.dim()));
  for (Spin v : x.values()) phi.push_back(v);
  for (const Edge& e : model.graph().edges()) phi.push_back(x[e.s] * x[e.t]);
  return phi;
}

double log_unnorm(const ExponentialModel& model, const Config& x) {
  const auto phi = suff_stats(model, x);
  const auto theta = model.params();
  return std::inner_product(theta.begin(), theta.end(), phi.begin(), 0.0) + model.log_offset();
}

// ---------------------------------------------------------------- Event

Event Event::full_space(int n) {
  return LinearThreshold{std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0};
}

Event Event::spin_sum_at_least(int n, double min_sum) {
  return LinearThreshold{std::vector<double>(static_cast<std::size_t>(n), 1.0), min_sum};
}

std::string Event::kind() const {
  struct Visitor {
    std::string operator()(const NodeMarginal&) const { return "node_marginal"; }
    std::string operator()(const PairMarginal&) const { return "pair_marginal"; }
    std::string operator()(const LinearThreshold&) const { return "linear_threshold"; }
    std::string operator()(const ExplicitEvent&) const { return "explicit"; }
  };
  return std::visit(Visitor{}, v_);
}

bool Event::is_count_threshold() const {
  const auto* lt = std::get_if<LinearThreshold>(&v_);
  if (lt == nullptr || lt->weights.empty()) return false;
  return std::all_of(lt->weights.begin(), lt->weights.end(), [](double w) { return w == 1.0; });
}

void Event::validate(int n) const {
  struct Visitor {
    int n;
    void operator()(const NodeMarginal& e) const {
      require_node(e.node, n, "node_marginal node");
      require_spin(e.value, "node_marginal value");
    }
    void operator()(const PairMarginal& e) const {
      require_node(e.s, n, "pair_marginal s");
      require_node(e.t, n, "pair_marginal t");
      if (e.s == e.t) throw InputError("pair_marginal needs two distinct nodes");
      require_spin(e.vs, "pair_marginal vs");
      require_spin(e.vt, "pair_marginal vt");
    }
    void operator()(const LinearThreshold& e) const {
      if (static_cast<int>(e.weights.size()) != n) {
        throw InputError("linear_threshold weights have length " + std::to_string(e.weights.size()) +
                         ", expected " + std::to_string(n));
      }
      for (double w : e.weights)
        if (!std::isfinite(w)) throw InputError("linear_threshold weights must be finite");
      if (!std::isfinite(e.threshold)) throw InputError("linear_threshold threshold must be finite");
    }
    void operator()(const ExplicitEvent& e) const {
      if (e.configs.empty()) throw InputError("explicit event has no configurations");
      std::set<Config> seen;
      for (const Config& c : e.configs) {
        if (c.size() != n) {
          throw InputError("explicit configuration has length " + std::to_string(c.size()) +
                           ", expected " + std::to_string(n));
        }
        if (!seen.insert(c).second) throw InputError("explicit event lists a configuration twice");
      }
    }
  };
  std::visit(Visitor{n}, v_);
}

bool event_contains(const Event& event, const Config& x) {
  struct Visitor {
    const Config& x;
    bool operator()(const NodeMarginal& e) const { return x[e.node] == e.value; }
    bool operator()(const PairMarginal& e) const { return x[e.s] == e.vs && x[e.t] == e.vt; }
    bool operator()(const LinearThreshold& e) const {
      double acc = 0.0;
      for (int i = 0; i < x.size(); ++i) acc += e.weights[static_cast<std::size_t>(i)] * x[i];
      return acc >= e.threshold;
    }
    bool operator()(const ExplicitEvent& e) const {
      return std::find(e.configs.begin(), e.configs.end(), x) != e.configs.end();
    }
  };
  return std::visit(Visitor{x}, event.variant());
}

std::vector<Config> materialize(const Event& event, int n) {
  event.validate(n);
  if (const auto* ex = std::get_if<ExplicitEvent>(&event.variant())) {
    std::vector<Config> sorted = ex->configs;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }
  require_enumerable(n);
  std::vector<Config> members;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Config x = Config::from_index(idx, n);
    if (event_contains(event, x)) members.push_back(std::move(x));
  }
  return members;
}

SupportPoint support_argmax(const ExponentialModel& model, const Event& event,
                            std::span<const double> y) {
  if (static_cast<int>(y.size()) != model.dim()) {
    throw InputError("support direction has length " + std::to_string(y.size()) + ", expected " +
                     std::to_string(model.dim()));
  }
  const auto members = materialize(event, model.num_nodes());
  if (members.empty()) throw InputError("support function of an empty event is undefined");
  // Members are in lexicographic order, so the strict comparison keeps the
  // smallest maximizer.
  SupportPoint best{kNegInf, {}};
  const int n = model.num_nodes();
  const auto edges = model.graph().edges();
  for (const Config& x : members) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += y[static_cast<std::size_t>(i)] * x[i];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      acc += y[static_cast<std::size_t>(n) + e] * x[edges[e].s] * x[edges[e].t];
    }
    if (acc > best.value) best = {acc, x};
  }
  return best;
}

double support_value(const ExponentialModel& model, const Event& event,
                     std::span<const double> y) {
  return support_argmax(model, event, y).value;
}

int reachable_spin_sum(int n, double threshold) {
  if (threshold > n) {
    throw InputError("count threshold " + std::to_string(threshold) + " exceeds n = " +
                     std::to_string(n) + "; the event is empty");
  }
  // Reachable sums are -n, -n+2, ..., n.
  int sum = -n;
  if (threshold > -n) {
    const int steps = static_cast<int>(std::ceil((threshold + n) / 2.0));
    sum = -n + 2 * steps;
  }
  return sum;
}

double count_support_closed_form(int n, double threshold, double lambda) {
  const int reach = reachable_spin_sum(n, threshold);
  return lambda >= 0.0 ? -lambda * reach : -lambda * n;
}

// ---------------------------------------------------------------- PseudoMarginals

bool PseudoMarginals::is_valid(const Graph& graph, double tol) const {
  if (static_cast<int>(node_means.size()) != graph.num_nodes() ||
      static_cast<int>(edge_means.size()) != graph.num_edges()) {
    return false;
  }
  for (double m : node_means)
    if (!(std::abs(m) <= 1.0 + tol)) return false;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const double mst = edge_means[static_cast<std::size_t>(e)];
    if (!(std::abs(mst) <= 1.0 + tol)) return false;
    for (Spin vs : {-1, 1})
      for (Spin vt : {-1, 1})
        if (pair_prob(graph, e, vs, vt) < -tol) return false;
  }
  return true;
}

double PseudoMarginals::node_prob(int s, Spin v) const {
  return 0.5 * (1.0 + v * node_means.at(static_cast<std::size_t>(s)));
}

double PseudoMarginals::pair_prob(const Graph& graph, int e, Spin vs, Spin vt) const {
  const Edge& ed = graph.edge(e);
  return 0.25 * (1.0 + vs * node_means.at(static_cast<std::size_t>(ed.s)) +
                 vt * node_means.at(static_cast<std::size_t>(ed.t)) +
                 vs * vt * edge_means.at(static_cast<std::size_t>(e)));
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::upper: return "upper";
    case Direction::lower: return "lower";
    case Direction::exact: return "exact";
    case Direction::heuristic: return "heuristic";
  }
  return "unknown";
}

}  // namespace vcb
