#pragma once

// Binary pairwise exponential-family models on the spin domain {-1, +1}.
//
// The sufficient statistic of a model on graph G = (V, E) is
//   phi(x) = (x_0, ..., x_{n-1}, x_s x_t for (s, t) in E),
// with edges taken in their stored (sorted) order, so that vectors over the
// statistic (parameters, lambda directions, support-function arguments) are
// laid out as [node coordinates | edge coordinates].

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vcb {

using Spin = int;

// Largest node count for which exhaustive enumeration is attempted.
inline constexpr int kMaxEnumerationNodes = 20;

struct Edge {
  int s = 0;
  int t = 0;
  auto operator<=>(const Edge&) const = default;
};

struct Neighbor {
  int node = 0;
  int edge = 0;  // index into Graph::edges()
};

class Graph {
 public:
  Graph() = default;

  // Pairs may be given in either orientation; they are stored as s < t and
  // sorted. Throws InputError on self-loops, duplicates, or bad indices.
  Graph(int num_nodes, std::vector<Edge> edges);

  static Graph path(int n);
  static Graph cycle(int n);
  static Graph complete(int n);
  static Graph grid(int rows, int cols);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  std::span<const Neighbor> neighbors(int node) const;

  std::optional<int> edge_index(int s, int t) const;

  // Component label per node, labels numbered 0.. in order of first node.
  std::vector<int> component_labels() const;
  int num_components() const;
  bool is_connected() const;
  bool is_tree() const;
  bool is_path() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// A full spin assignment. Entries are restricted to {-1, +1}.
class Config {
 public:
  Config() = default;
  explicit Config(std::vector<Spin> values);

  // Enumeration order used throughout the library: index bit (n-1-i) set
  // means x_i = +1, so increasing index is lexicographic order with -1 < +1
  // and node 0 most significant.
  static Config from_index(std::uint64_t index, int n);
  std::uint64_t to_index() const;

  int size() const { return static_cast<int>(values_.size()); }
  Spin operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  std::span<const Spin> values() const { return values_; }

  bool operator==(const Config&) const = default;
  auto operator<=>(const Config&) const = default;

 private:
  std::vector<Spin> values_;
};

inline Spin spin_at(std::uint64_t index, int i, int n) {
  return ((index >> (n - 1 - i)) & 1U) ? 1 : -1;
}

class ExponentialModel {
 public:
  ExponentialModel() = default;
  ExponentialModel(Graph graph, std::vector<double> node_params,
                   std::vector<double> edge_params, double log_offset = 0.0);

  // Builds a model from an edge list in arbitrary order, permuting
  // edge_params to follow the sorted edge order.
  static ExponentialModel from_edge_list(int n, const std::vector<Edge>& edges,
                                         std::vector<double> node_params,
                                         const std::vector<double>& edge_params,
                                         double log_offset = 0.0);

  const Graph& graph() const { return graph_; }
  int num_nodes() const { return graph_.num_nodes(); }
  int num_edges() const { return graph_.num_edges(); }
  // Length of the sufficient statistic, n + |E|.
  int dim() const { return num_nodes() + num_edges(); }

  std::span<const double> node_params() const { return node_params_; }
  std::span<const double> edge_params() const { return edge_params_; }
  double node_param(int s) const { return node_params_[static_cast<std::size_t>(s)]; }
  double edge_param(int e) const { return edge_params_[static_cast<std::size_t>(e)]; }
  double log_offset() const { return log_offset_; }

  // theta laid out as [node params | edge params].
  std::vector<double> params() const;
  // Same graph and offset, parameters theta + lambda.
  ExponentialModel shifted(std::span<const double> lambda) const;
  ExponentialModel with_params(std::vector<double> node_params,
                               std::vector<double> edge_params) const;
  ExponentialModel with_offset(double log_offset) const;

  // <theta, phi(x)> + log_offset for the configuration with the given
  // enumeration index.
  double log_unnorm_index(std::uint64_t index) const;

 private:
  Graph graph_;
  std::vector<double> node_params_;
  std::vector<double> edge_params_;
  double log_offset_ = 0.0;
};

std::vector<double> suff_stats(const ExponentialModel& model, const Config& x);
double log_unnorm(const ExponentialModel& model, const Config& x);

// Event variants. Spins are +1 / -1.
struct NodeMarginal {
  int node = 0;
  Spin value = 1;
};

struct PairMarginal {
  int s = 0;
  int t = 1;
  Spin vs = 1;
  Spin vt = 1;
};

// C = { x : <weights, x> >= threshold }, closed halfspace.
struct LinearThreshold {
  std::vector<double> weights;
  double threshold = 0.0;
};

struct ExplicitEvent {
  std::vector<Config> configs;
};

class Event {
 public:
  using Variant = std::variant<NodeMarginal, PairMarginal, LinearThreshold, ExplicitEvent>;

  Event(NodeMarginal e) : v_(e) {}
  Event(PairMarginal e) : v_(e) {}
  Event(LinearThreshold e) : v_(std::move(e)) {}
  Event(ExplicitEvent e) : v_(std::move(e)) {}

  // Whole space, as a threshold that every configuration meets.
  static Event full_space(int n);
  // Count events: at least `min_sum` for sum of spins.
  static Event spin_sum_at_least(int n, double min_sum);

  const Variant& variant() const { return v_; }
  std::string kind() const;
  bool is_marginal() const {
    return std::holds_alternative<NodeMarginal>(v_) || std::holds_alternative<PairMarginal>(v_);
  }
  // LinearThreshold with every weight equal to one.
  bool is_count_threshold() const;

  // Throws InputError when indices or lengths do not fit an n-node graph,
  // or when an explicit event is empty or has duplicates.
  void validate(int n) const;

 private:
  Variant v_;
};

bool event_contains(const Event& event, const Config& x);

// Every member of C, in enumeration order. Requires n <= kMaxEnumerationNodes.
std::vector<Config> materialize(const Event& event, int n);

// Supremum of <y, phi(x)> over x in C together with an attaining
// configuration (the lexicographically smallest one on ties).
struct SupportPoint {
  double value = 0.0;
  Config argmax;
};

SupportPoint support_argmax(const ExponentialModel& model, const Event& event,
                            std::span<const double> y);
double support_value(const ExponentialModel& model, const Event& event,
                     std::span<const double> y);

// Smallest value of sum(x) that is >= threshold over spin vectors of length n.
// Throws InputError if threshold > n (empty event).
int reachable_spin_sum(int n, double threshold);

// Support of the count event { sum(x) >= threshold } in the direction whose
// node entries all equal -lambda and whose edge entries are zero.
double count_support_closed_form(int n, double threshold, double lambda);

// Mean parameters: mu_s = E[x_s], mu_st = E[x_s x_t] in edge order.
struct PseudoMarginals {
  std::vector<double> node_means;
  std::vector<double> edge_means;

  // |mu| <= 1 and the four implied pairwise probabilities are >= -tol.
  bool is_valid(const Graph& graph, double tol = 1e-9) const;
  double node_prob(int s, Spin v) const;
  // P(x_s = vs, x_t = vt) implied by the edge moment of edge e = (s, t).
  double pair_prob(const Graph& graph, int e, Spin vs, Spin vt) const;
};

enum class Direction { upper, lower, exact, heuristic };
std::string to_string(Direction d);

struct Diagnostics {
  int iterations = 0;
  bool converged = true;
  double final_step = 0.0;
  bool clipped = false;
  double raw_value = 0.0;
  std::string note;
};

struct BoundResult {
  double value = 0.0;
  Direction direction = Direction::exact;
  std::string method;
  Diagnostics diagnostics;
};

}  // namespace vcb
