#pragma once

// Bounds on the log partition function Phi(theta).
//
//   lower: naive mean field, exact top-M configurations
//   upper: tree-reweighted belief propagation, log-determinant relaxation
//
// Every solver returns its value including the model's log offset, so that
// Phi of a clamped model directly bounds the restricted partition function.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vcb/model.hpp"

namespace vcb {

struct ApproxConfig {
  int max_iterations = 2000;
  double tolerance = 1e-8;
  double damping = 0.5;
  int restarts = 10;
  std::uint64_t seed = 0;
  // Number of configurations kept by the top-M lower bound.
  std::uint64_t mbest = 16;

  // Throws InputError on out-of-range settings.
  void validate() const;
};

struct ApproxResult {
  BoundResult bound;
  PseudoMarginals marginals;
};

// Fully factorized mean field by coordinate ascent, best of the zero start
// and `restarts` random starts.
ApproxResult mean_field_lower(const ExponentialModel& model, const ApproxConfig& cfg);

// log-sum-exp over the M most probable configurations, by enumeration.
BoundResult m_best_lower(const ExponentialModel& model, std::uint64_t m);

struct EdgeAppearance {
  std::vector<double> rho;  // per edge, in edge order
};

// Edge appearance probabilities of the uniform spanning-tree distribution
// (effective resistances of the unit-weight graph). Throws InputError for
// disconnected graphs.
EdgeAppearance spanning_tree_rhos(const Graph& graph);

// Same, computed component by component; valid for any graph.
EdgeAppearance spanning_forest_rhos(const Graph& graph);

// Tree-reweighted upper bound via damped log-domain message passing.
ApproxResult trbp_upper(const ExponentialModel& model, const EdgeAppearance& rho,
                        const ApproxConfig& cfg);

// (n/2) log(pi e / 2).
double logdet_constant(int n);

// Moment matrix view of a point of the log-determinant relaxation.
struct SdpState {
  PseudoMarginals mu;     // node means and graph-edge second moments
  Eigen::MatrixXd moment; // M1[mu], (n+1) x (n+1)
  Eigen::MatrixXd a;      // M1[mu] + (1/3) diag(0, I_n)

  bool moment_psd(double tol = 1e-9) const;
};

// The log-determinant relaxation
//   max  <theta, mu> + 1/2 log det A(mu)   s.t.  M1[mu] >= 0
// over node means and all pairwise second moments (the complete graph),
// optionally with some nodes clamped to fixed spins. Clamping node k to v
// fixes mu_k = v and ties every second moment with k to v times the other
// node's mean.
class LogDetRelaxation {
 public:
  struct Clamp {
    int node = 0;
    Spin value = 1;
  };

  explicit LogDetRelaxation(const ExponentialModel& model, std::vector<Clamp> clamps = {});

  // Free coordinates: means of unclamped nodes, then their pairwise moments
  // in lexicographic pair order.
  int dim() const { return static_cast<int>(linear_.size()); }

  std::vector<double> initial_point() const;
  bool feasible(const std::vector<double>& v) const;
  // <theta, mu> + 1/2 log det A(mu) (no constant c_n, no offset). -inf outside
  // the domain of log det A.
  double objective(const std::vector<double>& v) const;
  SdpState state(const std::vector<double>& v) const;

  struct Solution {
    std::vector<double> point;
    double objective = 0.0;  // as objective()
    int iterations = 0;
    bool converged = false;
    double final_decrement = 0.0;
  };
  // Barrier path following with Newton steps. Feasibility of every accepted
  // iterate is enforced by Cholesky tests on M1 and A.
  Solution solve(const ApproxConfig& cfg) const;

  // Value returned as a bound: objective + c_n + log_offset.
  double bound_value(const Solution& s) const;

 private:
  struct Entry {
    int i;
    int j;
    double coef;
  };
  struct Affine {
    Eigen::MatrixXd base;
    std::vector<std::vector<Entry>> basis;  // per free coordinate
    Eigen::MatrixXd at(const std::vector<double>& v) const;
  };

  std::vector<double> full_means(const std::vector<double>& v) const;
  Eigen::MatrixXd full_moment(const std::vector<double>& v) const;

  ExponentialModel model_;
  std::vector<int> free_nodes_;
  std::vector<Spin> clamp_value_;  // 0 for free nodes
  std::vector<int> free_slot_;     // node -> free index, -1 if clamped
  std::vector<double> linear_;
  double constant_ = 0.0;
  Affine a_;
  Affine moment_;  // rows {0} and free nodes only
};

ApproxResult logdet_sdp_upper(const ExponentialModel& model, const ApproxConfig& cfg);

// Upper bound on Phi_C for marginal events by substituting the event's
// moments into the relaxation. Throws UnsupportedError for other events.
BoundResult logdet_event_upper(const ExponentialModel& model, const Event& event,
                               const ApproxConfig& cfg);

}  // namespace vcb
