#pragma once

// Event-probability bounds assembled from log partition function bounds:
//
//   log p(C) = Phi_C - Phi                       (exact)
//   log p(C) <= Phi_C^U - Phi^L                  (bound_event_upper)
//   log p(C) >= Phi_C^L - Phi^U                  (bound_event_lower)
//   log p(C) <= inf_lambda S_C(-lambda) + Phi^U(theta + lambda) - Phi^L(theta)
//                                                (chernoff_lambda_bound)
//
// Marginal events realize Phi_C as the log partition function of a clamped
// model, so every approximator applies to both terms unchanged.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcb/approx.hpp"
#include "vcb/model.hpp"

namespace vcb {

enum class UpperMethod { trbp, logdet, exact };
enum class LowerMethod { mean_field, m_best, exact };

std::string to_string(UpperMethod m);
std::string to_string(LowerMethod m);
UpperMethod parse_upper_method(const std::string& name);
LowerMethod parse_lower_method(const std::string& name);

struct MethodSelector {
  UpperMethod phi_upper = UpperMethod::trbp;
  LowerMethod phi_lower = LowerMethod::mean_field;
};

struct Assignment {
  int node = 0;
  Spin value = 1;
};

// Model on the unassigned nodes (renumbered in increasing order) whose
// partition function equals Phi_C for C = { x : x_node = value for all
// assignments }. Clamped node and clamped-clamped edge terms move into the
// log offset; edges to free nodes become node parameters.
ExponentialModel clamp(const ExponentialModel& model, const std::vector<Assignment>& assignments);

// Assignments realizing a marginal event; empty optional for other events.
std::optional<std::vector<Assignment>> clamp_assignments(const Event& event);

// A log partition function estimate together with the mean parameters the
// method associates with it (its gradient in theta), laid out like phi.
struct PhiEstimate {
  double value = 0.0;
  std::vector<double> means;
  bool converged = true;
  int iterations = 0;
};

PhiEstimate estimate_phi_upper(const ExponentialModel& model, UpperMethod method,
                               const ApproxConfig& cfg);
PhiEstimate estimate_phi_lower(const ExponentialModel& model, LowerMethod method,
                               const ApproxConfig& cfg);

BoundResult bound_event_upper(const ExponentialModel& model, const Event& event,
                              const MethodSelector& sel, const ApproxConfig& cfg);
BoundResult bound_event_lower(const ExponentialModel& model, const Event& event,
                              const MethodSelector& sel, const ApproxConfig& cfg);

// Batched forms: the full-model estimate is computed once and shared.
std::vector<BoundResult> bound_events_upper(const ExponentialModel& model, std::span<const Event> events,
                                            const MethodSelector& sel, const ApproxConfig& cfg);
std::vector<BoundResult> bound_events_lower(const ExponentialModel& model, std::span<const Event> events,
                                            const MethodSelector& sel, const ApproxConfig& cfg);

struct LambdaOptions {
  enum class Path {
    automatic,        // count direction for all-ones thresholds, else full
    count_direction,  // lambda = alpha * (1, ..., 1 | 0, ..., 0), alpha >= 0
    full,             // every sufficient-statistic coordinate
    node_only,        // node coordinates only (affine bounds in x)
  };
  Path path = Path::automatic;
  // Iteration cap for the subgradient phase; cfg.max_iterations when unset.
  std::optional<int> max_iterations;
  std::optional<std::vector<double>> initial_lambda;
  // Smoothed quasi-Newton refinement after the subgradient phase.
  bool polish = true;
  double tol = 1e-8;
};

struct LambdaBound {
  BoundResult bound;
  std::vector<double> lambda;
  // J decreased along a nearly fixed direction at a nearly constant rate for
  // a long run of accepted steps: the infimum is approached at infinity.
  bool ray_flagged = false;
};

// J(lambda) = S_C(-lambda) + Phi^U(theta + lambda) - Phi^L(theta).
double chernoff_objective(const ExponentialModel& model, const Event& event,
                          std::span<const double> lambda, const MethodSelector& sel,
                          const ApproxConfig& cfg, double phi_lower);

LambdaBound chernoff_lambda_bound(const ExponentialModel& model, const Event& event,
                                  const MethodSelector& sel, const ApproxConfig& cfg,
                                  const LambdaOptions& opts = {});

struct TightnessResult {
  double gap = 0.0;  // bound - log p(C)
  std::vector<double> lambda;
  double bound = 0.0;
  double log_prob = 0.0;
  bool passed = false;
};

// Exact-Phi Chernoff bound over the full sufficient-statistic dimension,
// compared with the exact log-probability.
TightnessResult tightness_check(const ExponentialModel& model, const Event& event, double tol = 1e-3);

}  // namespace vcb
