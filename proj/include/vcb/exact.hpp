#pragma once

// Exact log partition functions, event log-probabilities and marginals.
// Brute force covers any graph up to kMaxEnumerationNodes nodes; the chain
// and tree routines are linear-time dynamic programs.

#include "vcb/model.hpp"

namespace vcb {

// log sum_x exp(<theta, phi(x)> + offset) over all 2^n configurations.
double brute_phi(const ExponentialModel& model);

// Phi_C(theta): the same sum restricted to x in C. Returns -inf when C has no
// members.
double brute_phi_event(const ExponentialModel& model, const Event& event);

// log p(X in C) = Phi_C(theta) - Phi(theta).
double event_log_prob(const ExponentialModel& model, const Event& event);

PseudoMarginals brute_marginals(const ExponentialModel& model);

// A model on the path 0 - 1 - ... - (n-1). Validated on construction.
class ChainModel {
 public:
  explicit ChainModel(ExponentialModel model);
  const ExponentialModel& model() const { return model_; }
  int length() const { return model_.num_nodes(); }

 private:
  ExponentialModel model_;
};

double chain_phi(const ChainModel& chain);

// Leaf-to-root elimination. Throws InputError unless the graph is a tree.
double tree_phi(const ExponentialModel& model);

// log p(#{i : x_i = +1} >= k_min) by dynamic programming over
// (position, spin, running count).
double chain_count_log_prob(const ChainModel& chain, int k_min);

}  // namespace vcb
