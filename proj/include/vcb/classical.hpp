#pragma once

// Classical Chernoff bounds for Binomial(n, p) tails and the generalized
// one-dimensional Chernoff bound for two-state Markov chains. All values are
// natural-log probabilities.

#include "vcb/exact.hpp"
#include "vcb/model.hpp"
#include "vcb/optimize.hpp"

namespace vcb {

// n iid Bernoulli(p) trials and relative deviation delta; the upper-tail
// event is { count >= n p (1 + delta) }.
class BernoulliSpec {
 public:
  BernoulliSpec(int n, double p, double delta);

  int n() const { return n_; }
  double p() const { return p_; }
  double delta() const { return delta_; }
  double mean() const { return n_ * p_; }
  double upper_threshold() const { return n_ * p_ * (1.0 + delta_); }
  // Smallest integer count inside the upper-tail event.
  int threshold_count() const;

 private:
  int n_;
  double p_;
  double delta_;
};

// -n p delta^2 / 4. Valid for delta < 2e - 1; throws InputError otherwise.
double chernoff_upper_simple(const BernoulliSpec& spec);
// n p (delta - (1 + delta) log(1 + delta)).
double chernoff_upper_tight(const BernoulliSpec& spec);
// -n p delta^2 / 2 bounds log p(count < n p (1 - delta)); needs 0 < delta < 1.
double chernoff_lower_tail(const BernoulliSpec& spec);

// Exact Chernoff objective -lambda n p (1 + delta) + n log(e^lambda p + 1 - p).
double iid_mgf_objective(const BernoulliSpec& spec, double lambda);
// The same objective after log(1 + u) <= u: -lambda n p (1 + delta) + n p (e^lambda - 1).
// Its minimizer is log(1 + delta) and its minimum is chernoff_upper_tight.
double iid_relaxed_objective(const BernoulliSpec& spec, double lambda);

ScalarMinimum minimize_iid_objective(const BernoulliSpec& spec, double tol = 1e-8);
ScalarMinimum minimize_iid_relaxed_objective(const BernoulliSpec& spec, double tol = 1e-8);

// Two-state Markov parameters over x in {0, 1}: node terms theta_{x_i} and
// transition terms theta_{x_i, x_{i+1}}.
struct BinaryMarkovParams {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta00 = 0.0;
  double theta01 = 0.0;
  double theta10 = 0.0;
  double theta11 = 0.0;
};

// Exact reparameterization into spin form (x = 2b - 1), constants absorbed
// into the log offset.
ChainModel spin_chain_from_binary(int n, const BinaryMarkovParams& params);

// -lambda * threshold + Phi(theta + lambda * count) - Phi(theta), where the
// count statistic is the number of +1 spins and Phi is evaluated by chain_phi.
double markov_objective(const ChainModel& chain, double threshold, double lambda);

// inf over lambda >= 0 of markov_objective at an integer count threshold.
BoundResult markov_chernoff(const ChainModel& chain, int threshold_count, double tol = 1e-8);

// Exact log p(Binomial(n, p) >= k) and log p(Binomial(n, p) < x).
double binomial_log_upper_tail(int n, double p, int k);
double binomial_log_strict_lower_tail(int n, double p, double x);

}  // namespace vcb
