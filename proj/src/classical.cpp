#include "vcb/classical.hpp"

#include <cmath>
#include <vector>

#include "vcb/error.hpp"
#include "vcb/numeric.hpp"

namespace vcb {

namespace {

// Bracket for lambda searches; minimize_golden expands it when needed.
constexpr double kLambdaBracket = 8.0;

double log_binomial_pmf(int n, double p, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

}  // namespace

BernoulliSpec::BernoulliSpec(int n, double p, double delta) : n_(n), p_(p), delta_(delta) {
  if (n < 1) throw InputError("Bernoulli trial count must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw InputError("Bernoulli probability must lie in (0, 1)");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("delta must be positive");
}

int BernoulliSpec::threshold_count() const {
  // Guard against n p (1 + delta) landing a hair above an integer.
  return static_cast<int>(std::ceil(upper_threshold() - 1e-9));
}

double chernoff_upper_simple(const BernoulliSpec& spec) {
  const double limit = 2.0 * std::exp(1.0) - 1.0;
  if (spec.delta() >= limit) {
    throw InputError("validity range exceeded: the simple Chernoff bound needs delta < 2e - 1");
  }
  return -spec.mean() * spec.delta() * spec.delta() / 4.0;
}

double chernoff_upper_tight(const BernoulliSpec& spec) {
  const double d = spec.delta();
  return spec.mean() * (d - (1.0 + d) * std::log1p(d));
}

double chernoff_lower_tail(const BernoulliSpec& spec) {
  if (!(spec.delta() < 1.0)) throw InputError("the lower-tail bound needs 0 < delta < 1");
  return -spec.mean() * spec.delta() * spec.delta() / 2.0;
}

double iid_mgf_objective(const BernoulliSpec& spec, double lambda) {
  const double p = spec.p();
  // log(e^lambda p + 1 - p) = lambda + log(p + (1 - p) e^-lambda) for large lambda.
  const double log_mgf = lambda > 0.0 ? lambda + std::log(p + (1.0 - p) * std::exp(-lambda))
                                      : std::log1p(p * std::expm1(lambda));
  return -lambda * spec.upper_threshold() + spec.n() * log_mgf;
}

double iid_relaxed_objective(const BernoulliSpec& spec, double lambda) {
  return -lambda * spec.upper_threshold() + spec.mean() * std::expm1(lambda);
}

ScalarMinimum minimize_iid_objective(const BernoulliSpec& spec, double tol) {
  return minimize_golden([&](double l) { return iid_mgf_objective(spec, l); }, 0.0, kLambdaBracket,
                         tol);
}

ScalarMinimum minimize_iid_relaxed_objective(const BernoulliSpec& spec, double tol) {
  return minimize_golden([&](double l) { return iid_relaxed_objective(spec, l); }, 0.0,
                         kLambdaBracket, tol);
}

ChainModel spin_chain_from_binary(int n, const BinaryMarkovParams& q) {
  if (n < 1) throw InputError("chain length must be at least 1");
  // b = (1 + x) / 2.
  const double node_const = 0.5 * (q.theta0 + q.theta1);
  const double node_lin = 0.5 * (q.theta1 - q.theta0);
  const double edge_const = 0.25 * (q.theta00 + q.theta01 + q.theta10 + q.theta11);
  const double edge_left = 0.25 * (-q.theta00 - q.theta01 + q.theta10 + q.theta11);
  const double edge_right = 0.25 * (-q.theta00 + q.theta01 - q.theta10 + q.theta11);
  const double edge_prod = 0.25 * (q.theta00 - q.theta01 - q.theta10 + q.theta11);

  std::vector<double> nodes(static_cast<std::size_t>(n), node_lin);
  std::vector<double> edges(static_cast<std::size_t>(n - 1), edge_prod);
  for (int i = 0; i + 1 < n; ++i) {
    nodes[static_cast<std::size_t>(i)] += edge_left;
    nodes[static_cast<std::size_t>(i + 1)] += edge_right;
  }
  const double offset = n * node_const + (n - 1) * edge_const;
  return ChainModel(ExponentialModel(Graph::path(n), std::move(nodes), std::move(edges), offset));
}

double markov_objective(const ChainModel& chain, double threshold, double lambda) {
  const ExponentialModel& m = chain.model();
  const int n = m.num_nodes();
  // lambda * #plus = lambda n / 2 + sum_i (lambda / 2) x_i.
  std::vector<double> shift(static_cast<std::size_t>(m.dim()), 0.0);
  for (int i = 0; i < n; ++i) shift[static_cast<std::size_t>(i)] = 0.5 * lambda;
  const ExponentialModel tilted = m.shifted(shift).with_offset(m.log_offset() + 0.5 * lambda * n);
  return -lambda * threshold + chain_phi(ChainModel(tilted)) - chain_phi(chain);
}

BoundResult markov_chernoff(const ChainModel& chain, int threshold_count, double tol) {
  const int n = chain.length();
  if (threshold_count < 0 || threshold_count > n) {
    throw InputError("threshold_count must lie in [0, " + std::to_string(n) + "]");
  }
  BoundResult r;
  r.direction = Direction::upper;
  r.method = "markov_chernoff";
  if (threshold_count == 0) {
    r.value = 0.0;
    r.diagnostics.note = "certain event; lambda* = 0";
    r.diagnostics.raw_value = 0.0;
    return r;
  }
  const auto best = minimize_golden(
      [&](double l) { return markov_objective(chain, threshold_count, l); }, 0.0, kLambdaBracket,
      tol);
  r.value = best.value;
  r.diagnostics.raw_value = best.value;
  r.diagnostics.iterations = best.iterations;
  r.diagnostics.final_step = best.argmin;
  r.diagnostics.note = "lambda* = " + std::to_string(best.argmin) +
                       "; realized threshold count = " + std::to_string(threshold_count) +
                       (best.at_boundary ? "; minimizer on bracket boundary" : "");
  return r;
}

double binomial_log_upper_tail(int n, double p, int k) {
  if (k <= 0) return 0.0;
  if (k > n) return kNegInf;
  std::vector<double> terms;
  for (int j = k; j <= n; ++j) terms.push_back(log_binomial_pmf(n, p, j));
  return std::min(log_sum_exp(terms), 0.0);
}

double binomial_log_strict_lower_tail(int n, double p, double x) {
  std::vector<double> terms;
  for (int j = 0; j <= n && j < x; ++j) terms.push_back(log_binomial_pmf(n, p, j));
  return std::min(log_sum_exp(terms), 0.0);
}

}  // namespace vcb
