#include "vcb/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "vcb/error.hpp"
#include "vcb/exact.hpp"
#include "vcb/numeric.hpp"
#include "vcb/optimize.hpp"

namespace vcb {

std::string to_string(UpperMethod m) {
  switch (m) {
    case UpperMethod::trbp: return "trbp";
    case UpperMethod::logdet: return "logdet";
    case UpperMethod::exact: return "exact";
  }
  return "unknown";
}

std::string to_string(LowerMethod m) {
  switch (m) {
    case LowerMethod::mean_field: return "mf";
    case LowerMethod::m_best: return "mbest";
    case LowerMethod::exact: return "exact";
  }
  return "unknown";
}

UpperMethod parse_upper_method(const std::string& name) {
  if (name == "trbp") return UpperMethod::trbp;
  if (name == "logdet") return UpperMethod::logdet;
  if (name == "exact") return UpperMethod::exact;
  throw InputError("unknown upper method \"" + name + "\" (expected trbp, logdet or exact)");
}

LowerMethod parse_lower_method(const std::string& name) {
  if (name == "mf" || name == "mean_field") return LowerMethod::mean_field;
  if (name == "mbest" || name == "m_best") return LowerMethod::m_best;
  if (name == "exact") return LowerMethod::exact;
  throw InputError("unknown lower method \"" + name + "\" (expected mf, mbest or exact)");
}

ExponentialModel clamp(const ExponentialModel& model, const std::vector<Assignment>& assignments) {
  const Graph& g = model.graph();
  const int n = g.num_nodes();
  std::vector<Spin> fixed(static_cast<std::size_t>(n), 0);
  for (const Assignment& a : assignments) {
    if (a.node < 0 || a.node >= n) throw InputError("clamped node " + std::to_string(a.node) + " out of range");
    if (a.value != 1 && a.value != -1) throw InputError("clamped value must be +1 or -1");
    if (fixed[static_cast<std::size_t>(a.node)] != 0) {
      throw InputError("node " + std::to_string(a.node) + " assigned twice");
    }
    fixed[static_cast<std::size_t>(a.node)] = a.value;
  }

  std::vector<int> index(static_cast<std::size_t>(n), -1);
  int kept = 0;
  for (int v = 0; v < n; ++v)
    if (fixed[static_cast<std::size_t>(v)] == 0) index[static_cast<std::size_t>(v)] = kept++;

  double offset = model.log_offset();
  std::vector<double> nodes(static_cast<std::size_t>(kept), 0.0);
  for (int v = 0; v < n; ++v) {
    const Spin f = fixed[static_cast<std::size_t>(v)];
    if (f != 0) {
      offset += model.node_param(v) * f;
    } else {
      nodes[static_cast<std::size_t>(index[static_cast<std::size_t>(v)])] += model.node_param(v);
    }
  }
  std::vector<Edge> edges;
  std::vector<double> edge_params;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const Spin fs = fixed[static_cast<std::size_t>(ed.s)];
    const Spin ft = fixed[static_cast<std::size_t>(ed.t)];
    const double th = model.edge_param(e);
    if (fs != 0 && ft != 0) {
      offset += th * fs * ft;
    } else if (fs != 0) {
      nodes[static_cast<std::size_t>(index[static_cast<std::size_t>(ed.t)])] += th * fs;
    } else if (ft != 0) {
      nodes[static_cast<std::size_t>(index[static_cast<std::size_t>(ed.s)])] += th * ft;
    } else {
      edges.push_back({index[static_cast<std::size_t>(ed.s)], index[static_cast<std::size_t>(ed.t)]});
      edge_params.push_back(th);
    }
  }
  // Renumbering is monotone, so the surviving edges stay sorted.
  return ExponentialModel(Graph(kept, std::move(edges)), std::move(nodes), std::move(edge_params), offset);
}

std::optional<std::vector<Assignment>> clamp_assignments(const Event& event) {
  if (const auto* nm = std::get_if<NodeMarginal>(&event.variant())) {
    return std::vector<Assignment>{{nm->node, nm->value}};
  }
  if (const auto* pm = std::get_if<PairMarginal>(&event.variant())) {
    return std::vector<Assignment>{{pm->s, pm->vs}, {pm->t, pm->vt}};
  }
  return std::nullopt;
}

namespace {

std::vector<double> flatten(const PseudoMarginals& mu) {
  std::vector<double> out(mu.node_means);
  out.insert(out.end(), mu.edge_means.begin(), mu.edge_means.end());
  return out;
}

PhiEstimate exact_estimate(const ExponentialModel& model) {
  return {brute_phi(model), flatten(brute_marginals(model)), true, 0};
}

PhiEstimate from_approx(const ApproxResult& r) {
  return {r.bound.value, flatten(r.marginals), r.bound.diagnostics.converged, r.bound.diagnostics.iterations};
}

// Mean statistics of the configurations kept by the top-M bound.
PhiEstimate m_best_estimate(const ExponentialModel& model, std::uint64_t m) {
  const int n = model.num_nodes();
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t keep = std::min<std::uint64_t>(m, total);
  const BoundResult r = m_best_lower(model, keep);
  std::vector<std::pair<double, std::uint64_t>> scored(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) scored[idx] = {model.log_unnorm_index(idx), idx};
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  std::vector<double> means(static_cast<std::size_t>(model.dim()), 0.0);
  const auto edges = model.graph().edges();
  for (std::uint64_t i = 0; i < keep; ++i) {
    const double w = std::exp(scored[i].first - r.value);
    const std::uint64_t idx = scored[i].second;
    for (int s = 0; s < n; ++s) means[static_cast<std::size_t>(s)] += w * spin_at(idx, s, n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      means[static_cast<std::size_t>(n) + e] += w * spin_at(idx, edges[e].s, n) * spin_at(idx, edges[e].t, n);
    }
  }
  return {r.value, std::move(means), true, 0};
}

std::string selector_tag(const char* kind, const MethodSelector& sel) {
  return std::string(kind) + ":" + to_string(sel.phi_upper) + "/" + to_string(sel.phi_lower);
}

}  // namespace

PhiEstimate estimate_phi_upper(const ExponentialModel& model, UpperMethod method,
                               const ApproxConfig& cfg) {
  switch (method) {
    case UpperMethod::exact: return exact_estimate(model);
    case UpperMethod::trbp:
      return from_approx(trbp_upper(model, spanning_forest_rhos(model.graph()), cfg));
    case UpperMethod::logdet: return from_approx(logdet_sdp_upper(model, cfg));
  }
  throw UnsupportedError("unknown upper method");
}

PhiEstimate estimate_phi_lower(const ExponentialModel& model, LowerMethod method,
                               const ApproxConfig& cfg) {
  switch (method) {
    case LowerMethod::exact: return exact_estimate(model);
    case LowerMethod::mean_field: return from_approx(mean_field_lower(model, cfg));
    case LowerMethod::m_best: return m_best_estimate(model, cfg.mbest);
  }
  throw UnsupportedError("unknown lower method");
}

namespace {

struct Restricted {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

Restricted restricted_upper(const ExponentialModel& model, const Event& event,
                            const MethodSelector& sel, const ApproxConfig& cfg) {
  event.validate(model.num_nodes());
  if (sel.phi_upper == UpperMethod::exact) return {brute_phi_event(model, event), true, 0};
  const auto assignments = clamp_assignments(event);
  if (!assignments) {
    throw UnsupportedError(event.kind() + " events need phi_upper = exact on the restricted "
                           "partition function; use chernoff_lambda_bound instead");
  }
  if (sel.phi_upper == UpperMethod::logdet) {
    const BoundResult r = logdet_event_upper(model, event, cfg);
    return {r.value, r.diagnostics.converged, r.diagnostics.iterations};
  }
  const PhiEstimate e = estimate_phi_upper(clamp(model, *assignments), sel.phi_upper, cfg);
  return {e.value, e.converged, e.iterations};
}

Restricted restricted_lower(const ExponentialModel& model, const Event& event,
                            const MethodSelector& sel, const ApproxConfig& cfg) {
  event.validate(model.num_nodes());
  if (sel.phi_lower == LowerMethod::exact) return {brute_phi_event(model, event), true, 0};
  const auto assignments = clamp_assignments(event);
  if (!assignments) {
    throw UnsupportedError(event.kind() + " events need phi_lower = exact on the restricted "
                           "partition function");
  }
  const PhiEstimate e = estimate_phi_lower(clamp(model, *assignments), sel.phi_lower, cfg);
  return {e.value, e.converged, e.iterations};
}

BoundResult combine(Direction dir, const Restricted& restricted, const PhiEstimate& full,
                    const MethodSelector& sel) {
  BoundResult r;
  r.direction = dir;
  r.method = selector_tag(dir == Direction::upper ? "upper" : "lower", sel);
  r.diagnostics.converged = restricted.converged && full.converged;
  r.diagnostics.iterations = restricted.iterations + full.iterations;
  if (restricted.value == kNegInf) {
    r.value = r.diagnostics.raw_value = kNegInf;
    r.diagnostics.note = "empty event";
    return r;
  }
  r.diagnostics.raw_value = restricted.value - full.value;
  r.value = r.diagnostics.raw_value;
  if (dir == Direction::upper && r.value > 0.0) {
    r.value = 0.0;
    r.diagnostics.clipped = true;
  }
  return r;
}

}  // namespace

std::vector<BoundResult> bound_events_upper(const ExponentialModel& model, std::span<const Event> events,
                                            const MethodSelector& sel, const ApproxConfig& cfg) {
  cfg.validate();
  for (const Event& e : events) e.validate(model.num_nodes());
  const PhiEstimate full = estimate_phi_lower(model, sel.phi_lower, cfg);
  std::vector<BoundResult> out;
  out.reserve(events.size());
  for (const Event& e : events) out.push_back(combine(Direction::upper, restricted_upper(model, e, sel, cfg), full, sel));
  return out;
}

std::vector<BoundResult> bound_events_lower(const ExponentialModel& model, std::span<const Event> events,
                                            const MethodSelector& sel, const ApproxConfig& cfg) {
  cfg.validate();
  for (const Event& e : events) e.validate(model.num_nodes());
  const PhiEstimate full = estimate_phi_upper(model, sel.phi_upper, cfg);
  std::vector<BoundResult> out;
  out.reserve(events.size());
  for (const Event& e : events) out.push_back(combine(Direction::lower, restricted_lower(model, e, sel, cfg), full, sel));
  return out;
}

BoundResult bound_event_upper(const ExponentialModel& model, const Event& event,
                              const MethodSelector& sel, const ApproxConfig& cfg) {
  return bound_events_upper(model, std::span<const Event>(&event, 1), sel, cfg).front();
}

BoundResult bound_event_lower(const ExponentialModel& model, const Event& event,
                              const MethodSelector& sel, const ApproxConfig& cfg) {
  return bound_events_lower(model, std::span<const Event>(&event, 1), sel, cfg).front();
}

namespace {

// Upper-bound oracle with the edge appearance probabilities computed once.
class UpperOracle {
 public:
  UpperOracle(const ExponentialModel& model, UpperMethod method, const ApproxConfig& cfg)
      : model_(model), method_(method), cfg_(cfg) {
    if (method == UpperMethod::trbp) rho_ = spanning_forest_rhos(model.graph());
  }

  PhiEstimate at(std::span<const double> lambda) {
    const ExponentialModel shifted = model_.shifted(lambda);
    PhiEstimate e = method_ == UpperMethod::trbp ? from_approx(trbp_upper(shifted, rho_, cfg_))
                                                 : estimate_phi_upper(shifted, method_, cfg_);
    all_converged_ = all_converged_ && e.converged;
    ++calls_;
    return e;
  }

  bool all_converged() const { return all_converged_; }
  int calls() const { return calls_; }

 private:
  const ExponentialModel& model_;
  UpperMethod method_;
  ApproxConfig cfg_;
  EdgeAppearance rho_;
  bool all_converged_ = true;
  int calls_ = 0;
};

// Sufficient statistics of every member of C, row-major.
struct MemberStats {
  int dim = 0;
  std::vector<double> phi;
  std::size_t size() const { return dim == 0 ? 0 : phi.size() / static_cast<std::size_t>(dim); }
  const double* row(std::size_t k) const { return phi.data() + k * static_cast<std::size_t>(dim); }
};

MemberStats member_stats(const ExponentialModel& model, const Event& event) {
  MemberStats out;
  out.dim = model.dim();
  for (const Config& x : materialize(event, model.num_nodes())) {
    const auto f = suff_stats(model, x);
    out.phi.insert(out.phi.end(), f.begin(), f.end());
  }
  if (out.size() == 0) throw InputError("event is empty; its probability is zero");
  return out;
}

double dot(const double* a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

// max over members of <-lambda, phi(x)>; members are in enumeration order,
// so the strict comparison keeps the lexicographically smallest maximizer.
std::pair<double, std::size_t> member_support(const MemberStats& c, std::span<const double> lambda) {
  double best = kNegInf;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double v = -dot(c.row(k), lambda);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  return {best, arg};
}

// tau * log sum exp(-<lambda, phi(x)> / tau) and its gradient in lambda.
double smoothed_support(const MemberStats& c, std::span<const double> lambda, double tau,
                        std::vector<double>* grad) {
  std::vector<double> z(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) z[k] = -dot(c.row(k), lambda) / tau;
  const double lse = log_sum_exp(z);
  if (grad) {
    grad->assign(static_cast<std::size_t>(c.dim), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double w = std::exp(z[k] - lse);
      const double* r = c.row(k);
      for (int i = 0; i < c.dim; ++i) (*grad)[static_cast<std::size_t>(i)] -= w * r[i];
    }
  }
  return tau * lse;
}

struct GslVector {
  gsl_vector* v;
  explicit GslVector(std::size_t n) : v(gsl_vector_alloc(n)) {}
  ~GslVector() { gsl_vector_free(v); }
  GslVector(const GslVector&) = delete;
  GslVector& operator=(const GslVector&) = delete;
};

struct Smooth {
  // Value and gradient over the active coordinates.
  std::function<double(const std::vector<double>&, std::vector<double>*)> fdf;
  std::size_t n;
};

std::vector<double> to_std(const gsl_vector* x) {
  std::vector<double> out(x->size);
  for (std::size_t i = 0; i < x->size; ++i) out[i] = gsl_vector_get(x, i);
  return out;
}

double gsl_f(const gsl_vector* x, void* p) {
  const double v = static_cast<Smooth*>(p)->fdf(to_std(x), nullptr);
  return std::isfinite(v) ? v : GSL_POSINF;
}

void gsl_fdf(const gsl_vector* x, void* p, double* f, gsl_vector* g) {
  std::vector<double> grad;
  const double v = static_cast<Smooth*>(p)->fdf(to_std(x), &grad);
  if (f) *f = std::isfinite(v) ? v : GSL_POSINF;
  for (std::size_t i = 0; i < grad.size(); ++i) gsl_vector_set(g, i, grad[i]);
}

void gsl_df(const gsl_vector* x, void* p, gsl_vector* g) { gsl_fdf(x, p, nullptr, g); }

// BFGS from x0; every evaluated point is reported through `visit`.
int bfgs(Smooth& problem, std::vector<double>& x, int max_iter) {
  gsl_set_error_handler_off();
  gsl_multimin_function_fdf fn;
  fn.n = problem.n;
  fn.f = gsl_f;
  fn.df = gsl_df;
  fn.fdf = gsl_fdf;
  fn.params = &problem;
  GslVector start(problem.n);
  for (std::size_t i = 0; i < problem.n; ++i) gsl_vector_set(start.v, i, x[i]);
  std::unique_ptr<gsl_multimin_fdfminimizer, decltype(&gsl_multimin_fdfminimizer_free)> s(
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, problem.n),
      gsl_multimin_fdfminimizer_free);
  gsl_multimin_fdfminimizer_set(s.get(), &fn, start.v, 0.1, 0.1);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(s->gradient, 1e-10) == GSL_SUCCESS) break;
  }
  x = to_std(s->x);
  return it;
}

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

LambdaOptions::Path resolve_path(const Event& event, LambdaOptions::Path p) {
  if (p != LambdaOptions::Path::automatic) return p;
  return event.is_count_threshold() ? LambdaOptions::Path::count_direction : LambdaOptions::Path::full;
}

std::string path_name(LambdaOptions::Path p) {
  switch (p) {
    case LambdaOptions::Path::count_direction: return "count";
    case LambdaOptions::Path::node_only: return "node";
    default: return "full";
  }
}

}  // namespace

double chernoff_objective(const ExponentialModel& model, const Event& event,
                          std::span<const double> lambda, const MethodSelector& sel,
                          const ApproxConfig& cfg, double phi_lower) {
  if (static_cast<int>(lambda.size()) != model.dim()) {
    throw InputError("lambda has length " + std::to_string(lambda.size()) + ", expected " +
                     std::to_string(model.dim()));
  }
  std::vector<double> neg(lambda.begin(), lambda.end());
  for (double& v : neg) v = -v;
  const double support = support_value(model, event, neg);
  return support + estimate_phi_upper(model.shifted(lambda), sel.phi_upper, cfg).value - phi_lower;
}

LambdaBound chernoff_lambda_bound(const ExponentialModel& model, const Event& event,
                                  const MethodSelector& sel, const ApproxConfig& cfg,
                                  const LambdaOptions& opts) {
  cfg.validate();
  event.validate(model.num_nodes());
  if (!(opts.tol > 0.0)) throw InputError("lambda tolerance must be positive");
  const int n = model.num_nodes();
  const int dim = model.dim();
  const auto path = resolve_path(event, opts.path);
  const int max_iter = opts.max_iterations.value_or(cfg.max_iterations);
  if (max_iter < 0) throw InputError("max_iterations must be non-negative");

  const PhiEstimate lower = estimate_phi_lower(model, sel.phi_lower, cfg);
  UpperOracle upper(model, sel.phi_upper, cfg);

  LambdaBound out;
  BoundResult& r = out.bound;
  r.direction = Direction::upper;
  r.method = "lambda:" + path_name(path) + ":" + to_string(sel.phi_upper) + "/" + to_string(sel.phi_lower);
  int iterations = 0;
  double best = 0.0;

  if (path == LambdaOptions::Path::count_direction) {
    if (!event.is_count_threshold()) {
      throw InputError("the count direction needs an event of the form sum(x) >= b");
    }
    const double b = std::get<LinearThreshold>(event.variant()).threshold;
    reachable_spin_sum(n, b);  // rejects empty events
    std::vector<double> lam(static_cast<std::size_t>(dim), 0.0);
    auto j = [&](double alpha) {
      std::fill(lam.begin(), lam.begin() + n, alpha);
      return count_support_closed_form(n, b, alpha) + upper.at(lam).value - lower.value;
    };
    const ScalarMinimum m = minimize_golden(j, 0.0, 8.0, opts.tol);
    best = m.value;
    iterations = m.iterations;
    out.lambda.assign(static_cast<std::size_t>(dim), 0.0);
    std::fill(out.lambda.begin(), out.lambda.begin() + n, m.argmin);
    out.ray_flagged = m.at_boundary && m.argmin > 0.0;
    r.diagnostics.final_step = m.argmin;
  } else {
    const MemberStats members = member_stats(model, event);
    const bool nodes_only = path == LambdaOptions::Path::node_only;
    const int active = nodes_only ? n : dim;

    std::vector<double> lam(static_cast<std::size_t>(dim), 0.0);
    if (opts.initial_lambda) {
      if (static_cast<int>(opts.initial_lambda->size()) != dim) {
        throw InputError("initial lambda has length " + std::to_string(opts.initial_lambda->size()) +
                         ", expected " + std::to_string(dim));
      }
      std::copy(opts.initial_lambda->begin(), opts.initial_lambda->begin() + active, lam.begin());
    }
    auto objective = [&](const std::vector<double>& l, PhiEstimate* u_out, std::size_t* arg) {
      const auto [s, k] = member_support(members, l);
      PhiEstimate u = upper.at(l);
      const double v = s + u.value - lower.value;
      if (u_out) *u_out = std::move(u);
      if (arg) *arg = k;
      return v;
    };

    double theta_max = 0.0;
    for (double t : model.params()) theta_max = std::max(theta_max, std::abs(t));
    const double c = 0.5 * (1.0 + theta_max);

    best = objective(lam, nullptr, nullptr);
    out.lambda = lam;
    // Ray detection state.
    std::vector<double> prev_dir;
    double prev_rate = 0.0;
    double prev_value = best;
    int straight_run = 0;
    double step = 0.0;

    for (int k = 1; k <= max_iter; ++k) {
      PhiEstimate u;
      std::size_t arg = 0;
      const double v = objective(lam, &u, &arg);
      std::vector<double> g(static_cast<std::size_t>(active));
      for (int i = 0; i < active; ++i) {
        g[static_cast<std::size_t>(i)] = u.means[static_cast<std::size_t>(i)] - members.row(arg)[i];
      }
      const double gn = norm(g);
      iterations = k;
      if (gn < 1e-12) break;  // zero subgradient: lam is optimal
      step = c / std::sqrt(static_cast<double>(k));
      std::vector<double> dir(static_cast<std::size_t>(active));
      for (int i = 0; i < active; ++i) {
        dir[static_cast<std::size_t>(i)] = -g[static_cast<std::size_t>(i)] / gn;
        lam[static_cast<std::size_t>(i)] += step * dir[static_cast<std::size_t>(i)];
      }
      const double next = objective(lam, nullptr, nullptr);
      if (next < best) {
        best = next;
        out.lambda = lam;
      }
      const double rate = (v - next) / step;
      if (next < prev_value && !prev_dir.empty()) {
        const double cosine = std::inner_product(dir.begin(), dir.end(), prev_dir.begin(), 0.0);
        const bool steady = cosine > 0.999 && rate > 0.0 && std::abs(rate - prev_rate) <= 0.05 * prev_rate;
        straight_run = steady ? straight_run + 1 : 0;
      } else {
        straight_run = 0;
      }
      if (straight_run >= 50) out.ray_flagged = true;
      prev_dir = std::move(dir);
      prev_rate = rate;
      prev_value = next;
    }
    r.diagnostics.final_step = step;

    if (opts.polish && members.size() > 0) {
      for (double tau : {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        Smooth problem;
        problem.n = static_cast<std::size_t>(active);
        problem.fdf = [&](const std::vector<double>& x, std::vector<double>* grad) {
          std::vector<double> full(static_cast<std::size_t>(dim), 0.0);
          std::copy(x.begin(), x.end(), full.begin());
          std::vector<double> sg;
          const double s = smoothed_support(members, full, tau, grad ? &sg : nullptr);
          const PhiEstimate u = upper.at(full);
          if (grad) {
            grad->resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) (*grad)[i] = sg[i] + u.means[i];
          }
          return s + u.value - lower.value;
        };
        std::vector<double> x(out.lambda.begin(), out.lambda.begin() + active);
        iterations += bfgs(problem, x, 500);
        std::vector<double> full(static_cast<std::size_t>(dim), 0.0);
        std::copy(x.begin(), x.end(), full.begin());
        const double v = objective(full, nullptr, nullptr);
        if (v < best) {
          best = v;
          out.lambda = std::move(full);
        }
      }
    }
  }

  r.diagnostics.iterations = iterations;
  r.diagnostics.converged = lower.converged && upper.all_converged();
  r.diagnostics.raw_value = best;
  r.value = std::min(best, 0.0);
  r.diagnostics.clipped = best > 0.0;
  if (out.ray_flagged) r.diagnostics.note = "objective keeps decreasing along a ray; infimum approached at infinity";
  return out;
}

TightnessResult tightness_check(const ExponentialModel& model, const Event& event, double tol) {
  if (model.num_nodes() > 6) throw InputError("tightness checks enumerate; use at most 6 nodes");
  const MethodSelector exact{UpperMethod::exact, LowerMethod::exact};
  ApproxConfig cfg;
  LambdaOptions opts;
  opts.path = LambdaOptions::Path::full;
  opts.max_iterations = 50000;
  LambdaBound lb = chernoff_lambda_bound(model, event, exact, cfg, opts);

  // Coordinate-wise golden-section passes from the best point.
  const double log_z = brute_phi(model);
  std::vector<double> lam = lb.lambda;
  double value = lb.bound.diagnostics.raw_value;
  for (int pass = 0; pass < 4; ++pass) {
    for (std::size_t i = 0; i < lam.size(); ++i) {
      auto along = [&](double t) {
        std::vector<double> trial = lam;
        trial[i] = t;
        return chernoff_objective(model, event, trial, exact, cfg, log_z);
      };
      const double w = std::max(1.0, std::abs(lam[i]));
      const ScalarMinimum m = minimize_golden(along, lam[i] - w, lam[i] + w, 1e-10);
      if (m.value < value) {
        value = m.value;
        lam[i] = m.argmin;
      }
    }
  }

  TightnessResult out;
  out.lambda = std::move(lam);
  out.bound = value;
  out.log_prob = event_log_prob(model, event);
  out.gap = out.bound - out.log_prob;
  out.passed = out.gap <= tol;
  return out;
}

}  // namespace vcb
