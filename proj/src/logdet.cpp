#include <algorithm>
#include <cmath>
#include <numbers>

#include "vcb/approx.hpp"
#include "vcb/error.hpp"
#include "vcb/numeric.hpp"

namespace vcb {

namespace {

constexpr double kDiagonalShift = 1.0 / 3.0;
constexpr double kInitialBarrier = 1.0;
constexpr double kBarrierDecay = 0.1;
constexpr double kFinalBarrier = 1e-10;
constexpr int kNewtonStepsPerStage = 100;
constexpr double kStageDecrement = 1e-12;
// Start point means are kept strictly inside (-1, 1).
constexpr double kInteriorMargin = 1e-6;

// log det of a symmetric positive definite matrix, -inf if Cholesky fails.
double log_det_spd(const Eigen::MatrixXd& m, Eigen::LLT<Eigen::MatrixXd>* out = nullptr) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return kNegInf;
  const auto diag = llt.matrixLLT().diagonal();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0)) return kNegInf;
    acc += 2.0 * std::log(diag(i));
  }
  if (out != nullptr) *out = std::move(llt);
  return acc;
}

}  // namespace

double logdet_constant(int n) { return 0.5 * n * std::log(std::numbers::pi * std::numbers::e / 2.0); }

bool SdpState::moment_psd(double tol) const {
  if (moment.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(moment, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tol;
}

Eigen::MatrixXd LogDetRelaxation::Affine::at(const std::vector<double>& v) const {
  Eigen::MatrixXd m = base;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (const Entry& e : basis[a]) {
      m(e.i, e.j) += v[a] * e.coef;
      m(e.j, e.i) += v[a] * e.coef;
    }
  }
  return m;
}

LogDetRelaxation::LogDetRelaxation(const ExponentialModel& model, std::vector<Clamp> clamps)
    : model_(model) {
  const Graph& g = model.graph();
  const int n = g.num_nodes();
  clamp_value_.assign(static_cast<std::size_t>(n), 0);
  for (const Clamp& c : clamps) {
    if (c.node < 0 || c.node >= n) throw InputError("clamped node out of range");
    if (c.value != 1 && c.value != -1) throw InputError("clamped value must be +1 or -1");
    if (clamp_value_[static_cast<std::size_t>(c.node)] != 0) throw InputError("node clamped twice");
    clamp_value_[static_cast<std::size_t>(c.node)] = c.value;
  }
  free_slot_.assign(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (clamp_value_[static_cast<std::size_t>(v)] == 0) {
      free_slot_[static_cast<std::size_t>(v)] = static_cast<int>(free_nodes_.size());
      free_nodes_.push_back(v);
    }
  }
  const int nf = static_cast<int>(free_nodes_.size());
  auto clamp_of = [&](int v) { return clamp_value_[static_cast<std::size_t>(v)]; };

  // Linear objective over free coordinates plus the constant from clamped terms.
  linear_.assign(static_cast<std::size_t>(nf + nf * (nf - 1) / 2), 0.0);
  auto pair_slot = [nf](int i, int j) {  // i < j free slots
    return nf + i * nf - i * (i + 1) / 2 + (j - i - 1);
  };
  for (int v = 0; v < n; ++v) {
    if (clamp_of(v) != 0) {
      constant_ += model.node_param(v) * clamp_of(v);
    } else {
      linear_[static_cast<std::size_t>(free_slot_[static_cast<std::size_t>(v)])] += model.node_param(v);
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const double th = model.edge_param(e);
    const Spin cs = clamp_of(ed.s);
    const Spin ct = clamp_of(ed.t);
    if (cs != 0 && ct != 0) {
      constant_ += th * cs * ct;
    } else if (cs != 0) {
      linear_[static_cast<std::size_t>(free_slot_[static_cast<std::size_t>(ed.t)])] += th * cs;
    } else if (ct != 0) {
      linear_[static_cast<std::size_t>(free_slot_[static_cast<std::size_t>(ed.s)])] += th * ct;
    } else {
      const int i = free_slot_[static_cast<std::size_t>(ed.s)];
      const int j = free_slot_[static_cast<std::size_t>(ed.t)];
      linear_[static_cast<std::size_t>(pair_slot(std::min(i, j), std::max(i, j)))] += th;
    }
  }

  // A(mu) on the full (n+1)-dimensional moment matrix.
  a_.base = Eigen::MatrixXd::Identity(n + 1, n + 1);
  for (int v = 1; v <= n; ++v) a_.base(v, v) += kDiagonalShift;
  for (int k = 0; k < n; ++k) {
    if (clamp_of(k) == 0) continue;
    a_.base(0, k + 1) = a_.base(k + 1, 0) = clamp_of(k);
    for (int k2 = k + 1; k2 < n; ++k2) {
      if (clamp_of(k2) == 0) continue;
      a_.base(k + 1, k2 + 1) = a_.base(k2 + 1, k + 1) = clamp_of(k) * clamp_of(k2);
    }
  }
  a_.basis.assign(linear_.size(), {});
  moment_.base = Eigen::MatrixXd::Identity(nf + 1, nf + 1);
  moment_.basis.assign(linear_.size(), {});
  for (int i = 0; i < nf; ++i) {
    const int f = free_nodes_[static_cast<std::size_t>(i)];
    auto& entries = a_.basis[static_cast<std::size_t>(i)];
    entries.push_back({0, f + 1, 1.0});
    for (int k = 0; k < n; ++k) {
      if (clamp_of(k) != 0) entries.push_back({std::min(k, f) + 1, std::max(k, f) + 1, double(clamp_of(k))});
    }
    moment_.basis[static_cast<std::size_t>(i)].push_back({0, i + 1, 1.0});
    for (int j = i + 1; j < nf; ++j) {
      const int f2 = free_nodes_[static_cast<std::size_t>(j)];
      const auto slot = static_cast<std::size_t>(pair_slot(i, j));
      a_.basis[slot].push_back({f + 1, f2 + 1, 1.0});
      moment_.basis[slot].push_back({i + 1, j + 1, 1.0});
    }
  }
}

std::vector<double> LogDetRelaxation::initial_point() const {
  const int nf = static_cast<int>(free_nodes_.size());
  std::vector<double> v(linear_.size(), 0.0);
  std::vector<double> m(static_cast<std::size_t>(nf));
  for (int i = 0; i < nf; ++i) {
    const double t = std::tanh(model_.node_param(free_nodes_[static_cast<std::size_t>(i)]));
    m[static_cast<std::size_t>(i)] = std::clamp(t, -1.0 + kInteriorMargin, 1.0 - kInteriorMargin);
    v[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)];
  }
  std::size_t slot = static_cast<std::size_t>(nf);
  for (int i = 0; i < nf; ++i)
    for (int j = i + 1; j < nf; ++j) v[slot++] = m[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(j)];
  return v;
}

bool LogDetRelaxation::feasible(const std::vector<double>& v) const {
  if (v.size() != linear_.size()) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(moment_.at(v), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -1e-9;
}

double LogDetRelaxation::objective(const std::vector<double>& v) const {
  if (v.size() != linear_.size()) throw InputError("relaxation point has the wrong dimension");
  const double ld = log_det_spd(a_.at(v));
  if (ld == kNegInf) return kNegInf;
  double acc = constant_;
  for (std::size_t a = 0; a < v.size(); ++a) acc += linear_[a] * v[a];
  return acc + 0.5 * ld;
}

std::vector<double> LogDetRelaxation::full_means(const std::vector<double>& v) const {
  const int n = model_.num_nodes();
  std::vector<double> means(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const int slot = free_slot_[static_cast<std::size_t>(s)];
    means[static_cast<std::size_t>(s)] = slot >= 0 ? v[static_cast<std::size_t>(slot)]
                                                   : clamp_value_[static_cast<std::size_t>(s)];
  }
  return means;
}

Eigen::MatrixXd LogDetRelaxation::full_moment(const std::vector<double>& v) const {
  Eigen::MatrixXd m = a_.at(v);
  for (Eigen::Index i = 1; i < m.rows(); ++i) m(i, i) -= kDiagonalShift;
  return m;
}

SdpState LogDetRelaxation::state(const std::vector<double>& v) const {
  SdpState st;
  st.moment = full_moment(v);
  st.a = a_.at(v);
  st.mu.node_means = full_means(v);
  for (const Edge& e : model_.graph().edges()) st.mu.edge_means.push_back(st.moment(e.s + 1, e.t + 1));
  return st;
}

LogDetRelaxation::Solution LogDetRelaxation::solve(const ApproxConfig& cfg) const {
  cfg.validate();
  const auto dim = static_cast<Eigen::Index>(linear_.size());
  Solution sol;
  sol.point = initial_point();
  if (dim == 0) {
    sol.objective = objective(sol.point);
    sol.converged = true;
    return sol;
  }

  auto barrier_value = [&](const std::vector<double>& v, double t) {
    const double ld_a = log_det_spd(a_.at(v));
    const double ld_m = log_det_spd(moment_.at(v));
    if (ld_a == kNegInf || ld_m == kNegInf) return kNegInf;
    double acc = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a) acc += linear_[a] * v[a];
    return acc + 0.5 * ld_a + t * ld_m;
  };

  // Gradient and Hessian of w * log det X(v) for an affine X.
  auto accumulate = [](const Affine& aff, const Eigen::MatrixXd& inv, double w, Eigen::VectorXd& grad,
                       Eigen::MatrixXd& hess) {
    const auto d = static_cast<Eigen::Index>(aff.basis.size());
    for (Eigen::Index a = 0; a < d; ++a) {
      for (const Entry& e : aff.basis[static_cast<std::size_t>(a)]) grad(a) += w * 2.0 * e.coef * inv(e.i, e.j);
    }
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = a; b < d; ++b) {
        double acc = 0.0;
        for (const Entry& e : aff.basis[static_cast<std::size_t>(a)]) {
          for (const Entry& f : aff.basis[static_cast<std::size_t>(b)]) {
            acc += e.coef * f.coef * (inv(e.i, f.j) * inv(e.j, f.i) + inv(e.i, f.i) * inv(e.j, f.j));
          }
        }
        hess(a, b) -= 2.0 * w * acc;
        if (b != a) hess(b, a) -= 2.0 * w * acc;
      }
    }
  };

  int iterations = 0;
  bool stage_converged = false;
  double decrement = 0.0;
  double t = kInitialBarrier;
  while (true) {
    stage_converged = false;
    double current = barrier_value(sol.point, t);
    for (int step = 0; step < kNewtonStepsPerStage && iterations < cfg.max_iterations; ++step) {
      const Eigen::MatrixXd a_inv = a_.at(sol.point).llt().solve(Eigen::MatrixXd::Identity(a_.base.rows(), a_.base.rows()));
      const Eigen::MatrixXd m_inv =
          moment_.at(sol.point).llt().solve(Eigen::MatrixXd::Identity(moment_.base.rows(), moment_.base.rows()));
      Eigen::VectorXd grad = Eigen::Map<const Eigen::VectorXd>(linear_.data(), dim);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
      accumulate(a_, a_inv, 0.5, grad, hess);
      accumulate(moment_, m_inv, t, grad, hess);

      const Eigen::VectorXd dir = (-hess).ldlt().solve(grad);
      decrement = grad.dot(dir);
      ++iterations;
      if (!std::isfinite(decrement) || decrement < 0.0) break;
      if (0.5 * decrement < kStageDecrement) {
        stage_converged = true;
        break;
      }
      double s = 1.0;
      bool accepted = false;
      while (s > 1e-14) {
        std::vector<double> trial(sol.point);
        for (Eigen::Index a = 0; a < dim; ++a) trial[static_cast<std::size_t>(a)] += s * dir(a);
        const double val = barrier_value(trial, t);
        if (val != kNegInf && val >= current + 0.25 * s * decrement) {
          sol.point = std::move(trial);
          current = val;
          accepted = true;
          break;
        }
        s *= 0.5;
      }
      if (!accepted) {
        // No ascent left at floating-point resolution.
        stage_converged = 0.5 * decrement < 1e-9;
        break;
      }
    }
    if (t <= kFinalBarrier || iterations >= cfg.max_iterations) break;
    t *= kBarrierDecay;
  }

  sol.objective = objective(sol.point);
  sol.iterations = iterations;
  sol.converged = stage_converged && t <= kFinalBarrier;
  sol.final_decrement = decrement;
  return sol;
}

double LogDetRelaxation::bound_value(const Solution& s) const {
  return s.objective + logdet_constant(model_.num_nodes()) + model_.log_offset();
}

ApproxResult logdet_sdp_upper(const ExponentialModel& model, const ApproxConfig& cfg) {
  const LogDetRelaxation relax(model);
  const auto sol = relax.solve(cfg);
  ApproxResult out;
  out.bound.value = relax.bound_value(sol);
  out.bound.direction = Direction::upper;
  out.bound.method = "logdet";
  out.bound.diagnostics.iterations = sol.iterations;
  out.bound.diagnostics.converged = sol.converged;
  out.bound.diagnostics.final_step = sol.final_decrement;
  out.bound.diagnostics.raw_value = out.bound.value;
  out.marginals = relax.state(sol.point).mu;
  return out;
}

BoundResult logdet_event_upper(const ExponentialModel& model, const Event& event,
                               const ApproxConfig& cfg) {
  event.validate(model.num_nodes());
  std::vector<LogDetRelaxation::Clamp> clamps;
  if (const auto* nm = std::get_if<NodeMarginal>(&event.variant())) {
    clamps.push_back({nm->node, nm->value});
  } else if (const auto* pm = std::get_if<PairMarginal>(&event.variant())) {
    clamps.push_back({pm->s, pm->vs});
    clamps.push_back({pm->t, pm->vt});
  } else {
    throw UnsupportedError("logdet_event_upper handles node and pair marginals only; use the "
                           "lambda-optimized Chernoff bound for " + event.kind() + " events");
  }
  const LogDetRelaxation relax(model, std::move(clamps));
  const auto sol = relax.solve(cfg);
  BoundResult r;
  r.value = relax.bound_value(sol);
  r.direction = Direction::upper;
  r.method = "logdet_event";
  r.diagnostics.iterations = sol.iterations;
  r.diagnostics.converged = sol.converged;
  r.diagnostics.final_step = sol.final_decrement;
  r.diagnostics.raw_value = r.value;
  return r;
}

}  // namespace vcb
