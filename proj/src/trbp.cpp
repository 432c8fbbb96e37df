#include <array>
#include <cmath>

#include "vcb/approx.hpp"
#include "vcb/error.hpp"
#include "vcb/numeric.hpp"

namespace vcb {

namespace {

// For binary spins a log-domain message normalized to zero mean is
// m(x) = h * x, so each directed edge carries a single number h.
// msg[2e] is s -> t (into t), msg[2e + 1] is t -> s (into s) for edge e = (s, t).
struct Messages {
  std::vector<double> h;
  std::vector<double> field;  // theta_s + sum_v rho_vs h_{v -> s}
};

double message_update(double cavity, double coupling) {
  return 0.5 * (log_cosh(cavity + coupling) - log_cosh(cavity - coupling));
}

}  // namespace

ApproxResult trbp_upper(const ExponentialModel& model, const EdgeAppearance& rho,
                        const ApproxConfig& cfg) {
  cfg.validate();
  const Graph& g = model.graph();
  const int n = g.num_nodes();
  const int m = g.num_edges();
  if (static_cast<int>(rho.rho.size()) != m) {
    throw InputError("edge appearance vector has length " + std::to_string(rho.rho.size()) +
                     ", expected " + std::to_string(m));
  }
  for (double r : rho.rho) {
    if (!(r > 0.0 && r <= 1.0 + 1e-12)) throw InputError("edge appearance probabilities must lie in (0, 1]");
  }

  Messages msg{std::vector<double>(2 * static_cast<std::size_t>(m), 0.0),
               std::vector<double>(model.node_params().begin(), model.node_params().end())};
  auto rho_of = [&](int e) { return rho.rho[static_cast<std::size_t>(e)]; };

  int iterations = 0;
  bool converged = m == 0;
  double residual = 0.0;
  for (int it = 1; it <= cfg.max_iterations && !converged; ++it) {
    residual = 0.0;
    for (int e = 0; e < m; ++e) {
      const Edge& ed = g.edge(e);
      const double coupling = model.edge_param(e) / rho_of(e);
      for (int dir = 0; dir < 2; ++dir) {
        // dir 0: s -> t, dir 1: t -> s.
        const int src = dir == 0 ? ed.s : ed.t;
        const int dst = dir == 0 ? ed.t : ed.s;
        const auto out = 2 * static_cast<std::size_t>(e) + static_cast<std::size_t>(dir);
        const auto back = 2 * static_cast<std::size_t>(e) + static_cast<std::size_t>(1 - dir);
        const double cavity = msg.field[static_cast<std::size_t>(src)] - msg.h[back];
        const double target = message_update(cavity, coupling);
        const double old = msg.h[out];
        residual = std::max(residual, std::abs(target - old));
        const double updated = (1.0 - cfg.damping) * target + cfg.damping * old;
        msg.h[out] = updated;
        msg.field[static_cast<std::size_t>(dst)] += rho_of(e) * (updated - old);
      }
    }
    iterations = it;
    if (residual < cfg.tolerance) converged = true;
  }

  // Beliefs and the reweighted free energy at the final messages.
  PseudoMarginals mu;
  mu.node_means.resize(static_cast<std::size_t>(n));
  double value = 0.0;
  for (int s = 0; s < n; ++s) {
    const double ms = std::tanh(msg.field[static_cast<std::size_t>(s)]);
    mu.node_means[static_cast<std::size_t>(s)] = ms;
    value += model.node_param(s) * ms + binary_entropy(0.5 * (1.0 + ms));
  }
  mu.edge_means.resize(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    const double coupling = model.edge_param(e) / rho_of(e);
    const double us = msg.field[static_cast<std::size_t>(ed.s)] - msg.h[2 * static_cast<std::size_t>(e) + 1];
    const double ut = msg.field[static_cast<std::size_t>(ed.t)] - msg.h[2 * static_cast<std::size_t>(e)];
    std::array<double, 4> logw{};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double xs = a == 0 ? -1.0 : 1.0;
        const double xt = b == 0 ? -1.0 : 1.0;
        logw[static_cast<std::size_t>(2 * a + b)] = coupling * xs * xt + us * xs + ut * xt;
      }
    }
    const double z = log_sum_exp(logw);
    std::array<double, 4> p{};
    for (std::size_t k = 0; k < 4; ++k) p[k] = std::exp(logw[k] - z);
    const double mst = p[0] - p[1] - p[2] + p[3];
    mu.edge_means[static_cast<std::size_t>(e)] = mst;

    double joint_entropy = 0.0;
    for (double q : p) joint_entropy -= q > 0.0 ? q * std::log(q) : 0.0;
    const double ps = p[2] + p[3];
    const double pt = p[1] + p[3];
    const double mutual = binary_entropy(ps) + binary_entropy(pt) - joint_entropy;
    value += model.edge_param(e) * mst - rho_of(e) * mutual;
  }

  ApproxResult out;
  out.bound.value = value + model.log_offset();
  out.bound.direction = Direction::upper;
  out.bound.method = "trbp";
  out.bound.diagnostics.iterations = iterations;
  out.bound.diagnostics.converged = converged;
  out.bound.diagnostics.final_step = residual;
  out.bound.diagnostics.raw_value = out.bound.value;
  if (!converged) out.bound.diagnostics.note = "message passing did not converge; value unverified";
  out.marginals = std::move(mu);
  return out;
}

}  // namespace vcb
