#include "nlasso/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlasso {

StepScalings compute_step_scalings(const EmpiricalGraph& g, double lambda, int train_size) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (train_size < 1) throw Error(ErrorCode::EmptyTrainingSet, "training set is empty");

  StepScalings s;
  s.nu = 1.0 / (lambda * static_cast<double>(train_size));
  s.gamma = Eigen::VectorXd::Zero(g.node_count());
  s.edge_steps = Eigen::VectorXd::Zero(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const double sw = std::sqrt(g.edge(e).w);
    s.edge_steps[e] = 1.0 / (2.0 * sw);
    s.gamma[g.edge(e).u] += sw;
    s.gamma[g.edge(e).v] += sw;
  }
  return s;
}

double empirical_error(const GraphSignal& x, const LabelSet& labels) {
  double sum = 0.0;
  for (int k = 0; k < labels.size(); ++k) {
    const double r = labels.values()[static_cast<std::size_t>(k)] -
                     x[labels.training_set()[static_cast<std::size_t>(k)]];
    sum += r * r;
  }
  return sum / static_cast<double>(labels.size());
}

double objective(const EmpiricalGraph& g, const GraphSignal& x, const LabelSet& labels,
                 double lambda) {
  return empirical_error(x, labels) + lambda * tv_norm(g, x);
}

double estimation_error_tv(const EmpiricalGraph& g, const GraphSignal& estimate,
                           const GraphSignal& truth) {
  return tv_norm(g, estimate - truth);
}

SolverResult solve(const EmpiricalGraph& g, const LabelSet& labels, const SolverConfig& cfg) {
  return solve_from(g, labels, cfg, GraphSignal::Zero(g.node_count()),
                    Eigen::VectorXd::Zero(g.edge_count()));
}

SolverResult solve_from(const EmpiricalGraph& g, const LabelSet& labels, const SolverConfig& cfg,
                        const GraphSignal& x0, const Eigen::VectorXd& y0) {
  const int n = g.node_count();
  const int m = g.edge_count();
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "graph has no edges");
  if (x0.size() != n || y0.size() != m)
    throw Error(ErrorCode::InvalidArgument, "starting point does not match the graph");
  if (!(cfg.rel_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "rel_tol must be positive");
  if (cfg.max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be positive");
  for (int node : labels.training_set())
    if (node < 0 || node >= n)
      throw Error(ErrorCode::InvalidNodeId, "label on node " + std::to_string(node));

  const StepScalings scale = compute_step_scalings(g, cfg.lambda, labels.size());
  const Eigen::VectorXd gamma_inv = scale.gamma.cwiseInverse();
  const Orientation orient = canonical_orientation(g);
  const IncidenceMatrix D(g, orient);

  SolverState state;
  state.x_hat = x0;
  state.x_prev = x0;
  state.y_dual = y0;
  state.x_avg = x0;

  constexpr int kWindow = 10;
  std::vector<GraphSignal> avg_history(kWindow, state.x_avg); // x_avg from w iterations back

  GraphSignal x_tilde(n), x_next(n), descent(n);
  Eigen::VectorXd z(m);

  SolverResult result;
  result.max_dual_infnorm = (m > 0) ? state.y_dual.cwiseAbs().maxCoeff() : 0.0;

  bool converged = false;
  while (state.k < cfg.max_iters && !converged) {
    // 1: extrapolation
    x_tilde = 2.0 * state.x_hat - state.x_prev;
    // 2: dual ascent
    D.apply_into(x_tilde, z);
    z.array() = state.y_dual.array() + scale.edge_steps.array() * z.array();
    // 3: clip to the unit ball of the sup norm
    for (int e = 0; e < m; ++e) state.y_dual[e] = z[e] / std::max(1.0, std::abs(z[e]));
    result.max_dual_infnorm =
        std::max(result.max_dual_infnorm, state.y_dual.cwiseAbs().maxCoeff());
    // 4: primal descent
    D.apply_transpose_into(state.y_dual, descent);
    x_next = state.x_hat - gamma_inv.cwiseProduct(descent);
    // 5: proximal data step on the training set
    for (int idx = 0; idx < labels.size(); ++idx) {
      const int i = labels.training_set()[static_cast<std::size_t>(idx)];
      const double yi = labels.values()[static_cast<std::size_t>(idx)];
      x_next[i] =
          (2.0 * scale.nu * yi + scale.gamma[i] * x_next[i]) / (2.0 * scale.nu + scale.gamma[i]);
    }
    state.x_prev.swap(state.x_hat);
    state.x_hat = x_next;
    // 6, 7: advance the counter and the running average
    ++state.k;
    state.x_avg += (state.x_hat - state.x_avg) / static_cast<double>(state.k);

    if (!state.x_hat.allFinite() || !state.y_dual.allFinite())
      throw Error(ErrorCode::NonFiniteIterate,
                  "iterate diverged at iteration " + std::to_string(state.k));

    if (cfg.snapshot_every > 0 && state.k % cfg.snapshot_every == 0)
      result.objective_trace.emplace_back(state.k, objective(g, state.x_avg, labels, cfg.lambda));

    const GraphSignal& old_avg = avg_history[static_cast<std::size_t>(state.k % kWindow)];
    if (state.k > kWindow) {
      const double change = (state.x_avg - old_avg).cwiseAbs().maxCoeff();
      if (change / (1.0 + state.x_avg.cwiseAbs().maxCoeff()) < cfg.rel_tol) converged = true;
    }
    avg_history[static_cast<std::size_t>(state.k % kWindow)] = state.x_avg;
  }

  result.x_out = state.x_avg;
  result.iters_run = state.k;
  result.converged = converged;
  result.final_objective = objective(g, state.x_avg, labels, cfg.lambda);
  if (result.objective_trace.empty() || result.objective_trace.back().first != state.k)
    result.objective_trace.emplace_back(state.k, result.final_objective);
  return result;
}

} // namespace nlasso
