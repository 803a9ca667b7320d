#pragma once

#include <utility>
#include <vector>

#include "nlasso/graph.hpp"
#include "nlasso/signal_model.hpp"

namespace nlasso {

struct SolverConfig {
  double lambda = 1.0;      // TV regularization strength
  int max_iters = 20000;
  double rel_tol = 1e-7;    // windowed sup-norm change of the averaged iterate
  int snapshot_every = 0;   // 0 disables intermediate objective logging
};

/// Diagonal preconditioning of the primal-dual iteration: nu = 1/(lambda M),
/// gamma_i = sum of sqrt(w) over incident edges, edge step 1/(2 sqrt(w_e)).
struct StepScalings {
  double nu = 0.0;
  Eigen::VectorXd gamma;      // per node
  Eigen::VectorXd edge_steps; // per edge
};

StepScalings compute_step_scalings(const EmpiricalGraph& g, double lambda, int train_size);

/// Iteration state: current and previous primal iterates, the dual edge
/// vector (inside the unit sup-norm ball after every clip), the running
/// average, and the step counter. Owned by one solve call.
struct SolverState {
  GraphSignal x_hat;
  GraphSignal x_prev;
  Eigen::VectorXd y_dual;
  GraphSignal x_avg;
  int k = 0;
};

struct SolverResult {
  GraphSignal x_out;          // averaged iterate at termination
  int iters_run = 0;
  double final_objective = 0.0;
  std::vector<std::pair<int, double>> objective_trace;
  bool converged = false;     // false means the max_iters cap was hit
  double max_dual_infnorm = 0.0; // running max over iterations of max_e |y_e|
};

/// (1/M) sum over the training set of (y_i - x_i)^2.
double empirical_error(const GraphSignal& x, const LabelSet& labels);

/// empirical_error + lambda * tv_norm.
double objective(const EmpiricalGraph& g, const GraphSignal& x, const LabelSet& labels,
                 double lambda);

/// TV of the difference between an estimate and the ground truth.
double estimation_error_tv(const EmpiricalGraph& g, const GraphSignal& estimate,
                           const GraphSignal& truth);

/// Runs the primal-dual iteration from the standard all-zeros start.
SolverResult solve(const EmpiricalGraph& g, const LabelSet& labels, const SolverConfig& cfg);

/// Same iteration from a caller-supplied primal/dual starting point. Used
/// to probe fixed-point behaviour; `solve` is this with zeros.
SolverResult solve_from(const EmpiricalGraph& g, const LabelSet& labels, const SolverConfig& cfg,
                        const GraphSignal& x0, const Eigen::VectorXd& y0);

} // namespace nlasso
