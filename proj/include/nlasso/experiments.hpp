#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlasso/flow.hpp"
#include "nlasso/graph.hpp"
#include "nlasso/partition.hpp"
#include "nlasso/sbm.hpp"

namespace nlasso {

/// Monte-Carlo harness: one graph and ground-truth signal per experiment,
/// one training set and certification per training-set size, fresh label
/// noise per trial. Everything derives from base_seed.
struct ExperimentConfig {
  SbmConfig sbm;
  std::vector<double> signal_values; // one per cluster
  std::vector<double> sigmas;
  std::vector<int> train_sizes;
  std::vector<double> lambdas;
  int trials = 1;
  std::uint64_t base_seed = 0;

  int solver_max_iters = 20000;
  double solver_rel_tol = 1e-6;

  // certification of each training set: sweep K, bisect L, keep the
  // hypothesis-satisfying pair with the smallest condition number
  std::vector<double> cert_k_grid = {2.0, 8.0, 32.0, 128.0};
  double cert_bisect_tol = 1e-2;
  long long cert_sample_budget = 20000; // final verdict
  long long cert_search_budget = 2000;  // inside the L bisection
  int generator_retries = 100;
};

struct TrialRecord {
  double sigma = 0.0;
  int m_size = 0;
  double lambda = 0.0;
  int trial = 0;
  double tv_error = 0.0;   // ||x_hat - x_bar||_TV
  double node_error = 0.0; // ||x_hat - x_bar||_V over all nodes
  int iters = 0;
  double K = 0.0;
  double L = 0.0;
  double kappa = 0.0; // NaN when L <= 3
};

struct CellCertification {
  int m_size = 0;
  double K = 0.0;
  double L = 0.0;
  double kappa = 0.0; // NaN when L <= 3
  ResolvingCertificate::Status status = ResolvingCertificate::Status::refuted;
  bool hypothesis_ok = false; // L > 4 and K in (1, L-2)
};

/// The graph- and partition-level quantities the error bound consumes.
struct BoundInputs {
  int cluster_count = 0;
  int min_cluster_size = 0;
  double partition_gap = 0.0; // rho_F
  double d_sup_norm = 0.0;    // max entry magnitude of D = sqrt(max edge weight)
  int train_size = 0;
};

BoundInputs bound_inputs(const EmpiricalGraph& g, const Partition& p, int train_size);

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<CellCertification> certifications; // one per training-set size
  int cluster_count = 0;
  int min_cluster_size = 0;
  double partition_gap = 0.0;
  double d_sup_norm = 0.0;
  double truth_tv = 0.0;          // TV of the ground-truth signal
  double max_dual_infnorm = 0.0;  // worst dual sup norm over all solves
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Two-term tail bound on P{ ||x_hat - x_bar||_TV >= eta }:
///   2 |F| exp(-min|C| eta^2 / (6300 kappa^2 sigma^2))
/// + 2 M exp(-M^2 rho_F^2 eta^2 / (900 kappa^2 sigma^2 ||D||_inf^2)),
/// clipped to [0, 1]. The first exponent uses the smallest cluster size
/// (the conservative choice). Requires L > 4, K in (1, L-2), sigma > 0,
/// eta > 0; violations raise HypothesisViolated naming the hypothesis.
double estimation_tail_bound(const BoundInputs& in, double K, double L, double sigma, double eta);

struct BoundRow {
  double eta = 0.0;
  double empirical_freq = 0.0;
  double bound = 1.0;
};

struct BoundEvaluation {
  std::vector<BoundRow> rows;
  bool hypothesis_ok = false; // false: bound vacuously 1 on every row
};

/// Tail frequencies of tv_error over one cell's records against the
/// bound. Cells whose certification does not satisfy the hypotheses get
/// the clipped vacuous bound of 1.
BoundEvaluation evaluate_bound(std::span<const TrialRecord> cell_records, const BoundInputs& in,
                               const CellCertification& cert, double sigma,
                               std::span<const double> eta_grid);

/// Both sides of the decomposition inequality
///   sum_i u_i v_i <= (1/N) sum v sum u + ||(D^+)^T v||_inf ||u||_TV.
std::pair<double, double> decomposition_check(const EmpiricalGraph& g, const GraphSignal& u,
                                       const GraphSignal& v);

/// Both sides of the per-cluster variant restricted to the training set:
///   sum_{i in M} v_i u_i <= max_l |mean_{C_l}(v)| sum_{j in M} |u_j|
///                          + max_l ||(D_{C_l}^+)^T v_{C_l}||_inf ||u||_TV.
std::pair<double, double> cluster_decomposition_check(const EmpiricalGraph& g, const Partition& p,
                                           const std::vector<int>& train, const GraphSignal& u,
                                           const GraphSignal& v);

/// results CSV: header sigma,M,lambda,trial,tv_error,node_error,iters,K,L,kappa
/// with 17 significant digits so values round-trip bit exactly.
void emit_results(std::span<const TrialRecord> records, const std::string& path);

/// bound CSV: header eta,empirical_freq,bound.
void emit_bound_table(const BoundEvaluation& eval, const std::string& path);

} // namespace nlasso
