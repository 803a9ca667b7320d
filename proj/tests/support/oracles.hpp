#pragma once

// Independent reference implementations used only by tests. Each oracle
// recomputes its quantity through a different route than the library:
// eigenvalues by cyclic Jacobi rotations, the nLasso optimum by ADMM,
// flow feasibility by a phase-1 simplex on the raw constraint system.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "nlasso/graph.hpp"
#include "nlasso/partition.hpp"
#include "nlasso/rng.hpp"
#include "nlasso/signal_model.hpp"

namespace nlasso::testsupport {

/// Eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi sweeps.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a);

/// Minimizer of (1/M) sum_{i in M} (y_i - x_i)^2 + lambda ||D x||_1 by
/// ADMM with an exact linear-system x-update. Builds its own incidence
/// operator from the edge list.
GraphSignal admm_nlasso_oracle(const EmpiricalGraph& g, const LabelSet& labels, double lambda,
                               int max_iters = 200000, double tol = 1e-12);

/// Feasibility of the raw flow-with-demands system for one global sign
/// pattern over all boundary edges (aligned with p.boundary_edges()),
/// decided by a dense phase-1 simplex with Bland's rule.
bool lp_resolving_feasible(const EmpiricalGraph& g, const Partition& p,
                           const std::vector<int>& train, double K, double L,
                           std::span<const int> boundary_signs);

/// Minimum of sum-of-artificials for {A x = b, x >= 0}; zero means the
/// system is feasible.
double phase1_simplex(Eigen::MatrixXd a, Eigen::VectorXd b);

/// Random connected graph: spanning tree plus extra edges, weights
/// uniform in [0.5, 2].
EmpiricalGraph random_connected_graph(Rng& rng, int min_n, int max_n);

struct PartitionedInstance {
  EmpiricalGraph graph;
  std::vector<std::vector<int>> clusters;
};

/// Random graph with planted connected clusters and a controlled number
/// of boundary edges.
PartitionedInstance random_partitioned_instance(Rng& rng, int n_clusters, int min_cluster_size,
                                                int max_cluster_size, int max_boundary);

} // namespace nlasso::testsupport
