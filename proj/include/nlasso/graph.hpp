#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <utility>
#include <vector>

#include "nlasso/error.hpp"

namespace nlasso {

/// A real value per node; the regression target and everything derived
/// from it live in this type.
using GraphSignal = Eigen::VectorXd;

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

/// Weighted undirected graph. Construction validates the standing
/// assumptions: simple (no self loops, one edge per pair), strictly
/// positive weights, connected. Instances are immutable afterwards, so
/// sharing across threads is safe.
class EmpiricalGraph {
public:
  EmpiricalGraph(int node_count, std::vector<Edge> edges);

  int node_count() const noexcept { return node_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  /// Incident (neighbor node, edge index) pairs of node i.
  const std::vector<std::pair<int, int>>& neighbors(int i) const {
    return adjacency_[static_cast<std::size_t>(i)];
  }

  /// Weighted degree d_i = sum of incident edge weights.
  const Eigen::VectorXd& degrees() const noexcept { return degrees_; }

  double max_weight() const noexcept { return max_weight_; }

  /// Edge index for the unordered pair {i, j}; throws EdgeNotInGraph.
  int edge_index(int i, int j) const;

private:
  int node_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  Eigen::VectorXd degrees_;
  double max_weight_ = 0.0;
};

/// Validated construction; errors name the offending edge or component.
EmpiricalGraph build_graph(int node_count, std::vector<Edge> edges);

/// Head/tail assignment per edge. Only the incidence-matrix signs depend
/// on it; every derived quantity we compute is orientation invariant.
struct Orientation {
  std::vector<int> head;
  std::vector<int> tail;
};

/// Deterministic rule: the endpoint with the smaller id is the head.
Orientation canonical_orientation(const EmpiricalGraph& g);

/// Sparse |E| x N matrix with +sqrt(w_e) at the head column and -sqrt(w_e)
/// at the tail column of each row.
class IncidenceMatrix {
public:
  IncidenceMatrix(const EmpiricalGraph& g, const Orientation& o);

  int rows() const noexcept { return static_cast<int>(head_.size()); }
  int cols() const noexcept { return cols_; }

  int head(int e) const { return head_[static_cast<std::size_t>(e)]; }
  int tail(int e) const { return tail_[static_cast<std::size_t>(e)]; }
  double entry(int e) const { return sqrt_w_[static_cast<std::size_t>(e)]; }

  /// D x
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// D^T y
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;

  /// allocation-free variants for iterative solvers
  void apply_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  void apply_transpose_into(const Eigen::VectorXd& y, Eigen::VectorXd& out) const;

  Eigen::MatrixXd dense() const;

private:
  int cols_;
  std::vector<int> head_;
  std::vector<int> tail_;
  std::vector<double> sqrt_w_;
};

IncidenceMatrix incidence_matrix(const EmpiricalGraph& g, const Orientation& o);

/// L = Lambda - W with the weighted degree matrix Lambda.
class LaplacianMatrix {
public:
  explicit LaplacianMatrix(const EmpiricalGraph& g);

  int size() const noexcept { return n_; }
  const Eigen::VectorXd& degrees() const noexcept { return degrees_; }
  const Eigen::SparseMatrix<double>& sparse() const noexcept { return matrix_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }

private:
  int n_;
  Eigen::VectorXd degrees_;
  Eigen::SparseMatrix<double> matrix_;
};

LaplacianMatrix laplacian(const EmpiricalGraph& g);

/// Second-smallest Laplacian eigenvalue, by dense symmetric
/// eigendecomposition. Intended for desk-scale graphs (N up to a few
/// thousand); the solver itself never calls this.
double spectral_gap(const EmpiricalGraph& g);

/// Weighted total variation: sum over edges of sqrt(w) |x_j - x_i|.
double tv_norm(const EmpiricalGraph& g, const GraphSignal& x);

/// TV restricted to a set of edge indices.
double tv_norm_subset(const EmpiricalGraph& g, const GraphSignal& x,
                      std::span<const int> edge_indices);

/// sqrt((1/|M|) sum_{i in M} x_i^2) over a nonempty node set.
double node_norm(const GraphSignal& x, std::span<const int> nodes);

/// Moore-Penrose pseudo-inverse of the incidence matrix via SVD
/// (N x |E|). The expected nullspace is the one-dimensional space of
/// constant signals; a larger numerical nullspace raises
/// NumericalRankDeficiency. Column norms are checked against the
/// sqrt(2 max_w)/gap bound they must satisfy.
Eigen::MatrixXd incidence_pseudoinverse(const EmpiricalGraph& g, const Orientation& o);

} // namespace nlasso
