#include "nlasso/graph.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace nlasso {

namespace {

std::string edge_str(const Edge& e) {
  return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

} // namespace

EmpiricalGraph::EmpiricalGraph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ <= 0)
    throw Error(ErrorCode::InvalidArgument, "node_count must be positive");

  adjacency_.resize(static_cast<std::size_t>(node_count_));
  degrees_ = Eigen::VectorXd::Zero(node_count_);

  std::map<std::pair<int, int>, int> seen;
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& edge = edges_[static_cast<std::size_t>(e)];
    if (edge.u < 0 || edge.u >= node_count_ || edge.v < 0 || edge.v >= node_count_)
      throw Error(ErrorCode::InvalidNodeId, "edge " + edge_str(edge) + " references a node outside 0.." +
                                                std::to_string(node_count_ - 1));
    if (edge.u == edge.v)
      throw Error(ErrorCode::SelfLoop, "edge " + edge_str(edge) + " is a self loop");
    if (!(edge.w > 0.0) || !std::isfinite(edge.w))
      throw Error(ErrorCode::NonPositiveWeight,
                  "edge " + edge_str(edge) + " has weight " + std::to_string(edge.w));
    auto key = std::minmax(edge.u, edge.v);
    if (!seen.emplace(key, e).second)
      throw Error(ErrorCode::DuplicateEdge, "edge " + edge_str(edge) + " appears more than once");

    adjacency_[static_cast<std::size_t>(edge.u)].emplace_back(edge.v, e);
    adjacency_[static_cast<std::size_t>(edge.v)].emplace_back(edge.u, e);
    degrees_[edge.u] += edge.w;
    degrees_[edge.v] += edge.w;
    max_weight_ = std::max(max_weight_, edge.w);
  }

  // breadth-first reachability from node 0
  std::vector<char> visited(static_cast<std::size_t>(node_count_), 0);
  std::vector<int> queue{0};
  visited[0] = 1;
  int reached = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (const auto& [nbr, eid] : adjacency_[static_cast<std::size_t>(queue[q])]) {
      if (!visited[static_cast<std::size_t>(nbr)]) {
        visited[static_cast<std::size_t>(nbr)] = 1;
        queue.push_back(nbr);
        ++reached;
      }
    }
  }
  if (reached != node_count_) {
    int witness = 0;
    while (visited[static_cast<std::size_t>(witness)]) ++witness;
    throw Error(ErrorCode::Disconnected,
                "node " + std::to_string(witness) + " is not reachable from node 0 (" +
                    std::to_string(node_count_ - reached) + " nodes stranded)");
  }
}

int EmpiricalGraph::edge_index(int i, int j) const {
  if (i >= 0 && i < node_count_) {
    for (const auto& [nbr, eid] : adjacency_[static_cast<std::size_t>(i)])
      if (nbr == j) return eid;
  }
  throw Error(ErrorCode::EdgeNotInGraph,
              "no edge {" + std::to_string(i) + "," + std::to_string(j) + "}");
}

EmpiricalGraph build_graph(int node_count, std::vector<Edge> edges) {
  if (edges.empty())
    throw Error(ErrorCode::InvalidArgument, "edge list must be nonempty");
  return EmpiricalGraph(node_count, std::move(edges));
}

Orientation canonical_orientation(const EmpiricalGraph& g) {
  Orientation o;
  o.head.reserve(static_cast<std::size_t>(g.edge_count()));
  o.tail.reserve(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges()) {
    o.head.push_back(std::min(e.u, e.v));
    o.tail.push_back(std::max(e.u, e.v));
  }
  return o;
}

IncidenceMatrix::IncidenceMatrix(const EmpiricalGraph& g, const Orientation& o)
    : cols_(g.node_count()) {
  const int m = g.edge_count();
  if (static_cast<int>(o.head.size()) != m || static_cast<int>(o.tail.size()) != m)
    throw Error(ErrorCode::InvalidArgument, "orientation does not belong to this graph");
  head_.resize(static_cast<std::size_t>(m));
  tail_.resize(static_cast<std::size_t>(m));
  sqrt_w_.resize(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    const Edge& edge = g.edge(e);
    const int h = o.head[static_cast<std::size_t>(e)];
    const int t = o.tail[static_cast<std::size_t>(e)];
    const bool matches = (h == edge.u && t == edge.v) || (h == edge.v && t == edge.u);
    if (!matches)
      throw Error(ErrorCode::InvalidArgument,
                  "orientation of edge " + std::to_string(e) + " does not match its endpoints");
    head_[static_cast<std::size_t>(e)] = h;
    tail_[static_cast<std::size_t>(e)] = t;
    sqrt_w_[static_cast<std::size_t>(e)] = std::sqrt(edge.w);
  }
}

Eigen::VectorXd IncidenceMatrix::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(rows());
  apply_into(x, out);
  return out;
}

Eigen::VectorXd IncidenceMatrix::apply_transpose(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(cols_);
  apply_transpose_into(y, out);
  return out;
}

void IncidenceMatrix::apply_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  for (int e = 0; e < rows(); ++e)
    out[e] = sqrt_w_[static_cast<std::size_t>(e)] *
             (x[head_[static_cast<std::size_t>(e)]] - x[tail_[static_cast<std::size_t>(e)]]);
}

void IncidenceMatrix::apply_transpose_into(const Eigen::VectorXd& y, Eigen::VectorXd& out) const {
  out.setZero();
  for (int e = 0; e < rows(); ++e) {
    const double val = sqrt_w_[static_cast<std::size_t>(e)] * y[e];
    out[head_[static_cast<std::size_t>(e)]] += val;
    out[tail_[static_cast<std::size_t>(e)]] -= val;
  }
}

Eigen::MatrixXd IncidenceMatrix::dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), cols_);
  for (int e = 0; e < rows(); ++e) {
    d(e, head_[static_cast<std::size_t>(e)]) = sqrt_w_[static_cast<std::size_t>(e)];
    d(e, tail_[static_cast<std::size_t>(e)]) = -sqrt_w_[static_cast<std::size_t>(e)];
  }
  return d;
}

IncidenceMatrix incidence_matrix(const EmpiricalGraph& g, const Orientation& o) {
  return IncidenceMatrix(g, o);
}

LaplacianMatrix::LaplacianMatrix(const EmpiricalGraph& g)
    : n_(g.node_count()), degrees_(g.degrees()) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(g.edge_count()) * 2 + static_cast<std::size_t>(n_));
  for (const Edge& e : g.edges()) {
    triplets.emplace_back(e.u, e.v, -e.w);
    triplets.emplace_back(e.v, e.u, -e.w);
  }
  for (int i = 0; i < n_; ++i) triplets.emplace_back(i, i, degrees_[i]);
  matrix_.resize(n_, n_);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

LaplacianMatrix laplacian(const EmpiricalGraph& g) { return LaplacianMatrix(g); }

double spectral_gap(const EmpiricalGraph& g) {
  if (g.node_count() < 2)
    throw Error(ErrorCode::InvalidArgument, "spectral gap needs at least two nodes");
  const Eigen::MatrixXd dense = LaplacianMatrix(g).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eigenvalues = solver.eigenvalues(); // ascending
  const double lambda_max = eigenvalues[eigenvalues.size() - 1];
  const double gap = eigenvalues[1];
  // construction already guaranteed connectivity; a vanishing second
  // eigenvalue here would mean the eigensolve disagrees with BFS
  if (gap <= 1e-9 * std::max(1.0, lambda_max))
    throw Error(ErrorCode::Disconnected, "second Laplacian eigenvalue is numerically zero");
  return gap;
}

double tv_norm(const EmpiricalGraph& g, const GraphSignal& x) {
  if (x.size() != g.node_count())
    throw Error(ErrorCode::InvalidArgument, "signal length does not match node count");
  double total = 0.0;
  for (const Edge& e : g.edges()) total += std::sqrt(e.w) * std::abs(x[e.v] - x[e.u]);
  return total;
}

double tv_norm_subset(const EmpiricalGraph& g, const GraphSignal& x,
                      std::span<const int> edge_indices) {
  if (x.size() != g.node_count())
    throw Error(ErrorCode::InvalidArgument, "signal length does not match node count");
  double total = 0.0;
  for (int idx : edge_indices) {
    if (idx < 0 || idx >= g.edge_count())
      throw Error(ErrorCode::EdgeNotInGraph, "edge index " + std::to_string(idx) + " out of range");
    const Edge& e = g.edge(idx);
    total += std::sqrt(e.w) * std::abs(x[e.v] - x[e.u]);
  }
  return total;
}

double node_norm(const GraphSignal& x, std::span<const int> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::EmptySet, "node set for the norm is empty");
  double sum = 0.0;
  for (int i : nodes) {
    if (i < 0 || i >= x.size())
      throw Error(ErrorCode::InvalidNodeId, "node " + std::to_string(i) + " out of range");
    sum += x[i] * x[i];
  }
  return std::sqrt(sum / static_cast<double>(nodes.size()));
}

Eigen::MatrixXd incidence_pseudoinverse(const EmpiricalGraph& g, const Orientation& o) {
  const IncidenceMatrix d(g, o);
  const Eigen::MatrixXd dense = d.dense();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = 1e-9 * sigma[0];

  const Eigen::Index k = std::min<Eigen::Index>(dense.rows(), dense.cols());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(k);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (sigma[i] > cutoff) {
      inv[i] = 1.0 / sigma[i];
      ++rank;
    }
  }
  // ker(D) = span{1} for a connected graph, so the rank must be exactly N-1
  if (rank != g.node_count() - 1)
    throw Error(ErrorCode::NumericalRankDeficiency,
                "incidence matrix rank " + std::to_string(rank) + ", expected " +
                    std::to_string(g.node_count() - 1));

  Eigen::MatrixXd pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

  const double bound = std::sqrt(2.0 * g.max_weight()) / spectral_gap(g);
  for (Eigen::Index j = 0; j < pinv.cols(); ++j) {
    const double norm = pinv.col(j).norm();
    if (norm > bound * (1.0 + 1e-9))
      throw Error(ErrorCode::NumericalRankDeficiency,
                  "pseudo-inverse column " + std::to_string(j) + " violates the norm bound");
  }
  return pinv;
}

} // namespace nlasso
