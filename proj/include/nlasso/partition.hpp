#pragma once

#include <vector>

#include "nlasso/graph.hpp"

namespace nlasso {

/// Disjoint clusters covering all nodes, each inducing a connected
/// subgraph. The boundary is the set of edges whose endpoints lie in
/// different clusters.
class Partition {
public:
  Partition(const EmpiricalGraph& g, std::vector<std::vector<int>> clusters);

  int cluster_count() const noexcept { return static_cast<int>(clusters_.size()); }
  const std::vector<std::vector<int>>& clusters() const noexcept { return clusters_; }
  const std::vector<int>& cluster(int l) const { return clusters_[static_cast<std::size_t>(l)]; }
  int cluster_of(int node) const { return assignment_[static_cast<std::size_t>(node)]; }

  /// Edge indices with endpoints in different clusters.
  const std::vector<int>& boundary_edges() const noexcept { return boundary_; }
  /// Complement of the boundary: intra-cluster edge indices.
  const std::vector<int>& interior_edges() const noexcept { return interior_; }

  int min_cluster_size() const noexcept { return min_cluster_size_; }

private:
  std::vector<std::vector<int>> clusters_;
  std::vector<int> assignment_;
  std::vector<int> boundary_;
  std::vector<int> interior_;
  int min_cluster_size_ = 0;
};

/// Subgraph induced by a node subset, with maps back to the parent graph.
struct InducedSubgraph {
  EmpiricalGraph graph;
  std::vector<int> nodes;     // subgraph node -> parent node
  std::vector<int> edge_ids;  // subgraph edge -> parent edge index
  std::vector<int> local_of;  // parent node -> subgraph node, -1 outside
};

/// Builds the induced subgraph; throws ClusterDisconnected (tagged with
/// `label`) when the induced subgraph falls apart.
InducedSubgraph induced_subgraph(const EmpiricalGraph& g, const std::vector<int>& nodes,
                                 int label);

/// rho(F): minimum spectral gap over cluster-induced subgraphs. Singleton
/// clusters have nothing to cut and are skipped (their gap is taken as
/// +infinity); an all-singleton partition is rejected.
double partition_spectral_gap(const EmpiricalGraph& g, const Partition& p);

} // namespace nlasso
