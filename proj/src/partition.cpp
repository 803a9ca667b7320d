#include "nlasso/partition.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace nlasso {

Partition::Partition(const EmpiricalGraph& g, std::vector<std::vector<int>> clusters)
    : clusters_(std::move(clusters)) {
  const int n = g.node_count();
  assignment_.assign(static_cast<std::size_t>(n), -1);

  if (clusters_.empty())
    throw Error(ErrorCode::InvalidPartition, "partition has no clusters");

  min_cluster_size_ = std::numeric_limits<int>::max();
  for (int l = 0; l < cluster_count(); ++l) {
    const auto& cluster = clusters_[static_cast<std::size_t>(l)];
    if (cluster.empty())
      throw Error(ErrorCode::InvalidPartition, "cluster " + std::to_string(l) + " is empty");
    for (int node : cluster) {
      if (node < 0 || node >= n)
        throw Error(ErrorCode::InvalidNodeId,
                    "cluster " + std::to_string(l) + " names node " + std::to_string(node));
      if (assignment_[static_cast<std::size_t>(node)] != -1)
        throw Error(ErrorCode::InvalidPartition,
                    "node " + std::to_string(node) + " appears in more than one cluster");
      assignment_[static_cast<std::size_t>(node)] = l;
    }
    min_cluster_size_ = std::min(min_cluster_size_, static_cast<int>(cluster.size()));
  }
  for (int i = 0; i < n; ++i)
    if (assignment_[static_cast<std::size_t>(i)] == -1)
      throw Error(ErrorCode::InvalidPartition,
                  "node " + std::to_string(i) + " belongs to no cluster");

  for (int l = 0; l < cluster_count(); ++l)
    induced_subgraph(g, clusters_[static_cast<std::size_t>(l)], l); // connectivity check

  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (assignment_[static_cast<std::size_t>(edge.u)] !=
        assignment_[static_cast<std::size_t>(edge.v)])
      boundary_.push_back(e);
    else
      interior_.push_back(e);
  }
}

InducedSubgraph induced_subgraph(const EmpiricalGraph& g, const std::vector<int>& nodes,
                                 int label) {
  std::vector<int> local_of(static_cast<std::size_t>(g.node_count()), -1);
  for (int local = 0; local < static_cast<int>(nodes.size()); ++local)
    local_of[static_cast<std::size_t>(nodes[static_cast<std::size_t>(local)])] = local;

  std::vector<Edge> edges;
  std::vector<int> edge_ids;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    const int lu = local_of[static_cast<std::size_t>(edge.u)];
    const int lv = local_of[static_cast<std::size_t>(edge.v)];
    if (lu >= 0 && lv >= 0) {
      edges.push_back(Edge{lu, lv, edge.w});
      edge_ids.push_back(e);
    }
  }

  try {
    EmpiricalGraph subgraph(static_cast<int>(nodes.size()), std::move(edges));
    return InducedSubgraph{std::move(subgraph), nodes, std::move(edge_ids), std::move(local_of)};
  } catch (const Error& err) {
    if (err.code() == ErrorCode::Disconnected)
      throw Error(ErrorCode::ClusterDisconnected,
                  "cluster " + std::to_string(label) + " induces a disconnected subgraph");
    throw;
  }
}

double partition_spectral_gap(const EmpiricalGraph& g, const Partition& p) {
  double gap = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int l = 0; l < p.cluster_count(); ++l) {
    const auto& cluster = p.cluster(l);
    if (cluster.size() < 2) continue;
    const InducedSubgraph sub = induced_subgraph(g, cluster, l);
    gap = std::min(gap, spectral_gap(sub.graph));
    any = true;
  }
  if (!any)
    throw Error(ErrorCode::InvalidPartition,
                "all clusters are singletons; no induced subgraph has a spectral gap");
  return gap;
}

} // namespace nlasso
