#pragma once

#include <algorithm>
#include <limits>
#include <vector>

namespace nlasso::detail {

/// Dinic max-flow over real capacities. Residual arcs below a relative
/// epsilon are treated as saturated; the caller compares the returned
/// value against the required throughput with its own tolerance.
class MaxFlow {
public:
  explicit MaxFlow(int node_count) : heads_(static_cast<std::size_t>(node_count)) {}

  void add_edge(int from, int to, double cap) {
    max_cap_ = std::max(max_cap_, cap);
    heads_[static_cast<std::size_t>(from)].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back(Arc{to, cap});
    heads_[static_cast<std::size_t>(to)].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back(Arc{from, 0.0});
  }

  double run(int source, int sink) {
    eps_ = std::max(1e-13 * max_cap_, 1e-300);
    double total = 0.0;
    while (bfs(source, sink)) {
      iter_.assign(heads_.size(), 0);
      for (;;) {
        const double pushed = dfs(source, sink, std::numeric_limits<double>::infinity());
        if (pushed <= 0.0) break;
        total += pushed;
      }
    }
    return total;
  }

private:
  struct Arc {
    int to;
    double cap; // residual
  };

  bool bfs(int source, int sink) {
    level_.assign(heads_.size(), -1);
    level_[static_cast<std::size_t>(source)] = 0;
    queue_.clear();
    queue_.push_back(source);
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      const int u = queue_[q];
      for (int aid : heads_[static_cast<std::size_t>(u)]) {
        const Arc& a = arcs_[static_cast<std::size_t>(aid)];
        if (a.cap > eps_ && level_[static_cast<std::size_t>(a.to)] < 0) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
          queue_.push_back(a.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
  }

  double dfs(int u, int sink, double limit) {
    if (u == sink) return limit;
    for (std::size_t& it = iter_[static_cast<std::size_t>(u)];
         it < heads_[static_cast<std::size_t>(u)].size(); ++it) {
      const int aid = heads_[static_cast<std::size_t>(u)][it];
      Arc& a = arcs_[static_cast<std::size_t>(aid)];
      if (a.cap > eps_ &&
          level_[static_cast<std::size_t>(a.to)] == level_[static_cast<std::size_t>(u)] + 1) {
        const double pushed = dfs(a.to, sink, std::min(limit, a.cap));
        if (pushed > 0.0) {
          a.cap -= pushed;
          arcs_[static_cast<std::size_t>(aid ^ 1)].cap += pushed;
          return pushed;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<int>> heads_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> queue_;
  std::vector<std::size_t> iter_;
  double max_cap_ = 0.0;
  double eps_ = 1e-300;
};

} // namespace nlasso::detail
