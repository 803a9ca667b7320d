#include "nlasso/sbm.hpp"

#include <numeric>
#include <string>

#include "nlasso/rng.hpp"

namespace nlasso {

SbmSample generate_sbm(const SbmConfig& cfg, std::uint64_t seed, int max_retries) {
  if (cfg.sizes.empty()) throw Error(ErrorCode::InvalidArgument, "sbm needs at least one cluster");
  for (int s : cfg.sizes)
    if (s < 1) throw Error(ErrorCode::InvalidArgument, "cluster sizes must be positive");
  if (cfg.p_in < 0.0 || cfg.p_in > 1.0 || cfg.p_out < 0.0 || cfg.p_out > 1.0)
    throw Error(ErrorCode::InvalidArgument, "edge probabilities must lie in [0, 1]");
  if (!(cfg.w_in > 0.0) || !(cfg.w_out > 0.0))
    throw Error(ErrorCode::InvalidArgument, "edge weights must be positive");
  if (max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max_retries must be positive");

  const int n = std::accumulate(cfg.sizes.begin(), cfg.sizes.end(), 0);
  std::vector<int> block_of(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> clusters;
  {
    int next = 0;
    for (std::size_t l = 0; l < cfg.sizes.size(); ++l) {
      std::vector<int> cluster;
      for (int k = 0; k < cfg.sizes[l]; ++k) {
        block_of[static_cast<std::size_t>(next)] = static_cast<int>(l);
        cluster.push_back(next++);
      }
      clusters.push_back(std::move(cluster));
    }
  }

  const Rng root(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng = root.substream(static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool same = block_of[static_cast<std::size_t>(i)] ==
                          block_of[static_cast<std::size_t>(j)];
        const double p = same ? cfg.p_in : cfg.p_out;
        if (rng.next_double() < p)
          edges.push_back(Edge{i, j, same ? cfg.w_in : cfg.w_out});
      }
    }
    if (edges.empty()) continue;
    try {
      EmpiricalGraph graph(n, std::move(edges));
      Partition partition(graph, clusters);
      return SbmSample{std::move(graph), std::move(partition)};
    } catch (const Error& err) {
      if (err.code() == ErrorCode::Disconnected || err.code() == ErrorCode::ClusterDisconnected)
        continue;
      throw;
    }
  }
  throw Error(ErrorCode::GeneratorExhausted,
              "no connected clustered graph in " + std::to_string(max_retries) + " draws");
}

} // namespace nlasso
