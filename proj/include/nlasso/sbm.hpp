#pragma once

#include <cstdint>
#include <vector>

#include "nlasso/graph.hpp"
#include "nlasso/partition.hpp"

namespace nlasso {

/// Stochastic block model: clusters of the given sizes, independent edges
/// with probability p_in inside a cluster and p_out across, constant
/// weights w_in / w_out.
struct SbmConfig {
  std::vector<int> sizes;
  double p_in = 0.5;
  double p_out = 0.05;
  double w_in = 1.0;
  double w_out = 1.0;
};

struct SbmSample {
  EmpiricalGraph graph;
  Partition partition;
};

/// Draws until the graph is connected and every cluster induces a
/// connected subgraph; throws GeneratorExhausted after max_retries draws.
/// Deterministic in the seed (each retry uses its own substream).
SbmSample generate_sbm(const SbmConfig& cfg, std::uint64_t seed, int max_retries = 100);

} // namespace nlasso
