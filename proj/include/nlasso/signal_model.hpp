#pragma once

#include <cstdint>
#include <vector>

#include "nlasso/graph.hpp"
#include "nlasso/partition.hpp"

namespace nlasso {

/// Piecewise-constant ground truth: one value per cluster.
struct ClusteredSignal {
  const Partition* partition = nullptr;
  std::vector<double> values; // aligned with partition->clusters()
};

/// Zero-mean Gaussian label noise with a fixed seed. The same seed always
/// reproduces the same draws; each node gets its own substream so the
/// draws do not depend on the order training nodes are visited.
struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Noisy observations on a nonempty training set. `values` is aligned
/// with the sorted `training_set`.
class LabelSet {
public:
  LabelSet(std::vector<int> training_set, std::vector<double> values);

  const std::vector<int>& training_set() const noexcept { return training_set_; }
  const std::vector<double>& values() const noexcept { return values_; }
  int size() const noexcept { return static_cast<int>(training_set_.size()); }

private:
  std::vector<int> training_set_;
  std::vector<double> values_;
};

/// Expands per-cluster values into a full graph signal.
GraphSignal expand_signal(const ClusteredSignal& cs, int node_count);

/// y_i = x_i + eps_i on M, eps i.i.d. N(0, sigma^2).
LabelSet sample_labels(const GraphSignal& truth, const std::vector<int>& training_set,
                       const NoiseModel& noise);

/// Uniform sample of `size` distinct nodes, returned sorted.
std::vector<int> sample_training_set(const EmpiricalGraph& g, int size, std::uint64_t seed);

/// Two-sided Gaussian tail bound min(1, 2 exp(-N^2 eta^2 / (2 sigma^2 sum w_i^2)))
/// for the weighted mean (1/N) sum y_i w_i of N(*, sigma^2) variables.
double gaussian_tail_bound(double eta, double sigma, std::span<const double> weights, int n);

} // namespace nlasso
