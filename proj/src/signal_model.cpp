#include "nlasso/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlasso/rng.hpp"

namespace nlasso {

LabelSet::LabelSet(std::vector<int> training_set, std::vector<double> values)
    : training_set_(std::move(training_set)), values_(std::move(values)) {
  if (training_set_.empty())
    throw Error(ErrorCode::EmptyTrainingSet, "training set is empty");
  if (training_set_.size() != values_.size())
    throw Error(ErrorCode::InvalidArgument, "labels must be defined exactly on the training set");
  for (std::size_t k = 1; k < training_set_.size(); ++k)
    if (training_set_[k] <= training_set_[k - 1])
      throw Error(ErrorCode::InvalidArgument, "training set must be sorted and duplicate free");
}

GraphSignal expand_signal(const ClusteredSignal& cs, int node_count) {
  if (cs.partition == nullptr)
    throw Error(ErrorCode::InvalidArgument, "clustered signal has no partition");
  const Partition& p = *cs.partition;
  if (static_cast<int>(cs.values.size()) != p.cluster_count())
    throw Error(ErrorCode::InvalidArgument, "one value per cluster required, got " +
                                                std::to_string(cs.values.size()));
  GraphSignal x = GraphSignal::Zero(node_count);
  for (int l = 0; l < p.cluster_count(); ++l)
    for (int node : p.cluster(l)) x[node] = cs.values[static_cast<std::size_t>(l)];
  return x;
}

LabelSet sample_labels(const GraphSignal& truth, const std::vector<int>& training_set,
                       const NoiseModel& noise) {
  if (training_set.empty())
    throw Error(ErrorCode::EmptyTrainingSet, "training set is empty");
  if (noise.sigma < 0.0)
    throw Error(ErrorCode::InvalidArgument, "sigma must be nonnegative");

  std::vector<int> sorted = training_set;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() != training_set.size())
    throw Error(ErrorCode::InvalidArgument, "training set contains duplicates");

  const Rng root(noise.seed);
  std::vector<double> values;
  values.reserve(sorted.size());
  for (int node : sorted) {
    if (node < 0 || node >= truth.size())
      throw Error(ErrorCode::InvalidNodeId, "training node " + std::to_string(node));
    double eps = 0.0;
    if (noise.sigma > 0.0) {
      Rng stream = root.substream(static_cast<std::uint64_t>(node));
      eps = noise.sigma * stream.next_gaussian();
    }
    values.push_back(truth[node] + eps);
  }
  return LabelSet(std::move(sorted), std::move(values));
}

std::vector<int> sample_training_set(const EmpiricalGraph& g, int size, std::uint64_t seed) {
  const int n = g.node_count();
  if (size < 1 || size > n)
    throw Error(ErrorCode::SizeOutOfRange,
                "training set size " + std::to_string(size) + " not in 1.." + std::to_string(n));
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;

  Rng rng(seed);
  for (int k = 0; k < size; ++k) {
    const auto j = k + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - k)));
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(size));
  std::sort(pool.begin(), pool.end());
  return pool;
}

double gaussian_tail_bound(double eta, double sigma, std::span<const double> weights, int n) {
  if (!(eta > 0.0)) throw Error(ErrorCode::NonPositiveEta, "eta must be positive");
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  if (weights.empty()) throw Error(ErrorCode::InvalidArgument, "weights must be nonempty");
  double sum_sq = 0.0;
  for (double w : weights) sum_sq += w * w;
  const double nn = static_cast<double>(n);
  const double value = 2.0 * std::exp(-(nn * nn * eta * eta) / (2.0 * sigma * sigma * sum_sq));
  return std::min(1.0, value); // it is a probability bound
}

} // namespace nlasso
