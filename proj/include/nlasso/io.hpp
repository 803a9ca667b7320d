#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlasso/experiments.hpp"
#include "nlasso/flow.hpp"
#include "nlasso/graph.hpp"
#include "nlasso/partition.hpp"
#include "nlasso/signal_model.hpp"
#include "nlasso/solver.hpp"

namespace nlasso {

// JSON file formats. Every saved file carries a meta block with the
// library version; loaders raise ParseFailure naming the path and field.

/// {"nodes": N, "edges": [[i, j, w], ...]}
EmpiricalGraph load_graph(const std::string& path);
void save_graph(const EmpiricalGraph& g, const std::string& path);

/// {"clusters": [[ids...], ...]}
Partition load_partition(const std::string& path, const EmpiricalGraph& g);
void save_partition(const Partition& p, const std::string& path);

/// {"training_set": [ids...], "labels": {"id": y, ...}, "sigma": s, "seed": n}
struct LabelFile {
  LabelSet labels;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};
LabelFile load_labels(const std::string& path);
void save_labels(const LabelSet& labels, double sigma, std::uint64_t seed,
                 const std::string& path);

/// Any JSON object with a "training_set" array (label files qualify).
std::vector<int> load_training_set(const std::string& path);
void save_training_set(const std::vector<int>& train, const std::string& path);

/// {"x": [..], "iters": k, "objective": v, "trace": [[k, obj], ...]}
void save_solver_result(const SolverResult& result, const SolverConfig& cfg,
                        const std::string& path);

/// {"x": [..]}
void save_signal(const GraphSignal& x, const std::string& path);
GraphSignal load_signal(const std::string& path);

/// {"K":.., "L":.., "status":"certified|refuted|sampled-only",
///  "patterns_checked":.., "witness": {..}|null, "kappa":..|null}
void save_certificate(const ResolvingCertificate& cert, const std::string& path,
                      const NccReport* ncc = nullptr);

ExperimentConfig load_experiment_config(const std::string& path);

/// Graph/partition statistics the report stage needs alongside the
/// results CSV.
struct ExperimentStats {
  int cluster_count = 0;
  int min_cluster_size = 0;
  double partition_gap = 0.0;
  double d_sup_norm = 0.0;
  double truth_tv = 0.0;
  std::vector<CellCertification> certifications;
};

void save_experiment_stats(const ExperimentResult& result, const std::string& path);
ExperimentStats load_experiment_stats(const std::string& path);

} // namespace nlasso
