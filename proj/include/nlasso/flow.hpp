#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nlasso/graph.hpp"
#include "nlasso/partition.hpp"

namespace nlasso {

/// Per-cluster (pattern) enumeration limits. Exhaustive enumeration runs
/// when a cluster touches at most `exhaustive_limit` boundary edges;
/// beyond that, `sample_budget` uniformly random patterns are checked and
/// the verdict is downgraded to sampled-only.
struct CertifyOptions {
  int exhaustive_limit = 16;
  long long sample_budget = 20000;
  std::uint64_t pattern_seed = 0xda3e39cb94b95bdbULL;
};

/// The sign pattern (restricted to one cluster) whose flow problem is
/// infeasible.
struct RefutingWitness {
  int cluster = -1;
  std::vector<std::pair<int, int>> edge_signs; // (edge index in g, +-1)
};

struct ResolvingCertificate {
  enum class Status { certified, refuted, sampled_only };

  double K = 0.0;
  double L = 0.0;
  Status status = Status::refuted;
  long long patterns_checked = 0;
  std::optional<RefutingWitness> witness;
};

const char* to_string(ResolvingCertificate::Status s) noexcept;

/// Boundary edges (indices into g.edges(), ascending) with exactly one
/// endpoint in the given cluster.
std::vector<int> incident_boundary_edges(const EmpiricalGraph& g, const Partition& p, int cluster);

/// Feasibility of one cluster's flow problem for one sign pattern.
/// `signs` is +-1 per incident boundary edge, aligned with
/// incident_boundary_edges(g, p, cluster); a sign of +1 sends flow from
/// the canonical head to the canonical tail of the edge.
bool resolving_pattern_feasible(const EmpiricalGraph& g, const Partition& p,
                                const std::vector<int>& train, double K, double L, int cluster,
                                std::span<const int> signs);

/// Feasibility of a full sign pattern over all boundary edges, aligned
/// with p.boundary_edges(); the conjunction of the per-cluster problems.
bool resolving_global_pattern_feasible(const EmpiricalGraph& g, const Partition& p,
                                       const std::vector<int>& train, double K, double L,
                                       std::span<const int> signs);

/// Decides whether the training set resolves the partition with constants
/// (K, L) by solving one max-flow feasibility problem per (cluster, sign
/// pattern). Certified requires exhaustive per-cluster enumeration.
ResolvingCertificate check_resolving(const EmpiricalGraph& g, const Partition& p,
                                     const std::vector<int>& train, double K, double L,
                                     const CertifyOptions& opts = {});

/// Largest L (within `tol`) whose check_resolving verdict is not refuted,
/// found by exponential search plus bisection; feasibility is monotone
/// decreasing in L. Returns +infinity when the partition has no boundary.
/// Throws NoFeasibleL when no positive L is feasible.
double max_certifiable_L(const EmpiricalGraph& g, const Partition& p,
                         const std::vector<int>& train, double K, double tol,
                         const CertifyOptions& opts = {});

/// Sampled falsification of the network compatibility condition
///   L ||z||_boundary <= K ||z||_M + ||z||_interior.
/// A pass is evidence, never a certificate; only check_resolving
/// certifies (resolving sets satisfy the condition with the same
/// constants).
struct NccReport {
  double K = 0.0;
  double L = 0.0;
  long long samples_tested = 0;
  bool violated = false;
  double worst_margin = 0.0; // min over samples of RHS - LHS
  std::optional<GraphSignal> witness;

  static constexpr const char* kNature =
      "sampled falsification only; a pass is evidence, not a certificate";
};

NccReport ncc_sampled_check(const EmpiricalGraph& g, const Partition& p,
                            const std::vector<int>& train, double K, double L,
                            long long n_samples, std::uint64_t seed);

/// kappa = (K + 3) / (L - 3); requires L > 3.
double condition_number(double K, double L);

} // namespace nlasso
