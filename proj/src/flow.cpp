#include "nlasso/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maxflow.hpp"
#include "nlasso/rng.hpp"

namespace nlasso {

namespace {

/// Everything one cluster's feasibility problems share across patterns.
struct ClusterContext {
  int size = 0;                      // nodes in the cluster
  std::vector<int> intra_u, intra_v; // local endpoints
  std::vector<double> intra_cap;     // sqrt(w)
  struct Incidence {
    int edge = -1;       // parent edge index
    int local_node = -1; // cluster endpoint, local index
    double sqrt_w = 0.0;
    int out_sign = 0;    // +1 if the cluster endpoint is the canonical head
  };
  std::vector<Incidence> boundary; // ascending by parent edge index
  std::vector<int> train_local;    // M ∩ C, local indices
};

ClusterContext build_cluster_context(const EmpiricalGraph& g, const Partition& p,
                                     const std::vector<int>& train, int cluster) {
  const auto& nodes = p.cluster(cluster);
  ClusterContext ctx;
  ctx.size = static_cast<int>(nodes.size());

  std::vector<int> local_of(static_cast<std::size_t>(g.node_count()), -1);
  for (int local = 0; local < ctx.size; ++local)
    local_of[static_cast<std::size_t>(nodes[static_cast<std::size_t>(local)])] = local;

  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    const int lu = local_of[static_cast<std::size_t>(edge.u)];
    const int lv = local_of[static_cast<std::size_t>(edge.v)];
    if (lu >= 0 && lv >= 0) {
      ctx.intra_u.push_back(lu);
      ctx.intra_v.push_back(lv);
      ctx.intra_cap.push_back(std::sqrt(edge.w));
    } else if (lu >= 0 || lv >= 0) {
      ClusterContext::Incidence inc;
      inc.edge = e;
      const int inside = (lu >= 0) ? edge.u : edge.v;
      inc.local_node = (lu >= 0) ? lu : lv;
      inc.sqrt_w = std::sqrt(edge.w);
      // pattern sign +1 means flow from canonical head to canonical tail
      inc.out_sign = (inside == std::min(edge.u, edge.v)) ? +1 : -1;
      ctx.boundary.push_back(inc);
    }
  }
  for (int node : train) {
    const int local = local_of[static_cast<std::size_t>(node)];
    if (local >= 0) ctx.train_local.push_back(local);
  }
  return ctx;
}

/// Max-flow feasibility of one (cluster, pattern) instance. Boundary
/// flows are fixed by the pattern; free training-node supplies of at most
/// K/M and intra-cluster capacities sqrt(w) must route them.
bool pattern_feasible(const ClusterContext& ctx, std::span<const int> signs, double K, double L,
                      int train_size) {
  // net inflow each cluster node must collect to feed its boundary outflow
  std::vector<double> need(static_cast<std::size_t>(ctx.size), 0.0);
  for (std::size_t b = 0; b < ctx.boundary.size(); ++b) {
    const auto& inc = ctx.boundary[b];
    need[static_cast<std::size_t>(inc.local_node)] +=
        static_cast<double>(signs[b] * inc.out_sign) * L * inc.sqrt_w;
  }

  double total_need = 0.0;
  for (double d : need) total_need += d;

  // nodes: cluster, then the supply pool, then source and sink
  const int pool = ctx.size;
  const int source = ctx.size + 1;
  const int sink = ctx.size + 2;
  detail::MaxFlow flow(ctx.size + 3);

  for (std::size_t e = 0; e < ctx.intra_cap.size(); ++e) {
    flow.add_edge(ctx.intra_u[e], ctx.intra_v[e], ctx.intra_cap[e]);
    flow.add_edge(ctx.intra_v[e], ctx.intra_u[e], ctx.intra_cap[e]);
  }
  const double cap_per_node = K / static_cast<double>(train_size);
  for (int local : ctx.train_local) {
    flow.add_edge(local, pool, cap_per_node);
    flow.add_edge(pool, local, cap_per_node);
  }

  double required = 0.0;
  for (int i = 0; i < ctx.size; ++i) {
    if (need[static_cast<std::size_t>(i)] > 0.0) {
      flow.add_edge(source, i, need[static_cast<std::size_t>(i)]);
      required += need[static_cast<std::size_t>(i)];
    } else if (need[static_cast<std::size_t>(i)] < 0.0) {
      flow.add_edge(i, sink, -need[static_cast<std::size_t>(i)]);
    }
  }
  // the pool absorbs the imbalance the training nodes must supply
  if (total_need > 0.0) {
    flow.add_edge(pool, sink, total_need);
  } else if (total_need < 0.0) {
    flow.add_edge(source, pool, -total_need);
    required += -total_need;
  }

  if (required == 0.0) return true;
  const double value = flow.run(source, sink);
  return value >= required * (1.0 - 1e-9);
}

void validate_inputs(const EmpiricalGraph& g, const std::vector<int>& train, double K, double L) {
  if (!(K > 0.0) || !(L > 0.0))
    throw Error(ErrorCode::InvalidArgument, "constants K and L must be positive");
  if (train.empty()) throw Error(ErrorCode::EmptyTrainingSet, "training set is empty");
  std::vector<char> seen(static_cast<std::size_t>(g.node_count()), 0);
  for (int node : train) {
    if (node < 0 || node >= g.node_count())
      throw Error(ErrorCode::InvalidNodeId, "training node " + std::to_string(node));
    // a duplicate would double that node's K/M demand cap
    if (seen[static_cast<std::size_t>(node)]++)
      throw Error(ErrorCode::InvalidArgument,
                  "training node " + std::to_string(node) + " listed twice");
  }
}

} // namespace

const char* to_string(ResolvingCertificate::Status s) noexcept {
  switch (s) {
    case ResolvingCertificate::Status::certified: return "certified";
    case ResolvingCertificate::Status::refuted: return "refuted";
    case ResolvingCertificate::Status::sampled_only: return "sampled-only";
  }
  return "unknown";
}

std::vector<int> incident_boundary_edges(const EmpiricalGraph& g, const Partition& p,
                                         int cluster) {
  std::vector<int> edges;
  for (int e : p.boundary_edges()) {
    const Edge& edge = g.edge(e);
    if (p.cluster_of(edge.u) == cluster || p.cluster_of(edge.v) == cluster) edges.push_back(e);
  }
  return edges;
}

bool resolving_pattern_feasible(const EmpiricalGraph& g, const Partition& p,
                                const std::vector<int>& train, double K, double L, int cluster,
                                std::span<const int> signs) {
  validate_inputs(g, train, K, L);
  const ClusterContext ctx = build_cluster_context(g, p, train, cluster);
  if (signs.size() != ctx.boundary.size())
    throw Error(ErrorCode::InvalidArgument, "sign pattern does not match incident boundary");
  return pattern_feasible(ctx, signs, K, L, static_cast<int>(train.size()));
}

bool resolving_global_pattern_feasible(const EmpiricalGraph& g, const Partition& p,
                                       const std::vector<int>& train, double K, double L,
                                       std::span<const int> signs) {
  validate_inputs(g, train, K, L);
  if (signs.size() != p.boundary_edges().size())
    throw Error(ErrorCode::InvalidArgument, "sign pattern does not cover the boundary");
  for (int cluster = 0; cluster < p.cluster_count(); ++cluster) {
    const ClusterContext ctx = build_cluster_context(g, p, train, cluster);
    std::vector<int> local(ctx.boundary.size());
    for (std::size_t b = 0; b < ctx.boundary.size(); ++b) {
      const auto it = std::lower_bound(p.boundary_edges().begin(), p.boundary_edges().end(),
                                       ctx.boundary[b].edge);
      local[b] = signs[static_cast<std::size_t>(it - p.boundary_edges().begin())];
    }
    if (!pattern_feasible(ctx, local, K, L, static_cast<int>(train.size()))) return false;
  }
  return true;
}

ResolvingCertificate check_resolving(const EmpiricalGraph& g, const Partition& p,
                                     const std::vector<int>& train, double K, double L,
                                     const CertifyOptions& opts) {
  validate_inputs(g, train, K, L);

  ResolvingCertificate cert;
  cert.K = K;
  cert.L = L;
  const int train_size = static_cast<int>(train.size());
  bool sampled = false;

  for (int cluster = 0; cluster < p.cluster_count(); ++cluster) {
    const ClusterContext ctx = build_cluster_context(g, p, train, cluster);
    const int incident = static_cast<int>(ctx.boundary.size());

    auto record_refutation = [&](std::span<const int> signs) {
      RefutingWitness witness;
      witness.cluster = cluster;
      for (std::size_t b = 0; b < ctx.boundary.size(); ++b)
        witness.edge_signs.emplace_back(ctx.boundary[b].edge, signs[b]);
      cert.witness = std::move(witness);
      cert.status = ResolvingCertificate::Status::refuted;
    };

    if (incident == 0) {
      ++cert.patterns_checked; // the empty pattern is trivially routable
      continue;
    }

    if (incident <= opts.exhaustive_limit) {
      std::vector<int> signs(static_cast<std::size_t>(incident), 1);
      const std::uint64_t count = 1ULL << incident;
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (int b = 0; b < incident; ++b)
          signs[static_cast<std::size_t>(b)] = (mask >> b) & 1 ? -1 : 1;
        ++cert.patterns_checked;
        if (!pattern_feasible(ctx, signs, K, L, train_size)) {
          record_refutation(signs);
          return cert;
        }
      }
    } else {
      sampled = true;
      Rng rng(derive_seed(opts.pattern_seed, static_cast<std::uint64_t>(cluster)));
      std::vector<int> signs(static_cast<std::size_t>(incident), 1);
      for (long long s = 0; s < opts.sample_budget; ++s) {
        for (int b = 0; b < incident; ++b)
          signs[static_cast<std::size_t>(b)] = (rng.next_u64() & 1) ? -1 : 1;
        ++cert.patterns_checked;
        if (!pattern_feasible(ctx, signs, K, L, train_size)) {
          record_refutation(signs);
          return cert;
        }
      }
    }
  }

  cert.status = sampled ? ResolvingCertificate::Status::sampled_only
                        : ResolvingCertificate::Status::certified;
  return cert;
}

double max_certifiable_L(const EmpiricalGraph& g, const Partition& p,
                         const std::vector<int>& train, double K, double tol,
                         const CertifyOptions& opts) {
  validate_inputs(g, train, K, 1.0);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (p.boundary_edges().empty()) return std::numeric_limits<double>::infinity();

  const auto feasible = [&](double L) {
    return check_resolving(g, p, train, K, L, opts).status !=
           ResolvingCertificate::Status::refuted;
  };

  double lo = 0.0, hi = 0.0;
  if (feasible(1.0)) {
    lo = 1.0;
    hi = 2.0;
    while (feasible(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 0x1p60)
        throw Error(ErrorCode::InvalidArgument, "feasible L appears unbounded despite boundary");
    }
  } else {
    hi = 1.0;
    double probe = 0.5;
    while (!feasible(probe)) {
      hi = probe;
      probe *= 0.5;
      if (probe < 1e-15) throw Error(ErrorCode::NoFeasibleL, "no positive L is feasible");
    }
    lo = probe;
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

NccReport ncc_sampled_check(const EmpiricalGraph& g, const Partition& p,
                            const std::vector<int>& train, double K, double L,
                            long long n_samples, std::uint64_t seed) {
  validate_inputs(g, train, K, L);
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");

  NccReport report;
  report.K = K;
  report.L = L;
  report.samples_tested = n_samples;
  report.worst_margin = std::numeric_limits<double>::infinity();

  const int n = g.node_count();
  Rng rng(seed);
  GraphSignal z(n);

  for (long long s = 0; s < n_samples; ++s) {
    // alternate pure Gaussian signals with piecewise-constant candidates
    // (cluster indicators and noisy perturbations of them)
    const int kind = static_cast<int>(s % 3);
    if (kind == 0) {
      for (int i = 0; i < n; ++i) z[i] = rng.next_gaussian();
    } else {
      const int marked = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.cluster_count())));
      for (int i = 0; i < n; ++i) z[i] = (p.cluster_of(i) == marked) ? 1.0 : 0.0;
      if (kind == 2) {
        const double noise_scale = 0.1 + 0.9 * rng.next_double();
        for (int i = 0; i < n; ++i) z[i] += noise_scale * rng.next_gaussian();
      }
    }

    const double lhs = L * tv_norm_subset(g, z, p.boundary_edges());
    const double rhs = K * node_norm(z, train) + tv_norm_subset(g, z, p.interior_edges());
    const double margin = rhs - lhs;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      if (margin < -1e-12 * (1.0 + lhs)) {
        report.violated = true;
        report.witness = z;
      }
    }
  }
  return report;
}

double condition_number(double K, double L) {
  if (!(L > 3.0))
    throw Error(ErrorCode::LTooSmall, "condition number needs L > 3, got " + std::to_string(L));
  return (K + 3.0) / (L - 3.0);
}

} // namespace nlasso
