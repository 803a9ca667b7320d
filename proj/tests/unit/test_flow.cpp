#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "nlasso/flow.hpp"
#include "nlasso/rng.hpp"
#include "oracles.hpp"

using namespace nlasso;
namespace ts = nlasso::testsupport;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

/// single edge, two singleton clusters: the boundary flow L must be
/// sourced entirely from the per-node demand caps K/2
struct TwoNodeInstance {
  EmpiricalGraph graph = build_graph(2, {{0, 1, 1.0}});
  Partition partition{graph, {{0}, {1}}};
  std::vector<int> train{0, 1};
};

struct BarbellK5 {
  EmpiricalGraph graph = make_graph();
  Partition partition{graph, {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}};
  std::vector<int> train{2, 7};

  static EmpiricalGraph make_graph() {
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) edges.push_back({i, j, 1.0});
    for (int i = 5; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) edges.push_back({i, j, 1.0});
    edges.push_back({0, 5, 1.0});
    return build_graph(10, std::move(edges));
  }
};

bool all_patterns_agree_with_lp(const EmpiricalGraph& g, const Partition& p,
                                const std::vector<int>& train, double K, double L) {
  const std::size_t boundary = p.boundary_edges().size();
  REQUIRE(boundary <= 12);
  std::vector<int> signs(boundary, 1);
  for (std::uint64_t mask = 0; mask < (1ULL << boundary); ++mask) {
    for (std::size_t b = 0; b < boundary; ++b)
      signs[b] = (mask >> b) & 1 ? -1 : 1;
    const bool mf = resolving_global_pattern_feasible(g, p, train, K, L, signs);
    const bool lp = ts::lp_resolving_feasible(g, p, train, K, L, signs);
    if (mf != lp) return false;
  }
  return true;
}

} // namespace

TEST_SUITE("flow") {

TEST_CASE("two-node hand case certifies exactly at K = 2L") {
  TwoNodeInstance inst;
  const auto certified = check_resolving(inst.graph, inst.partition, inst.train, 2.0, 1.0);
  CHECK(certified.status == ResolvingCertificate::Status::certified);
  CHECK(certified.patterns_checked == 4); // two clusters, two patterns each

  const auto refuted = check_resolving(inst.graph, inst.partition, inst.train, 1.9, 1.0);
  CHECK(refuted.status == ResolvingCertificate::Status::refuted);
  REQUIRE(refuted.witness.has_value());
  CHECK(refuted.witness->edge_signs.size() == 1);
}

TEST_CASE("huge demand caps certify any small boundary flow") {
  TwoNodeInstance inst;
  const auto cert = check_resolving(inst.graph, inst.partition, inst.train, 1e6, 1.0);
  CHECK(cert.status == ResolvingCertificate::Status::certified);
}

TEST_CASE("max certifiable L matches the hand relation") {
  TwoNodeInstance inst;
  const double lstar = max_certifiable_L(inst.graph, inst.partition, inst.train, 2.0, 1e-6);
  CHECK(lstar == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("raising intra-cluster capacities never lowers max L") {
  BarbellK5 inst;
  const double base = max_certifiable_L(inst.graph, inst.partition, inst.train, 6.0, 1e-4);

  std::vector<Edge> boosted_edges;
  for (const Edge& e : inst.graph.edges()) {
    const bool bridge = (e.u == 0 && e.v == 5);
    boosted_edges.push_back({e.u, e.v, bridge ? e.w : 4.0 * e.w});
  }
  const EmpiricalGraph boosted = build_graph(10, std::move(boosted_edges));
  const Partition p(boosted, {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}});
  const double bigger = max_certifiable_L(boosted, p, inst.train, 6.0, 1e-4);
  CHECK(bigger >= base - 1e-4);
}

TEST_CASE("a cluster without training nodes admits no L") {
  const EmpiricalGraph g = build_graph(6, {{0, 1, 1.0},
                                           {1, 2, 1.0},
                                           {0, 2, 1.0},
                                           {3, 4, 1.0},
                                           {4, 5, 1.0},
                                           {3, 5, 1.0},
                                           {2, 3, 1.0}});
  const Partition p(g, {{0, 1, 2}, {3, 4, 5}});
  CHECK(code_of([&] { max_certifiable_L(g, p, {0, 1}, 4.0, 1e-6); }) == ErrorCode::NoFeasibleL);
}

TEST_CASE("single-cluster partitions have unbounded L") {
  TwoNodeInstance inst;
  const Partition whole(inst.graph, {{0, 1}});
  CHECK(std::isinf(max_certifiable_L(inst.graph, whole, inst.train, 1.0, 1e-6)));
}

TEST_CASE("condition number formula and guard") {
  CHECK(condition_number(1.0, 7.0) == doctest::Approx(1.0));
  CHECK(condition_number(5.0, 11.0) == doctest::Approx(1.0));
  CHECK(code_of([] { condition_number(1.0, 3.0); }) == ErrorCode::LTooSmall);
  CHECK(code_of([] { condition_number(1.0, 2.9); }) == ErrorCode::LTooSmall);
}

TEST_CASE("max-flow verdicts agree with the LP oracle on the barbell") {
  BarbellK5 inst;
  for (const auto [K, L] : {std::pair{4.0, 1.5}, {4.0, 3.0}, {10.0, 3.9}, {10.0, 4.5}}) {
    CHECK(all_patterns_agree_with_lp(inst.graph, inst.partition, inst.train, K, L));
  }
}

TEST_CASE("max-flow verdicts agree with the LP oracle on random instances") {
  Rng rng(2025);
  for (int rep = 0; rep < 8; ++rep) {
    const auto instance = ts::random_partitioned_instance(rng, 2 + static_cast<int>(rep % 2), 2, 7, 6);
    const Partition p(instance.graph, instance.clusters);
    std::vector<int> train;
    for (int i = 0; i < instance.graph.node_count(); ++i)
      if (rng.next_double() < 0.4) train.push_back(i);
    if (train.empty()) train.push_back(0);
    const double K = 0.5 + 8.0 * rng.next_double();
    const double L = 0.2 + 2.0 * rng.next_double();
    CHECK(all_patterns_agree_with_lp(instance.graph, p, train, K, L));
  }
}

TEST_CASE("feasibility is symmetric under pattern negation") {
  BarbellK5 inst;
  const auto incident = incident_boundary_edges(inst.graph, inst.partition, 0);
  REQUIRE(incident.size() == 1);
  for (const double L : {1.0, 2.5, 4.0}) {
    const std::vector<int> plus{1}, minus{-1};
    CHECK(resolving_pattern_feasible(inst.graph, inst.partition, inst.train, 4.0, L, 0, plus) ==
          resolving_pattern_feasible(inst.graph, inst.partition, inst.train, 4.0, L, 0, minus));
  }
}

TEST_CASE("certified verdicts are monotone in K, refuted ones in L") {
  Rng rng(99);
  for (int rep = 0; rep < 6; ++rep) {
    const auto instance = ts::random_partitioned_instance(rng, 2, 2, 6, 5);
    const Partition p(instance.graph, instance.clusters);
    std::vector<int> train;
    for (int i = 0; i < instance.graph.node_count(); i += 2) train.push_back(i);

    double lstar;
    try {
      lstar = max_certifiable_L(instance.graph, p, train, 3.0, 1e-3);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::NoFeasibleL);
      continue;
    }
    const auto at = [&](double K, double L) {
      return check_resolving(instance.graph, p, train, K, L).status;
    };
    CHECK(at(3.0, lstar * 0.9) == ResolvingCertificate::Status::certified);
    CHECK(at(6.0, lstar * 0.9) == ResolvingCertificate::Status::certified);
    CHECK(at(30.0, lstar * 0.9) == ResolvingCertificate::Status::certified);
    if (at(3.0, lstar * 1.2) == ResolvingCertificate::Status::refuted) {
      CHECK(at(3.0, lstar * 1.5) == ResolvingCertificate::Status::refuted);
      CHECK(at(3.0, lstar * 3.0) == ResolvingCertificate::Status::refuted);
    }
  }
}

TEST_CASE("pattern budget overflow downgrades to sampled-only") {
  BarbellK5 inst;
  CertifyOptions opts;
  opts.exhaustive_limit = 0; // force sampling regardless of boundary size
  opts.sample_budget = 50;
  const auto cert = check_resolving(inst.graph, inst.partition, inst.train, 10.0, 0.5, opts);
  CHECK(cert.status == ResolvingCertificate::Status::sampled_only);
  CHECK(cert.patterns_checked == 100); // two clusters, fifty samples each
}

TEST_CASE("constant signals can never violate the compatibility inequality") {
  BarbellK5 inst;
  const GraphSignal z = GraphSignal::Constant(10, -4.2);
  const double lhs = 7.0 * tv_norm_subset(inst.graph, z, inst.partition.boundary_edges());
  const double rhs = 0.5 * node_norm(z, inst.train) +
                     tv_norm_subset(inst.graph, z, inst.partition.interior_edges());
  CHECK(lhs == 0.0); // both TV terms vanish, only K ||z||_M remains
  CHECK(rhs == doctest::Approx(0.5 * 4.2));
}

TEST_CASE("ncc margins behave as the inequality dictates") {
  TwoNodeInstance inst;
  const NccReport tight = ncc_sampled_check(inst.graph, inst.partition, inst.train, 2.0, 1.0,
                                            3000, 7);
  CHECK_FALSE(tight.violated);

  // growing K grows the worst margin pointwise
  const NccReport wider = ncc_sampled_check(inst.graph, inst.partition, inst.train, 5.0, 1.0,
                                            3000, 7);
  CHECK(wider.worst_margin >= tight.worst_margin - 1e-12);
}

TEST_CASE("certified resolving sets pass sampled falsification") {
  BarbellK5 inst;
  const double lstar = max_certifiable_L(inst.graph, inst.partition, inst.train, 6.0, 1e-4);
  const double level = lstar * 0.95;
  REQUIRE(check_resolving(inst.graph, inst.partition, inst.train, 6.0, level).status ==
          ResolvingCertificate::Status::certified);
  const NccReport report =
      ncc_sampled_check(inst.graph, inst.partition, inst.train, 6.0, level, 10000, 11);
  CHECK_FALSE(report.violated);
  CHECK(report.worst_margin >= 0.0);
}

TEST_CASE("a refuting pattern also violates the sampled inequality eventually") {
  // with K just below the two-node threshold the indicator signal z = 1_{C}
  // witnesses the NCC failure: L*1 > K/sqrt(2)*1
  TwoNodeInstance inst;
  const NccReport report = ncc_sampled_check(inst.graph, inst.partition, inst.train, 1.2, 1.0,
                                             5000, 13);
  CHECK(report.violated);
  CHECK(report.worst_margin < 0.0);
  REQUIRE(report.witness.has_value());
}

} // TEST_SUITE
