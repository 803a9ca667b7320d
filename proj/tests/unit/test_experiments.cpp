#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <tuple>

#include "nlasso/csv.hpp"
#include "nlasso/experiments.hpp"
#include "nlasso/rng.hpp"
#include "nlasso/signal_model.hpp"
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

GraphSignal random_signal(Rng& rng, int n) {
  GraphSignal x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.next_gaussian();
  return x;
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.sbm.sizes = {6, 6};
  cfg.sbm.p_in = 0.9;
  cfg.sbm.p_out = 0.15;
  cfg.signal_values = {0.0, 5.0};
  cfg.sigmas = {0.0, 0.5};
  cfg.train_sizes = {4, 12};
  cfg.lambdas = {0.05};
  cfg.trials = 2;
  cfg.base_seed = 17;
  cfg.solver_max_iters = 8000;
  cfg.solver_rel_tol = 1e-7;
  cfg.cert_k_grid = {2.0, 16.0};
  cfg.cert_bisect_tol = 0.05;
  return cfg;
}

} // namespace

TEST_SUITE("experiments") {

TEST_CASE("tail bound evaluates the closed form and clips") {
  BoundInputs in;
  in.cluster_count = 2;
  in.min_cluster_size = 50;
  in.partition_gap = 3.0;
  in.d_sup_norm = 1.0;
  in.train_size = 10;
  const double K = 5.0, L = 11.0; // kappa = 1

  // eta = 10: the unclipped two-term value exceeds one
  const double raw10 = 4.0 * std::exp(-50.0 * 100.0 / 6300.0) +
                       20.0 * std::exp(-100.0 * 9.0 * 100.0 / 900.0);
  CHECK(raw10 > 1.0);
  CHECK(estimation_tail_bound(in, K, L, 1.0, 10.0) == doctest::Approx(std::min(1.0, raw10)));

  // eta = 40: strictly inside (0, 1), must match the formula exactly
  const double raw40 = 4.0 * std::exp(-50.0 * 1600.0 / 6300.0) +
                       20.0 * std::exp(-100.0 * 9.0 * 1600.0 / 900.0);
  CHECK(raw40 < 1.0);
  CHECK(estimation_tail_bound(in, K, L, 1.0, 40.0) == doctest::Approx(raw40).epsilon(1e-12));

  // limits
  CHECK(estimation_tail_bound(in, K, L, 1.0, 1e6) == 0.0);
  CHECK(estimation_tail_bound(in, K, L, 1e9, 10.0) == 1.0);
}

TEST_CASE("tail bound enforces its hypotheses by name") {
  BoundInputs in;
  in.cluster_count = 2;
  in.min_cluster_size = 10;
  in.partition_gap = 1.0;
  in.d_sup_norm = 1.0;
  in.train_size = 4;
  CHECK(code_of([&] { estimation_tail_bound(in, 2.0, 4.0, 1.0, 1.0); }) ==
        ErrorCode::HypothesisViolated);
  CHECK(code_of([&] { estimation_tail_bound(in, 1.0, 7.0, 1.0, 1.0); }) ==
        ErrorCode::HypothesisViolated);
  CHECK(code_of([&] { estimation_tail_bound(in, 6.0, 7.0, 1.0, 1.0); }) ==
        ErrorCode::HypothesisViolated);
  CHECK(code_of([&] { estimation_tail_bound(in, 2.0, 7.0, 0.0, 1.0); }) ==
        ErrorCode::HypothesisViolated);
  CHECK(code_of([&] { estimation_tail_bound(in, 2.0, 7.0, 1.0, 0.0); }) ==
        ErrorCode::HypothesisViolated);
}

TEST_CASE("bound inputs read off the graph and partition") {
  const EmpiricalGraph g = build_graph(5, {{0, 1, 1.0},
                                           {1, 2, 1.0},
                                           {0, 2, 1.0},
                                           {3, 4, 9.0},
                                           {2, 3, 1.0}});
  const Partition p(g, {{0, 1, 2}, {3, 4}});
  const BoundInputs in = bound_inputs(g, p, 3);
  CHECK(in.cluster_count == 2);
  CHECK(in.min_cluster_size == 2);
  CHECK(in.d_sup_norm == doctest::Approx(3.0));
  CHECK(in.train_size == 3);
  // min of gap(K3) = 3 and gap(single 9-weight edge) = 18
  CHECK(in.partition_gap == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("decomposition inequality trivial shapes") {
  Rng rng(5);
  const EmpiricalGraph g = ts::random_connected_graph(rng, 3, 15);
  const int n = g.node_count();

  const GraphSignal u = GraphSignal::Constant(n, 2.0);
  const GraphSignal v = random_signal(rng, n);
  const auto [lhs, rhs] = decomposition_check(g, u, v);
  // constant u kills the TV term and the projection is exact
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  const auto [zl, zr] = decomposition_check(g, random_signal(rng, n), GraphSignal::Zero(n));
  CHECK(zl == 0.0);
  CHECK(zr == 0.0);
}

TEST_CASE("decomposition inequality holds on random draws") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const EmpiricalGraph g = ts::random_connected_graph(rng, 2, 20);
    const auto [lhs, rhs] =
        decomposition_check(g, random_signal(rng, g.node_count()), random_signal(rng, g.node_count()));
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("per-cluster decomposition holds on random partitioned draws") {
  Rng rng(37);
  for (int rep = 0; rep < 40; ++rep) {
    const auto instance = ts::random_partitioned_instance(rng, 2 + rep % 3, 2, 6, 7);
    const Partition p(instance.graph, instance.clusters);
    std::vector<int> train;
    for (int i = 0; i < instance.graph.node_count(); ++i)
      if (rng.next_double() < 0.5) train.push_back(i);
    if (train.empty()) train.push_back(1);
    const auto [lhs, rhs] = cluster_decomposition_check(instance.graph, p, train,
                                             random_signal(rng, instance.graph.node_count()),
                                             random_signal(rng, instance.graph.node_count()));
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("per-cluster decomposition with cluster-constant u is boundary-only") {
  Rng rng(41);
  const auto instance = ts::random_partitioned_instance(rng, 2, 3, 5, 4);
  const Partition p(instance.graph, instance.clusters);
  ClusteredSignal cs;
  cs.partition = &p;
  cs.values = {1.0, -2.0};
  const GraphSignal u = expand_signal(cs, instance.graph.node_count());
  CHECK(tv_norm(instance.graph, u) ==
        doctest::Approx(tv_norm_subset(instance.graph, u, p.boundary_edges())));
  std::vector<int> train{0, instance.graph.node_count() - 1};
  const auto [lhs, rhs] =
      cluster_decomposition_check(instance.graph, p, train, u,
                       random_signal(rng, instance.graph.node_count()));
  CHECK(lhs <= rhs + 1e-9);
}

TEST_CASE("run_experiment is deterministic and sorted") {
  const ExperimentConfig cfg = tiny_config();
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  REQUIRE(a.records.size() == b.records.size());
  REQUIRE(a.records.size() == 2 * 2 * 1 * 2);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].tv_error == b.records[i].tv_error);
    CHECK(a.records[i].node_error == b.records[i].node_error);
    CHECK(a.records[i].iters == b.records[i].iters);
  }
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    const auto& prev = a.records[i - 1];
    const auto& cur = a.records[i];
    CHECK(std::tie(prev.sigma, prev.m_size, prev.lambda, prev.trial) <=
          std::tie(cur.sigma, cur.m_size, cur.lambda, cur.trial));
  }
  REQUIRE(a.certifications.size() == 2);
  CHECK(a.certifications[0].m_size == 4);
  CHECK(a.certifications[1].m_size == 12);
}

TEST_CASE("noiseless fully-labeled cells recover the signal closely") {
  ExperimentConfig cfg = tiny_config();
  cfg.sigmas = {0.0};
  cfg.train_sizes = {12};
  cfg.trials = 3;
  const ExperimentResult result = run_experiment(cfg);
  REQUIRE(result.truth_tv > 0.0);
  for (const TrialRecord& rec : result.records)
    CHECK(rec.tv_error <= 0.1 * result.truth_tv);
}

TEST_CASE("evaluate_bound counts tail frequencies") {
  std::vector<TrialRecord> records(4);
  records[0].tv_error = 0.1;
  records[1].tv_error = 0.5;
  records[2].tv_error = 0.9;
  records[3].tv_error = 1.5;

  BoundInputs in;
  in.cluster_count = 2;
  in.min_cluster_size = 30;
  in.partition_gap = 2.0;
  in.d_sup_norm = 1.0;
  in.train_size = 8;

  CellCertification cert;
  cert.K = 2.0;
  cert.L = 8.0;
  cert.kappa = 1.0;
  cert.hypothesis_ok = true;

  const std::vector<double> grid{0.05, 0.4, 1.0, 2.0};
  const BoundEvaluation eval = evaluate_bound(records, in, cert, 1.0, grid);
  REQUIRE(eval.rows.size() == 4);
  CHECK(eval.rows[0].empirical_freq == 1.0);
  CHECK(eval.rows[1].empirical_freq == doctest::Approx(0.75));
  CHECK(eval.rows[2].empirical_freq == doctest::Approx(0.25));
  CHECK(eval.rows[3].empirical_freq == 0.0);

  CellCertification bad = cert;
  bad.hypothesis_ok = false;
  const BoundEvaluation vacuous = evaluate_bound(records, in, bad, 1.0, grid);
  for (const BoundRow& row : vacuous.rows) CHECK(row.bound == 1.0);
}

TEST_CASE("emit_results writes parseable 17-digit CSV") {
  std::vector<TrialRecord> records(1);
  records[0].sigma = 0.1 + 0.2; // a value without a short decimal form
  records[0].m_size = 8;
  records[0].lambda = 1.0 / 3.0;
  records[0].trial = 0;
  records[0].tv_error = std::numbers::pi;
  records[0].node_error = std::sqrt(2.0);
  records[0].iters = 1234;
  records[0].K = 2.0;
  records[0].L = 8.0;
  records[0].kappa = 5.0 / 7.0;

  const std::string path = "emit_results_test.csv";
  emit_results(records, path);
  const std::string content = read_whole_file(path);
  CHECK(std::count(content.begin(), content.end(), '\n') == 2);

  const auto parsed = read_results_csv(path);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].sigma == records[0].sigma);
  CHECK(parsed[0].lambda == records[0].lambda);
  CHECK(parsed[0].tv_error == records[0].tv_error);
  CHECK(parsed[0].node_error == records[0].node_error);
  CHECK(parsed[0].kappa == records[0].kappa);
  std::remove(path.c_str());

  CHECK(code_of([] { emit_results({}, "unused.csv"); }) == ErrorCode::EmptySet);
}

TEST_CASE("emit_bound_table matches its header contract") {
  BoundEvaluation eval;
  eval.hypothesis_ok = true;
  eval.rows.push_back({0.5, 0.25, 0.75});
  const std::string path = "emit_bound_test.csv";
  emit_bound_table(eval, path);
  const std::string content = read_whole_file(path);
  CHECK(content.rfind("eta,empirical_freq,bound\n", 0) == 0);
  CHECK(std::count(content.begin(), content.end(), '\n') == 2);
  std::remove(path.c_str());
}

} // TEST_SUITE
