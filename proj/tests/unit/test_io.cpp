#include <doctest.h>

#include <cstdio>
#include <functional>
#include <json.hpp>

#include "nlasso/csv.hpp"
#include "nlasso/io.hpp"
#include "nlasso/version.hpp"

using namespace nlasso;

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

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_SUITE("io") {

TEST_CASE("graph JSON round trip") {
  const EmpiricalGraph g = build_graph(3, {{0, 1, 1.5}, {1, 2, 2.25}});
  TempFile file("io_graph.json");
  save_graph(g, file.path);
  const EmpiricalGraph loaded = load_graph(file.path);
  CHECK(loaded.node_count() == 3);
  REQUIRE(loaded.edge_count() == 2);
  CHECK(loaded.edge(0).w == 1.5);
  CHECK(loaded.edge(1).w == 2.25);

  const auto j = nlohmann::json::parse(read_whole_file(file.path));
  CHECK(j["meta"]["version"] == kVersion);
}

TEST_CASE("partition JSON round trip") {
  const EmpiricalGraph g = build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}, {1, 2, 1.0}});
  const Partition p(g, {{0, 1}, {2, 3}});
  TempFile file("io_partition.json");
  save_partition(p, file.path);
  const Partition loaded = load_partition(file.path, g);
  CHECK(loaded.cluster_count() == 2);
  CHECK(loaded.boundary_edges().size() == 1);
}

TEST_CASE("labels JSON round trip keeps exact values") {
  const LabelSet labels({1, 3}, {0.1 + 0.2, -7.25});
  TempFile file("io_labels.json");
  save_labels(labels, 0.5, 42, file.path);
  const LabelFile loaded = load_labels(file.path);
  CHECK(loaded.labels.training_set() == labels.training_set());
  CHECK(loaded.labels.values() == labels.values());
  CHECK(loaded.sigma == 0.5);
  CHECK(loaded.seed == 42);
  CHECK(load_training_set(file.path) == labels.training_set());
}

TEST_CASE("loaders name the missing fields") {
  TempFile file("io_bad.json");
  atomic_write_file(file.path, "{\"nodes\": 2}\n");
  CHECK(code_of([&] { load_graph(file.path); }) == ErrorCode::ParseFailure);
  atomic_write_file(file.path, "not json");
  CHECK(code_of([&] { load_graph(file.path); }) == ErrorCode::ParseFailure);
  atomic_write_file(file.path, "{\"training_set\": [0], \"labels\": {}, \"sigma\": 0, \"seed\": 0}");
  CHECK(code_of([&] { load_labels(file.path); }) == ErrorCode::ParseFailure);
}

TEST_CASE("missing directories surface as IoFailure") {
  CHECK(code_of([] { atomic_write_file("no_such_dir/x.json", "{}"); }) == ErrorCode::IoFailure);
  CHECK(code_of([] { read_whole_file("no_such_file.json"); }) == ErrorCode::IoFailure);
}

TEST_CASE("experiment config parses required and optional blocks") {
  TempFile file("io_config.json");
  atomic_write_file(file.path, R"({
    "sbm": {"sizes": [5, 5], "p_in": 0.8, "p_out": 0.1},
    "signal_values": [0.0, 2.0],
    "sigmas": [0.1],
    "train_sizes": [3],
    "lambdas": [0.5],
    "trials": 2,
    "base_seed": 9,
    "certification": {"k_grid": [4.0], "bisect_tol": 0.1}
  })");
  const ExperimentConfig cfg = load_experiment_config(file.path);
  CHECK(cfg.sbm.sizes == std::vector<int>{5, 5});
  CHECK(cfg.sbm.w_in == 1.0);
  CHECK(cfg.trials == 2);
  CHECK(cfg.cert_k_grid == std::vector<double>{4.0});
  CHECK(cfg.cert_bisect_tol == 0.1);

  atomic_write_file(file.path, R"({"sbm": {"sizes": [2]}})");
  CHECK(code_of([&] { load_experiment_config(file.path); }) == ErrorCode::ParseFailure);
}

TEST_CASE("results CSV rejects malformed rows") {
  TempFile file("io_results.csv");
  atomic_write_file(file.path, "wrong,header\n");
  CHECK(code_of([&] { read_results_csv(file.path); }) == ErrorCode::ParseFailure);
  atomic_write_file(file.path,
                    "sigma,M,lambda,trial,tv_error,node_error,iters,K,L,kappa\n1,2,3\n");
  CHECK(code_of([&] { read_results_csv(file.path); }) == ErrorCode::ParseFailure);
}

TEST_CASE("certificate JSON carries kappa only for large L") {
  ResolvingCertificate cert;
  cert.K = 2.0;
  cert.L = 8.0;
  cert.status = ResolvingCertificate::Status::certified;
  cert.patterns_checked = 12;
  TempFile file("io_cert.json");
  save_certificate(cert, file.path);
  auto j = nlohmann::json::parse(read_whole_file(file.path));
  CHECK(j["kappa"].get<double>() == doctest::Approx(1.0));
  CHECK(j["witness"].is_null());
  CHECK(j["status"] == "certified");

  cert.L = 1.0;
  cert.status = ResolvingCertificate::Status::refuted;
  cert.witness = RefutingWitness{0, {{3, -1}}};
  save_certificate(cert, file.path);
  j = nlohmann::json::parse(read_whole_file(file.path));
  CHECK(j["kappa"].is_null());
  CHECK(j["witness"]["cluster"] == 0);
  CHECK(j["status"] == "refuted");
}

} // TEST_SUITE
