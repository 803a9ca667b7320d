// Command-line front end: generate graphs and signals, solve the TV
// regularized regression problem, certify training sets by network flows,
// and run Monte-Carlo experiments against the error bound.
//
// Exit codes: 0 success, 1 input error, 2 usage error, 3 solver hit the
// iteration cap, 4 certificate refuted.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "nlasso/csv.hpp"
#include "nlasso/experiments.hpp"
#include "nlasso/flow.hpp"
#include "nlasso/io.hpp"
#include "nlasso/rng.hpp"
#include "nlasso/sbm.hpp"
#include "nlasso/signal_model.hpp"
#include "nlasso/solver.hpp"
#include "nlasso/version.hpp"

namespace {

using namespace nlasso;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMaxIters = 3;
constexpr int kExitRefuted = 4;

int usage_error(const std::string& message) {
  std::cerr << "usage error: " << message << "\n";
  return kExitUsage;
}

struct GenArgs {
  std::string model = "sbm";
  int clusters = 0;
  std::vector<int> sizes;
  double p_in = 0.5;
  double p_out = 0.05;
  double w_in = 1.0;
  double w_out = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string partition_out;
  std::vector<double> signal;
  std::string signal_out;
  int train_size = 0;
  std::string train_out;
  double sigma = 0.0;
  std::string labels_out;
};

int cmd_gen(const GenArgs& args) {
  if (args.model != "sbm") return usage_error("unknown --model '" + args.model + "'");
  if (static_cast<int>(args.sizes.size()) != args.clusters)
    return usage_error("--sizes must list exactly --clusters entries");
  if (!args.signal.empty() && args.signal_out.empty())
    return usage_error("--signal requires --signal-out");
  if (!args.signal.empty() && static_cast<int>(args.signal.size()) != args.clusters)
    return usage_error("--signal must list one value per cluster");
  if (args.train_size > 0 && args.train_out.empty() && args.labels_out.empty())
    return usage_error("--train-size requires --train-out or --labels-out");
  if (!args.labels_out.empty() && (args.train_size <= 0 || args.signal.empty()))
    return usage_error("--labels-out requires --train-size and --signal");

  SbmConfig cfg;
  cfg.sizes = args.sizes;
  cfg.p_in = args.p_in;
  cfg.p_out = args.p_out;
  cfg.w_in = args.w_in;
  cfg.w_out = args.w_out;
  const SbmSample sample = generate_sbm(cfg, derive_seed(args.seed, 1));

  save_graph(sample.graph, args.out);
  if (!args.partition_out.empty()) save_partition(sample.partition, args.partition_out);

  if (!args.signal.empty()) {
    ClusteredSignal cs;
    cs.partition = &sample.partition;
    cs.values = args.signal;
    const GraphSignal truth = expand_signal(cs, sample.graph.node_count());
    save_signal(truth, args.signal_out);

    if (args.train_size > 0) {
      const auto train = sample_training_set(sample.graph, args.train_size,
                                             derive_seed(args.seed, 2));
      if (!args.train_out.empty()) save_training_set(train, args.train_out);
      if (!args.labels_out.empty()) {
        const NoiseModel noise{args.sigma, derive_seed(args.seed, 3)};
        save_labels(sample_labels(truth, train, noise), args.sigma, noise.seed, args.labels_out);
      }
    }
  } else if (args.train_size > 0 && !args.train_out.empty()) {
    save_training_set(sample_training_set(sample.graph, args.train_size,
                                          derive_seed(args.seed, 2)),
                      args.train_out);
  }
  return kExitOk;
}

struct SolveArgs {
  std::string graph;
  std::string labels;
  double lambda = 0.0;
  int max_iters = 20000;
  double tol = 1e-7;
  int snapshot_every = 0;
  std::string out;
};

int cmd_solve(const SolveArgs& args) {
  if (!(args.lambda > 0.0)) return usage_error("--lambda must be positive");
  if (!(args.tol > 0.0)) return usage_error("--tol must be positive");
  if (args.max_iters < 1) return usage_error("--max-iters must be positive");

  const EmpiricalGraph g = load_graph(args.graph);
  const LabelFile labels = load_labels(args.labels);
  SolverConfig cfg;
  cfg.lambda = args.lambda;
  cfg.max_iters = args.max_iters;
  cfg.rel_tol = args.tol;
  cfg.snapshot_every = args.snapshot_every;
  const SolverResult result = solve(g, labels.labels, cfg);
  save_solver_result(result, cfg, args.out);
  return result.converged ? kExitOk : kExitMaxIters;
}

struct CertifyArgs {
  std::string graph;
  std::string partition;
  std::string train;
  double K = 0.0;
  double L = 0.0;
  bool max_l = false;
  double tol = 1e-4;
  long long ncc_samples = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_certify(const CertifyArgs& args) {
  if (!(args.K > 0.0)) return usage_error("--K must be positive");
  if (!args.max_l && !(args.L > 0.0)) return usage_error("give --L or --max-L");
  if (args.max_l && !(args.tol > 0.0)) return usage_error("--tol must be positive");

  const EmpiricalGraph g = load_graph(args.graph);
  const Partition p = load_partition(args.partition, g);
  const std::vector<int> train = load_training_set(args.train);

  double level = args.L;
  if (args.max_l) {
    level = max_certifiable_L(g, p, train, args.K, args.tol);
    if (std::isinf(level)) {
      std::cerr << "error: partition has no boundary, any L is resolvable\n";
      return kExitInput;
    }
  }
  const ResolvingCertificate cert = check_resolving(g, p, train, args.K, level);

  if (args.ncc_samples > 0) {
    const NccReport ncc = ncc_sampled_check(g, p, train, args.K, level, args.ncc_samples,
                                            derive_seed(args.seed, 7));
    save_certificate(cert, args.out, &ncc);
  } else {
    save_certificate(cert, args.out);
  }
  return cert.status == ResolvingCertificate::Status::refuted ? kExitRefuted : kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
};

int cmd_experiment(const ExperimentArgs& args) {
  const ExperimentConfig cfg = load_experiment_config(args.config);
  const ExperimentResult result = run_experiment(cfg);
  emit_results(result.records, args.out);
  save_experiment_stats(result, args.out + ".stats.json");
  return kExitOk;
}

struct ReportArgs {
  std::string results;
  std::string eta_grid;
  std::string out;
  std::string stats;
  double sigma = std::nan("");
  int m_size = -1;
  double lambda = std::nan("");
};

std::vector<double> parse_eta_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "--eta-grid must be a:b:step");
  const double a = std::stod(spec.substr(0, first));
  const double b = std::stod(spec.substr(first + 1, second - first - 1));
  const double step = std::stod(spec.substr(second + 1));
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "--eta-grid step must be positive");
  if (b < a) throw Error(ErrorCode::InvalidArgument, "--eta-grid needs a <= b");
  std::vector<double> grid;
  for (double eta = a; eta <= b + 1e-12 * step; eta += step) grid.push_back(eta);
  return grid;
}

int cmd_report(const ReportArgs& args) {
  std::vector<double> grid;
  try {
    grid = parse_eta_grid(args.eta_grid);
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }

  const std::vector<TrialRecord> records = read_results_csv(args.results);
  if (records.empty()) {
    std::cerr << "error: " << args.results << " holds no records\n";
    return kExitInput;
  }
  const std::string stats_path =
      args.stats.empty() ? args.results + ".stats.json" : args.stats;
  const ExperimentStats stats = load_experiment_stats(stats_path);

  // pick one cell; selectors narrow when the results hold several
  std::map<std::tuple<double, int, double>, std::vector<TrialRecord>> cells;
  for (const TrialRecord& r : records) {
    if (!std::isnan(args.sigma) && r.sigma != args.sigma) continue;
    if (args.m_size >= 0 && r.m_size != args.m_size) continue;
    if (!std::isnan(args.lambda) && r.lambda != args.lambda) continue;
    cells[{r.sigma, r.m_size, r.lambda}].push_back(r);
  }
  if (cells.empty()) {
    std::cerr << "error: no records match the --sigma/--m/--lambda selection\n";
    return kExitInput;
  }
  if (cells.size() > 1) {
    std::cerr << "error: " << cells.size()
              << " cells match; narrow with --sigma, --m and --lambda\n";
    return kExitInput;
  }

  const auto& [key, cell_records] = *cells.begin();
  const auto [sigma, m_size, lambda] = key;
  const CellCertification* cert = nullptr;
  for (const CellCertification& c : stats.certifications)
    if (c.m_size == m_size) cert = &c;
  if (cert == nullptr) {
    std::cerr << "error: " << stats_path << " lacks a certification for M=" << m_size << "\n";
    return kExitInput;
  }

  BoundInputs in;
  in.cluster_count = stats.cluster_count;
  in.min_cluster_size = stats.min_cluster_size;
  in.partition_gap = stats.partition_gap;
  in.d_sup_norm = stats.d_sup_norm;
  in.train_size = m_size;
  emit_bound_table(evaluate_bound(cell_records, in, *cert, sigma, grid), args.out);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"network Lasso semi-supervised regression toolkit"};
  app.set_version_flag("--version", nlasso::kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a clustered graph and signals");
  gen_cmd->add_option("--model", gen.model, "graph model (sbm)");
  gen_cmd->add_option("--clusters", gen.clusters, "number of clusters")->required();
  gen_cmd->add_option("--sizes", gen.sizes, "cluster sizes")->required()->delimiter(',');
  gen_cmd->add_option("--pin", gen.p_in, "within-cluster edge probability")->required();
  gen_cmd->add_option("--pout", gen.p_out, "between-cluster edge probability")->required();
  gen_cmd->add_option("--win", gen.w_in, "within-cluster edge weight");
  gen_cmd->add_option("--wout", gen.w_out, "between-cluster edge weight");
  gen_cmd->add_option("--seed", gen.seed, "random seed")->required();
  gen_cmd->add_option("--out", gen.out, "graph JSON output")->required();
  gen_cmd->add_option("--partition", gen.partition_out, "partition JSON output");
  gen_cmd->add_option("--signal", gen.signal, "per-cluster signal values")->delimiter(',');
  gen_cmd->add_option("--signal-out", gen.signal_out, "ground-truth signal JSON output");
  gen_cmd->add_option("--train-size", gen.train_size, "training set size");
  gen_cmd->add_option("--train-out", gen.train_out, "training set JSON output");
  gen_cmd->add_option("--sigma", gen.sigma, "label noise standard deviation");
  gen_cmd->add_option("--labels-out", gen.labels_out, "noisy labels JSON output");

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run the primal-dual solver");
  solve_cmd->add_option("--graph", solve_args.graph, "graph JSON")->required();
  solve_cmd->add_option("--labels", solve_args.labels, "labels JSON")->required();
  solve_cmd->add_option("--lambda", solve_args.lambda, "TV regularization strength")->required();
  solve_cmd->add_option("--max-iters", solve_args.max_iters, "iteration cap");
  solve_cmd->add_option("--tol", solve_args.tol, "relative stopping tolerance (default 1e-7)");
  solve_cmd->add_option("--snapshot-every", solve_args.snapshot_every,
                        "objective logging stride (0 = final only)");
  solve_cmd->add_option("--out", solve_args.out, "result JSON output")->required();

  CertifyArgs certify;
  CLI::App* certify_cmd = app.add_subcommand("certify", "certify a training set by network flows");
  certify_cmd->add_option("--graph", certify.graph, "graph JSON")->required();
  certify_cmd->add_option("--partition", certify.partition, "partition JSON")->required();
  certify_cmd->add_option("--train", certify.train, "training set JSON")->required();
  certify_cmd->add_option("--K", certify.K, "demand constant")->required();
  certify_cmd->add_option("--L", certify.L, "boundary flow constant");
  certify_cmd->add_flag("--max-L", certify.max_l, "bisect for the largest resolvable L");
  certify_cmd->add_option("--tol", certify.tol, "bisection tolerance for --max-L");
  certify_cmd->add_option("--ncc-samples", certify.ncc_samples,
                          "also run the sampled compatibility check");
  certify_cmd->add_option("--seed", certify.seed, "seed for the sampled check");
  certify_cmd->add_option("--out", certify.out, "certificate JSON output")->required();

  ExperimentArgs experiment;
  CLI::App* experiment_cmd = app.add_subcommand("experiment", "run a Monte-Carlo experiment");
  experiment_cmd->add_option("--config", experiment.config, "experiment config JSON")->required();
  experiment_cmd->add_option("--out", experiment.out, "results CSV output")->required();

  ReportArgs report;
  CLI::App* report_cmd = app.add_subcommand("report", "tabulate tail frequencies vs the bound");
  report_cmd->add_option("--results", report.results, "results CSV")->required();
  report_cmd->add_option("--eta-grid", report.eta_grid, "grid a:b:step")->required();
  report_cmd->add_option("--out", report.out, "bound CSV output")->required();
  report_cmd->add_option("--stats", report.stats, "stats JSON (default <results>.stats.json)");
  report_cmd->add_option("--sigma", report.sigma, "cell selector");
  report_cmd->add_option("--m", report.m_size, "cell selector");
  report_cmd->add_option("--lambda", report.lambda, "cell selector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (certify_cmd->parsed()) return cmd_certify(certify);
    if (experiment_cmd->parsed()) return cmd_experiment(experiment);
    if (report_cmd->parsed()) return cmd_report(report);
  } catch (const nlasso::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
