#include "nlasso/io.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "nlasso/csv.hpp"
#include "nlasso/version.hpp"

namespace nlasso {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  const std::string text = read_whole_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
}

const json& require(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end())
    throw Error(ErrorCode::ParseFailure, path + ": missing field '" + key + "'");
  return *it;
}

json meta_block() { return json{{"version", kVersion}}; }

void write_json(const json& j, const std::string& path) {
  atomic_write_file(path, j.dump(2) + "\n");
}

} // namespace

EmpiricalGraph load_graph(const std::string& path) {
  const json j = parse_file(path);
  try {
    const int nodes = require(j, "nodes", path).get<int>();
    std::vector<Edge> edges;
    for (const auto& entry : require(j, "edges", path)) {
      if (!entry.is_array() || entry.size() != 3)
        throw Error(ErrorCode::ParseFailure, path + ": each edge must be [i, j, w]");
      edges.push_back(Edge{entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>()});
    }
    return build_graph(nodes, std::move(edges));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
}

void save_graph(const EmpiricalGraph& g, const std::string& path) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.w});
  write_json(json{{"nodes", g.node_count()}, {"edges", edges}, {"meta", meta_block()}}, path);
}

Partition load_partition(const std::string& path, const EmpiricalGraph& g) {
  const json j = parse_file(path);
  try {
    std::vector<std::vector<int>> clusters;
    for (const auto& cluster : require(j, "clusters", path))
      clusters.push_back(cluster.get<std::vector<int>>());
    return Partition(g, std::move(clusters));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
}

void save_partition(const Partition& p, const std::string& path) {
  write_json(json{{"clusters", p.clusters()}, {"meta", meta_block()}}, path);
}

LabelFile load_labels(const std::string& path) {
  const json j = parse_file(path);
  try {
    std::vector<int> train = require(j, "training_set", path).get<std::vector<int>>();
    std::sort(train.begin(), train.end());
    const json& labels = require(j, "labels", path);
    std::vector<double> values;
    for (int node : train) {
      const std::string key = std::to_string(node);
      const auto it = labels.find(key);
      if (it == labels.end())
        throw Error(ErrorCode::ParseFailure, path + ": no label for training node " + key);
      values.push_back(it->get<double>());
    }
    if (labels.size() != train.size())
      throw Error(ErrorCode::ParseFailure, path + ": labels must cover exactly the training set");
    LabelFile file{LabelSet(std::move(train), std::move(values)),
                   require(j, "sigma", path).get<double>(),
                   require(j, "seed", path).get<std::uint64_t>()};
    return file;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
}

void save_labels(const LabelSet& labels, double sigma, std::uint64_t seed,
                 const std::string& path) {
  json label_obj = json::object();
  for (int k = 0; k < labels.size(); ++k)
    label_obj[std::to_string(labels.training_set()[static_cast<std::size_t>(k)])] =
        labels.values()[static_cast<std::size_t>(k)];
  write_json(json{{"training_set", labels.training_set()},
                  {"labels", label_obj},
                  {"sigma", sigma},
                  {"seed", seed},
                  {"meta", meta_block()}},
             path);
}

std::vector<int> load_training_set(const std::string& path) {
  const json j = parse_file(path);
  try {
    std::vector<int> train = require(j, "training_set", path).get<std::vector<int>>();
    std::sort(train.begin(), train.end());
    if (std::adjacent_find(train.begin(), train.end()) != train.end())
      throw Error(ErrorCode::ParseFailure, path + ": training_set contains duplicates");
    return train;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
}

void save_training_set(const std::vector<int>& train, const std::string& path) {
  write_json(json{{"training_set", train}, {"meta", meta_block()}}, path);
}

void save_solver_result(const SolverResult& result, const SolverConfig& cfg,
                        const std::string& path) {
  json trace = json::array();
  for (const auto& [k, obj] : result.objective_trace) trace.push_back({k, obj});
  json meta = meta_block();
  meta["lambda"] = cfg.lambda;
  meta["tol"] = cfg.rel_tol;
  meta["max_iters"] = cfg.max_iters;
  meta["converged"] = result.converged;
  write_json(json{{"x", std::vector<double>(result.x_out.begin(), result.x_out.end())},
                  {"iters", result.iters_run},
                  {"objective", result.final_objective},
                  {"trace", trace},
                  {"meta", meta}},
             path);
}

void save_signal(const GraphSignal& x, const std::string& path) {
  write_json(json{{"x", std::vector<double>(x.begin(), x.end())}, {"meta", meta_block()}}, path);
}

GraphSignal load_signal(const std::string& path) {
  const json j = parse_file(path);
  try {
    const auto values = require(j, "x", path).get<std::vector<double>>();
    return Eigen::Map<const GraphSignal>(values.data(), static_cast<Eigen::Index>(values.size()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
}

void save_certificate(const ResolvingCertificate& cert, const std::string& path,
                      const NccReport* ncc) {
  json j{{"K", cert.K},
         {"L", cert.L},
         {"status", to_string(cert.status)},
         {"patterns_checked", cert.patterns_checked},
         {"meta", meta_block()}};
  if (cert.L > 3.0)
    j["kappa"] = condition_number(cert.K, cert.L);
  else
    j["kappa"] = nullptr;
  if (cert.witness.has_value()) {
    json signs = json::array();
    for (const auto& [edge, sign] : cert.witness->edge_signs) signs.push_back({edge, sign});
    j["witness"] = json{{"cluster", cert.witness->cluster}, {"edge_signs", signs}};
  } else {
    j["witness"] = nullptr;
  }
  if (ncc != nullptr) {
    j["ncc"] = json{{"samples_tested", ncc->samples_tested},
                    {"violated", ncc->violated},
                    {"worst_margin", ncc->worst_margin},
                    {"note", NccReport::kNature}};
  }
  write_json(j, path);
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const json j = parse_file(path);
  ExperimentConfig cfg;
  try {
    const json& sbm = require(j, "sbm", path);
    cfg.sbm.sizes = require(sbm, "sizes", path).get<std::vector<int>>();
    cfg.sbm.p_in = require(sbm, "p_in", path).get<double>();
    cfg.sbm.p_out = require(sbm, "p_out", path).get<double>();
    cfg.sbm.w_in = sbm.value("w_in", 1.0);
    cfg.sbm.w_out = sbm.value("w_out", 1.0);
    cfg.signal_values = require(j, "signal_values", path).get<std::vector<double>>();
    cfg.sigmas = require(j, "sigmas", path).get<std::vector<double>>();
    cfg.train_sizes = require(j, "train_sizes", path).get<std::vector<int>>();
    cfg.lambdas = require(j, "lambdas", path).get<std::vector<double>>();
    cfg.trials = require(j, "trials", path).get<int>();
    cfg.base_seed = require(j, "base_seed", path).get<std::uint64_t>();
    if (j.contains("solver")) {
      const json& solver = j["solver"];
      cfg.solver_max_iters = solver.value("max_iters", cfg.solver_max_iters);
      cfg.solver_rel_tol = solver.value("rel_tol", cfg.solver_rel_tol);
    }
    if (j.contains("certification")) {
      const json& cert = j["certification"];
      if (cert.contains("k_grid")) cfg.cert_k_grid = cert["k_grid"].get<std::vector<double>>();
      cfg.cert_bisect_tol = cert.value("bisect_tol", cfg.cert_bisect_tol);
      cfg.cert_sample_budget = cert.value("sample_budget", cfg.cert_sample_budget);
      cfg.cert_search_budget = cert.value("search_budget", cfg.cert_search_budget);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
  return cfg;
}

void save_experiment_stats(const ExperimentResult& result, const std::string& path) {
  const auto number_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json certs = json::array();
  for (const CellCertification& c : result.certifications) {
    json entry{{"m_size", c.m_size}, {"status", to_string(c.status)},
               {"hypothesis_ok", c.hypothesis_ok}};
    entry["K"] = number_or_null(c.K);
    entry["L"] = number_or_null(c.L);
    entry["kappa"] = number_or_null(c.kappa);
    certs.push_back(entry);
  }
  write_json(json{{"cluster_count", result.cluster_count},
                  {"min_cluster_size", result.min_cluster_size},
                  {"partition_gap", result.partition_gap},
                  {"d_sup_norm", result.d_sup_norm},
                  {"truth_tv", result.truth_tv},
                  {"certifications", certs},
                  {"meta", meta_block()}},
             path);
}

ExperimentStats load_experiment_stats(const std::string& path) {
  const json j = parse_file(path);
  ExperimentStats stats;
  try {
    stats.cluster_count = require(j, "cluster_count", path).get<int>();
    stats.min_cluster_size = require(j, "min_cluster_size", path).get<int>();
    stats.partition_gap = require(j, "partition_gap", path).get<double>();
    stats.d_sup_norm = require(j, "d_sup_norm", path).get<double>();
    stats.truth_tv = require(j, "truth_tv", path).get<double>();
    const auto number_field = [&](const json& entry, const char* key) {
      const json& field = require(entry, key, path); // null encodes NaN or infinity
      return field.is_null() ? std::nan("") : field.get<double>();
    };
    for (const auto& entry : require(j, "certifications", path)) {
      CellCertification c;
      c.m_size = require(entry, "m_size", path).get<int>();
      c.K = number_field(entry, "K");
      c.L = number_field(entry, "L");
      c.kappa = number_field(entry, "kappa");
      c.hypothesis_ok = require(entry, "hypothesis_ok", path).get<bool>();
      const std::string status = require(entry, "status", path).get<std::string>();
      if (status == "certified")
        c.status = ResolvingCertificate::Status::certified;
      else if (status == "refuted")
        c.status = ResolvingCertificate::Status::refuted;
      else if (status == "sampled-only")
        c.status = ResolvingCertificate::Status::sampled_only;
      else
        throw Error(ErrorCode::ParseFailure, path + ": unknown status '" + status + "'");
      stats.certifications.push_back(c);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
  }
  return stats;
}

} // namespace nlasso
