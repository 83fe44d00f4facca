// srgg: learn soft random geometric graphical models from multivariate data,
// compare learnt models, and build large single-shot correlation networks.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "srgg/bignet.hpp"
#include "srgg/data.hpp"
#include "srgg/distance.hpp"
#include "srgg/graph_io.hpp"
#include "srgg/log.hpp"
#include "srgg/mcmc.hpp"
#include "srgg/parallel.hpp"
#include "srgg/version.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json input_entry(const std::string& path) {
  json j;
  j["path"] = path;
  j["fnv1a64"] = srgg::hash_file_hex(path);
  return j;
}

void write_manifest(const std::string& out_dir, const std::string& command, const json& config,
                    const json& inputs, const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
  json m;
  m["command"] = command;
  m["version"] = srgg::kVersion;
  m["timestamp"] = iso_timestamp();
  m["config"] = config;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  srgg::atomic_write_file((fs::path(out_dir) / "manifest.json").string(), m.dump(2) + "\n");
}

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw srgg::InputError("no such file: " + path);
}

struct LearnOptions {
  std::string input;
  std::string out_dir = ".";
  std::string format = "dot";
  std::size_t rows = 0;  // 0 keeps every row
  std::size_t iters = 10000;
  std::size_t burnin = 5000;
  double tau = 0.05;
  double sigma0 = 0.05;
  double w = 0.05;
  std::uint64_t seed = 0;
  bool normalization = false;
  bool plain_metropolis = false;
  std::string block1 = "likelihood";
  int threads = 0;
};

int run_learn(const LearnOptions& opt) {
  srgg::set_thread_cap(opt.threads);
  require_file(opt.input);

  srgg::RawDataset raw = srgg::load_matrix_csv(opt.input);
  if (opt.rows > 0) raw = srgg::subsample_rows(raw, opt.rows, opt.seed);
  const srgg::StandardizedDataset data = srgg::standardize(raw);

  srgg::McmcConfig cfg;
  cfg.n_iter = opt.iters;
  cfg.n_burnin = opt.burnin;
  cfg.proposal_sd_corr = opt.sigma0;
  cfg.proposal_sd_var = opt.w;
  cfg.tau = opt.tau;
  cfg.seed = opt.seed;
  cfg.hastings = !opt.plain_metropolis;
  cfg.marginalized_block1 = opt.block1 == "marginalized";
  cfg.normalization.use_normalization = opt.normalization;
  cfg.normalization.seed = opt.seed;
  if (cfg.n_iter > cfg.n_burnin && cfg.n_iter - cfg.n_burnin == 1)
    srgg::log_warn("only one post-burnin sample; edge marginals will be 0/1");

  const srgg::McmcResult res = srgg::run_two_block_chain(data, cfg);
  const srgg::GraphicalModel model =
      srgg::build_graphical_model(res.edge_marginals, data.column_names, opt.tau);

  const fs::path out(opt.out_dir);
  std::string graph_file;
  if (opt.format == "dot") {
    graph_file = (out / "graph.dot").string();
    srgg::atomic_write_file(graph_file, srgg::to_dot(model));
  } else if (opt.format == "graphml") {
    graph_file = (out / "graph.graphml").string();
    srgg::atomic_write_file(graph_file, srgg::to_graphml(model));
  } else if (opt.format == "json") {
    graph_file = (out / "graph.json").string();
    srgg::atomic_write_file(graph_file, srgg::graph_json(model));
  } else if (opt.format == "csv") {
    graph_file = (out / "graph.csv").string();
    srgg::atomic_write_file(graph_file, srgg::to_edge_list_csv(model));
  } else {
    throw srgg::InputError("unknown graph format: " + opt.format);
  }
  const std::string trace_file = (out / "trace.csv").string();
  srgg::atomic_write_file(trace_file, srgg::trace_to_csv(res.trace));

  json meta;
  meta["n_iter"] = cfg.n_iter;
  meta["n_burnin"] = cfg.n_burnin;
  meta["tau"] = cfg.tau;
  meta["sigma0"] = cfg.proposal_sd_corr;
  meta["w"] = cfg.proposal_sd_var;
  meta["seed"] = cfg.seed;
  meta["hastings"] = cfg.hastings;
  meta["block1"] = opt.block1;
  meta["normalization"] = cfg.normalization.use_normalization;
  meta["normalization_replicates"] = cfg.normalization.replicate_count;
  meta["normalization_rows"] = cfg.normalization.replicate_rows;
  meta["accept_rate_corr"] = res.diag.accept_rate_corr;
  meta["accept_rate_graph"] = res.diag.accept_rate_graph;
  meta["ridge_events_sigma"] = res.diag.ridge_events_sigma;
  meta["rejected_nonpd"] = res.diag.rejected_nonpd;
  meta["gram_ridge_epsilon"] = res.diag.gram_ridge_epsilon;
  const std::string meta_file = (out / "trace.meta.json").string();
  srgg::atomic_write_file(meta_file, meta.dump(2) + "\n");

  json config;
  config["rows"] = opt.rows;
  config["iters"] = opt.iters;
  config["burnin"] = opt.burnin;
  config["tau"] = opt.tau;
  config["sigma0"] = opt.sigma0;
  config["w"] = opt.w;
  config["seed"] = opt.seed;
  config["normalization"] = opt.normalization;
  config["plain_metropolis"] = opt.plain_metropolis;
  config["block1"] = opt.block1;
  config["format"] = opt.format;
  write_manifest(opt.out_dir, "learn", config, json::array({input_entry(opt.input)}),
                 {graph_file, trace_file, meta_file});

  std::printf("learnt %zu-node model: %zu edges at tau %.4g; accept rates corr %.3f graph %.3f\n",
              model.labels.size(), model.edges.size(), opt.tau, res.diag.accept_rate_corr,
              res.diag.accept_rate_graph);
  return 0;
}

struct DistanceOptions {
  std::string trace1, trace2;
  std::string out_dir = ".";
  long long burnin = -1;  // -1: take each trace's sidecar value
  bool truncate_min = false;
  std::string scale_mode = "divide";
  int threads = 0;
};

std::size_t sidecar_burnin(const std::string& trace_path) {
  const fs::path meta = fs::path(trace_path).parent_path() / "trace.meta.json";
  if (!fs::exists(meta))
    throw srgg::InputError("no --burnin given and no sidecar " + meta.string());
  const json j = json::parse(srgg::read_text_file(meta.string()));
  return j.at("n_burnin").get<std::size_t>();
}

int run_distance(const DistanceOptions& opt) {
  srgg::set_thread_cap(opt.threads);
  require_file(opt.trace1);
  require_file(opt.trace2);

  srgg::ChainTrace t1 = srgg::load_trace_csv(opt.trace1);
  srgg::ChainTrace t2 = srgg::load_trace_csv(opt.trace2);
  const std::size_t b1 =
      opt.burnin >= 0 ? static_cast<std::size_t>(opt.burnin) : sidecar_burnin(opt.trace1);
  const std::size_t b2 =
      opt.burnin >= 0 ? static_cast<std::size_t>(opt.burnin) : sidecar_burnin(opt.trace2);

  srgg::ScaleMode mode;
  if (opt.scale_mode == "divide") {
    mode = srgg::ScaleMode::Divide;
  } else if (opt.scale_mode == "shift") {
    mode = srgg::ScaleMode::Shift;
  } else {
    throw srgg::InputError("unknown scale mode: " + opt.scale_mode);
  }

  const srgg::DistanceReport r = srgg::compare_chains(t1, b1, t2, b2, mode, opt.truncate_min);

  json j;
  j["scale"] = r.scale;
  j["scale_mode"] = opt.scale_mode;
  j["d_hellinger"] = r.d_hellinger;
  j["d_bhattacharyya"] = r.d_bhattacharyya;
  j["d_max"] = json::array({r.d_max_1, r.d_max_2});
  j["delta"] = r.delta;
  j["abs_corr"] = r.abs_corr;
  j["log_odds_sum"] = r.log_odds_sum;
  j["log_odds_mean"] = r.log_odds_mean;
  j["post_burnin_length"] = r.post_burnin_length;
  j["burnin"] = json::array({b1, b2});
  j["truncated"] = r.truncated;
  const std::string report_file = (fs::path(opt.out_dir) / "distance.json").string();
  srgg::atomic_write_file(report_file, j.dump(2) + "\n");

  json config;
  config["burnin"] = opt.burnin;
  config["truncate_min"] = opt.truncate_min;
  config["scale_mode"] = opt.scale_mode;
  write_manifest(opt.out_dir, "distance", config,
                 json::array({input_entry(opt.trace1), input_entry(opt.trace2)}), {report_file});

  std::printf("scale s            %.6g\n", r.scale);
  std::printf("D_H                %.6g\n", r.d_hellinger);
  std::printf("D_B                %.6g\n", r.d_bhattacharyya);
  std::printf("D_max (1, 2)       %.6g  %.6g\n", r.d_max_1, r.d_max_2);
  std::printf("delta              %.6g\n", r.delta);
  std::printf("exp(-delta)        %.6g\n", r.abs_corr);
  std::printf("log-odds mean      %.6g\n", r.log_odds_mean);
  return 0;
}

struct BignetOptions {
  std::string npmi;
  std::string corr;
  std::string classes;
  std::string out_dir = ".";
  std::string missing_policy = "zero";
  double tau = 0.1;
  int threads = 0;
};

int run_bignet(const BignetOptions& opt) {
  srgg::set_thread_cap(opt.threads);
  if (opt.npmi.empty() == opt.corr.empty())
    throw srgg::InputError("exactly one of --npmi or --corr is required");

  srgg::Matrix corr;
  std::vector<std::string> labels;
  json inputs = json::array();
  if (!opt.npmi.empty()) {
    require_file(opt.npmi);
    inputs.push_back(input_entry(opt.npmi));
    srgg::MissingPolicy policy;
    if (opt.missing_policy == "zero") {
      policy = srgg::MissingPolicy::ZeroScore;
    } else if (opt.missing_policy == "bottom") {
      policy = srgg::MissingPolicy::BottomRank;
    } else {
      throw srgg::InputError("unknown missing policy: " + opt.missing_policy);
    }
    const srgg::NpmiTable table = srgg::load_npmi_table(opt.npmi, policy);
    srgg::log_info("npmi table: " + std::to_string(table.phenotype_labels.size()) +
                   " phenotypes x " + std::to_string(table.disease_labels.size()) + " diseases");
    corr = srgg::all_pairs_spearman(table.scores);
    labels = table.disease_labels;
  } else {
    require_file(opt.corr);
    inputs.push_back(input_entry(opt.corr));
    const srgg::RawDataset d = srgg::load_matrix_csv(opt.corr);
    if (d.rows != d.cols) throw srgg::DimensionMismatch("--corr matrix must be square");
    corr = srgg::Matrix(d.rows, d.cols);
    for (std::size_t i = 0; i < d.rows; ++i)
      for (std::size_t j = 0; j < d.cols; ++j) corr(i, j) = d.at(i, j);
    labels = d.column_names;
  }

  srgg::LargeNetwork net = srgg::build_large_network(corr, opt.tau, labels);

  std::vector<std::string> class_names;
  std::unique_ptr<srgg::ClassStats> stats;
  if (!opt.classes.empty()) {
    require_file(opt.classes);
    inputs.push_back(input_entry(opt.classes));
    std::unordered_map<std::string, int> by_name;
    std::unordered_map<std::string, int> node_class;
    std::istringstream in(srgg::read_text_file(opt.classes));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw srgg::ParseError("class file rows must be 'label,class': " + line);
      const std::string label = line.substr(0, comma);
      const std::string cls = line.substr(comma + 1);
      auto [it, added] = by_name.try_emplace(cls, static_cast<int>(class_names.size()));
      if (added) class_names.push_back(cls);
      node_class[label] = it->second;
    }
    for (std::size_t i = 0; i < net.labels.size(); ++i) {
      const auto it = node_class.find(net.labels[i]);
      if (it != node_class.end()) net.class_of[i] = it->second;
    }
    stats = std::make_unique<srgg::ClassStats>(
        srgg::class_variance_ratio(corr, net.class_of, class_names));
  }

  const srgg::LargeNetwork pruned = srgg::prune_zero_degree(net);

  const fs::path out(opt.out_dir);
  const std::string edges_file = (out / "edges.csv").string();
  const std::string graphml_file = (out / "network.graphml").string();
  const std::string stats_file = (out / "stats.json").string();
  srgg::atomic_write_file(edges_file, srgg::to_edge_list_csv(pruned));
  srgg::atomic_write_file(graphml_file, srgg::to_graphml(pruned, class_names));
  srgg::atomic_write_file(stats_file, srgg::network_stats_json(pruned, stats.get()));

  json config;
  config["tau"] = opt.tau;
  config["missing_policy"] = opt.missing_policy;
  config["source"] = opt.npmi.empty() ? "corr" : "npmi";
  write_manifest(opt.out_dir, "bignet", config, inputs, {edges_file, graphml_file, stats_file});

  std::printf("network: %zu nodes, %zu edges after pruning (tau %.4g, average degree %.3f)\n",
              pruned.node_count(), pruned.edge_count(), opt.tau, pruned.average_degree());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft random geometric graphical models in probabilistic metric space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", srgg::kVersion);

  LearnOptions learn;
  auto* cmd_learn = app.add_subcommand("learn", "learn a graphical model from a CSV dataset");
  cmd_learn->add_option("--input", learn.input, "input CSV")->required();
  cmd_learn->add_option("--rows", learn.rows, "subsample this many rows (0 keeps all)");
  cmd_learn->add_option("--iters", learn.iters, "chain iterations");
  cmd_learn->add_option("--burnin", learn.burnin, "burn-in iterations");
  cmd_learn->add_option("--tau", learn.tau, "edge-marginal threshold");
  cmd_learn->add_option("--sigma0", learn.sigma0, "correlation proposal sd");
  cmd_learn->add_option("--w", learn.w, "variance proposal sd");
  cmd_learn->add_option("--seed", learn.seed, "random seed");
  cmd_learn->add_option("--threads", learn.threads, "worker thread cap");
  cmd_learn->add_option("--out-dir", learn.out_dir, "output directory");
  cmd_learn->add_option("--format", learn.format, "graph format: dot, graphml, json, csv")
      ->check(CLI::IsMember({"dot", "graphml", "json", "csv"}));
  cmd_learn->add_flag("--normalization", learn.normalization,
                      "include the Monte-Carlo normalization estimate in the posterior");
  cmd_learn->add_flag("--plain-metropolis", learn.plain_metropolis,
                      "drop the Hastings corrections (plain Metropolis reading)");
  cmd_learn->add_option("--block1", learn.block1,
                        "block-1 target: likelihood (independent-row matrix Normal) or "
                        "marginalized (row-marginalized posterior)")
      ->check(CLI::IsMember({"likelihood", "marginalized"}));

  DistanceOptions dist;
  auto* cmd_distance =
      app.add_subcommand("distance", "uncertainty-normalized distance between two learnt models");
  cmd_distance->add_option("trace1", dist.trace1, "first trace CSV")->required();
  cmd_distance->add_option("trace2", dist.trace2, "second trace CSV")->required();
  cmd_distance->add_option("--burnin", dist.burnin,
                           "burn-in for both traces (default: each trace's sidecar)");
  cmd_distance->add_option("--scale-mode", dist.scale_mode, "divide or shift")
      ->check(CLI::IsMember({"divide", "shift"}));
  cmd_distance->add_flag("--truncate-min", dist.truncate_min,
                         "align unequal post-burnin lengths by truncation");
  cmd_distance->add_option("--threads", dist.threads, "worker thread cap");
  cmd_distance->add_option("--out-dir", dist.out_dir, "output directory");

  BignetOptions big;
  auto* cmd_bignet =
      app.add_subcommand("bignet", "single-shot large network from correlation structure");
  cmd_bignet->add_option("--npmi", big.npmi, "score triples (disease, phenotype, score)");
  cmd_bignet->add_option("--corr", big.corr, "dense correlation matrix CSV");
  cmd_bignet->add_option("--classes", big.classes, "node class CSV (label,class)");
  cmd_bignet->add_option("--tau", big.tau, "edge-marginal threshold");
  cmd_bignet->add_option("--missing-policy", big.missing_policy, "zero or bottom")
      ->check(CLI::IsMember({"zero", "bottom"}));
  cmd_bignet->add_option("--threads", big.threads, "worker thread cap");
  cmd_bignet->add_option("--out-dir", big.out_dir, "output directory");

  try {
    app.parse(argc, argv);
    if (cmd_learn->parsed()) return run_learn(learn);
    if (cmd_distance->parsed()) return run_distance(dist);
    if (cmd_bignet->parsed()) return run_bignet(big);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  } catch (const srgg::InputError& e) {
    srgg::log_error(e.what());
    return 2;
  } catch (const srgg::ShapeError& e) {
    srgg::log_error(e.what());
    return 3;
  } catch (const srgg::NumericError& e) {
    srgg::log_error(e.what());
    return 4;
  } catch (const std::exception& e) {
    srgg::log_error(e.what());
    return 4;
  }
}
