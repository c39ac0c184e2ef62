// Copyright 2026 The actclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "actclust/agglomerative.hpp"
#include "actclust/evaluation.hpp"
#include "actclust/experiments.hpp"
#include "actclust/outlier_cluster.hpp"
#include "actclust/robust.hpp"
#include "actclust/robust_params.hpp"
#include "actclust/similarity_csv.hpp"
#include "actclust/synthesis.hpp"
#include "actclust/tree_json.hpp"

namespace fs = std::filesystem;
using namespace actclust;

namespace {

// Directory for outputs whose path was not given explicitly.
fs::path default_out_dir() {
  if (const char* dir = std::getenv("ACTCLUST_OUT_DIR"); dir && *dir) return dir;
  return fs::current_path();
}

fs::path resolve_out(const std::string& out, const std::string& fallback_name) {
  const fs::path p = out.empty() ? default_out_dir() / fallback_name : fs::path(out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

SmallClusterPolicy policy_from(const std::string& name) {
  if (name == "flat") return SmallClusterPolicy::Flat;
  if (name == "refine") return SmallClusterPolicy::Refine;
  throw std::invalid_argument("unknown small-cluster policy: " + name);
}

struct GenOpts {
  int n = 128;
  std::string shape = "balanced";
  double eta = 0.1;
  double q = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

struct SimOpts {
  GenOpts gen;
  std::string tree;
  std::string mask_out;
};

struct ClusterOpts {
  std::string sim;
  std::string algo = "outlier";
  std::string linkage = "average";
  int m = 10;
  double gamma = kDefaultGamma;
  std::uint64_t seed = 1;
  bool auto_m = false;
  double q = 0.05;
  double eta = 0.5;
  double delta = 0.1;
  std::string small_clusters = "flat";
  bool tolerant = false;
  std::string trace;
  std::string out;
};

struct EvalOpts {
  std::string truth;
  std::string estimate;
  std::string sim;
  std::uint64_t seed = 1;
  std::string order_out;
  std::string out;
};

struct ExpOpts {
  std::optional<int> n;
  std::vector<double> q;
  std::vector<int> m;
  std::vector<int> errors;
  std::vector<int> sizes;
  double gamma = kDefaultGamma;
  std::string linkage = "average";
  std::string small_clusters = "refine";
  std::optional<int> trials;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen_tree(const GenOpts& o) {
  GenConfig g;
  g.n_items = o.n;
  g.shape = parse_shape(o.shape);
  g.eta_min = o.eta;
  g.seed = o.seed;
  g.validate();
  const ClusterTree t = g.shape == TreeShape::Balanced ? gen_balanced_tree(g.n_items)
                                                      : gen_random_tree(g.n_items, g.eta_min, g.seed);
  const fs::path out = resolve_out(o.out, "tree.json");
  write_tree_json(t, out.string());
  std::cout << nlohmann::json{{"tree", out.string()}, {"n", t.size()}, {"depth", t.depth()},
                              {"min_balance", min_balance_factor(t)}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_gen_sim(const SimOpts& o) {
  const fs::path out = resolve_out(o.gen.out, "sim.csv");
  ClusterTree tree;
  SimilarityStored observed;
  if (!o.tree.empty()) {
    tree = read_tree_json(o.tree);
    const SimilarityStored clean = gen_tc_similarities(tree, derive_seed(o.gen.seed, 1));
    observed = inject_inconsistencies(clean, o.gen.q, derive_seed(o.gen.seed, 2));
  } else {
    GenConfig g;
    g.n_items = o.gen.n;
    g.shape = parse_shape(o.gen.shape);
    g.eta_min = o.gen.eta;
    g.q = o.gen.q;
    g.seed = o.gen.seed;
    Instance inst = generate(g);
    tree = std::move(inst.tree);
    observed = std::move(inst.observed);
    // Keep the generating tree next to the matrix.
    fs::path tree_path = out;
    write_tree_json(tree, tree_path.replace_extension(".tree.json").string());
  }
  write_csv(observed, out.string());
  if (!o.mask_out.empty()) {
    std::ofstream f(resolve_out(o.mask_out, "mask.csv"));
    for (Index i = 0; i < observed.size(); ++i) {
      for (Index j = 0; j < observed.size(); ++j) f << (j ? "," : "") << (observed.consistent(i, j) ? 1 : 0);
      f << '\n';
    }
  }
  std::cout << nlohmann::json{{"similarities", out.string()}, {"n", observed.size()}, {"q", o.gen.q}}.dump()
            << '\n';
  return 0;
}

int cmd_cluster(const ClusterOpts& o) {
  const SimilarityStored store = load_csv(o.sim);
  const int n = static_cast<int>(store.size());
  QueryLedger ledger(n);
  const std::vector<ItemId> items = insertion_order(n);
  nlohmann::json info{{"algo", o.algo}, {"n", n}};
  ClusterTree tree;

  if (o.algo == "outlier") {
    StoreOracle<double> oracle(store, ledger);
    const OutlierClusterResult r =
        outlier_cluster(std::span<const ItemId>(items), oracle, o.tolerant ? TieMode::Tolerant : TieMode::Strict);
    tree = r.tree;
    info["tests"] = r.tests;
    info["best_effort"] = r.best_effort;
    info["query_bound"] = query_bound(n);
  } else if (o.algo == "robust") {
    RaClusterOptions ro;
    ro.m = o.m;
    ro.gamma = o.gamma;
    ro.small_clusters = policy_from(o.small_clusters);
    ro.keep_traces = !o.trace.empty();
    if (o.auto_m) {
      ro.m = required_m_global(n, o.delta, o.q, o.gamma, o.eta);
      info["auto_m"] = {{"delta", o.delta}, {"q", o.q}, {"eta", o.eta}, {"mode", "conservative"}};
    }
    CachedSimilarities<double> oracle(store, ledger);
    std::mt19937_64 rng(o.seed);
    const RaClusterResult r = ra_cluster(items, ro, oracle, rng);
    tree = r.tree;
    info["m"] = ro.m;
    info["gamma"] = ro.gamma;
    info["seed"] = o.seed;
    info["small_clusters"] = o.small_clusters;
    info["splits"] = r.splits.size();
    info["failed_splits"] = r.failed_splits;
    info["split_budget"] = r.split_budget();
    if (!o.trace.empty()) {
      nlohmann::json traces = nlohmann::json::array();
      for (const auto& t : r.traces) traces.push_back(t.to_json());
      write_text(resolve_out(o.trace, "trace.json"), traces.dump(1) + '\n');
    }
  } else if (o.algo == "agglo") {
    tree = agglomerate(store, parse_linkage(o.linkage), ledger);
    info["linkage"] = o.linkage;
  } else {
    throw std::invalid_argument("unknown algorithm: " + o.algo);
  }

  const fs::path out = resolve_out(o.out, "estimate.json");
  write_tree_json(tree, out.string());
  info["tree"] = out.string();
  info["ledger"] = ledger.to_json();
  std::cout << info.dump() << '\n';
  return 0;
}

int cmd_eval(const EvalOpts& o) {
  const ClusterTree truth = read_tree_json(o.truth);
  const ClusterTree est = read_tree_json(o.estimate);
  const SimilarityStored store = load_csv(o.sim);
  const EvalReport r = evaluate(truth, est, store, o.seed);
  const std::string text = r.to_json().dump(2) + '\n';
  if (!o.out.empty()) write_text(resolve_out(o.out, "eval.json"), text);
  if (!o.order_out.empty()) {
    // The similarity matrix permuted into the estimate's leaf order, for heatmaps.
    const std::vector<ItemId> order = leaf_order(est);
    Eigen::MatrixXd reordered(store.size(), store.size());
    for (Index i = 0; i < store.size(); ++i)
      for (Index j = 0; j < store.size(); ++j) reordered(i, j) = store.value(order[i], order[j]);
    write_csv(SimilarityStored(reordered), resolve_out(o.order_out, "reordered.csv").string());
  }
  std::cout << text;
  return 0;
}

template <typename Report>
int emit(const Report& r, const std::string& out, const std::string& name) {
  const fs::path base = resolve_out(out, name);
  fs::path json_path = base, csv_path = base;
  json_path += ".json";
  csv_path += ".csv";
  write_text(json_path, r.to_json().dump(2) + '\n');
  write_text(csv_path, r.to_csv());
  std::cout << r.to_csv();
  std::cerr << "wrote " << json_path.string() << " and " << csv_path.string() << '\n';
  return 0;
}

int cmd_exp(const std::string& which, const ExpOpts& o) {
  if (which == "table1") {
    Table1Config c;
    if (!o.sizes.empty()) c.balanced_sizes = o.sizes;
    if (o.n) c.unbalanced_size = *o.n;
    if (o.trials) c.trials = *o.trials;
    c.seed = o.seed;
    return emit(run_table1(c), o.out, "table1");
  }
  if (which == "fig2") {
    Fig2Config c;
    if (o.n) c.n = *o.n;
    if (!o.errors.empty()) c.errors = o.errors;
    if (o.trials) c.trials = *o.trials;
    c.seed = o.seed;
    return emit(run_fig2(c), o.out, "fig2");
  }
  if (which == "table2") {
    Table2Config c;
    if (o.n) c.n = *o.n;
    if (!o.q.empty()) c.q_values = o.q;
    if (!o.m.empty()) c.m_values = o.m;
    c.gamma = o.gamma;
    c.linkage = parse_linkage(o.linkage);
    c.small_clusters = policy_from(o.small_clusters);
    if (o.trials) c.trials = *o.trials;
    c.seed = o.seed;
    return emit(run_table2(c), o.out, "table2");
  }
  if (which == "prop1") {
    Prop1Config c;
    if (o.n) c.n = *o.n;
    if (!o.m.empty()) c.m = o.m.front();
    if (o.trials) c.trials = *o.trials;
    c.seed = o.seed;
    return emit(run_prop1(c), o.out, "prop1");
  }
  throw std::invalid_argument("unknown experiment: " + which);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-efficient hierarchical clustering from pairwise similarities"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenOpts tree_opts;
  auto* gen_tree = app.add_subcommand("gen-tree", "Generate a ground-truth cluster tree (JSON)");
  gen_tree->add_option("--n", tree_opts.n, "Number of items")->capture_default_str();
  gen_tree->add_option("--shape", tree_opts.shape, "balanced | random")->capture_default_str();
  gen_tree->add_option("--eta", tree_opts.eta, "Balance floor for random trees")->capture_default_str();
  gen_tree->add_option("--seed", tree_opts.seed)->capture_default_str();
  gen_tree->add_option("--out", tree_opts.out, "Output path (default: $ACTCLUST_OUT_DIR/tree.json)");

  SimOpts sim_opts;
  auto* gen_sim = app.add_subcommand("gen-sim", "Generate a similarity matrix (CSV) for a tree");
  gen_sim->add_option("--tree", sim_opts.tree, "Tree JSON; generated from --n/--shape when omitted");
  gen_sim->add_option("--n", sim_opts.gen.n)->capture_default_str();
  gen_sim->add_option("--shape", sim_opts.gen.shape)->capture_default_str();
  gen_sim->add_option("--eta", sim_opts.gen.eta)->capture_default_str();
  gen_sim->add_option("--q", sim_opts.gen.q, "Probability that a pair is inconsistent")->capture_default_str();
  gen_sim->add_option("--seed", sim_opts.gen.seed)->capture_default_str();
  gen_sim->add_option("--mask-out", sim_opts.mask_out, "Also write the 0/1 consistency mask");
  gen_sim->add_option("--out", sim_opts.gen.out, "Output path (default: $ACTCLUST_OUT_DIR/sim.csv)");

  ClusterOpts cl;
  auto* cluster = app.add_subcommand("cluster", "Cluster a similarity matrix");
  cluster->add_option("--sim", cl.sim, "Similarity CSV")->required();
  cluster->add_option("--algo", cl.algo, "outlier | robust | agglo")
      ->check(CLI::IsMember({"outlier", "robust", "agglo"}))
      ->capture_default_str();
  cluster->add_option("--linkage", cl.linkage, "single | average | complete")->capture_default_str();
  cluster->add_option("--m", cl.m, "Voting-set size")->capture_default_str();
  cluster->add_option("--gamma", cl.gamma, "Outlier-fraction threshold")->capture_default_str();
  cluster->add_option("--seed", cl.seed)->capture_default_str();
  cluster->add_flag("--auto-m", cl.auto_m, "Derive m from --delta/--q/--eta");
  cluster->add_option("--delta", cl.delta)->capture_default_str();
  cluster->add_option("--q", cl.q)->capture_default_str();
  cluster->add_option("--eta", cl.eta)->capture_default_str();
  cluster->add_option("--small-clusters", cl.small_clusters, "flat | refine")->capture_default_str();
  cluster->add_flag("--tolerant", cl.tolerant, "Break tied outlier tests instead of failing");
  cluster->add_option("--trace", cl.trace, "Write split traces (JSON)");
  cluster->add_option("--out", cl.out, "Output tree (default: $ACTCLUST_OUT_DIR/estimate.json)");

  EvalOpts ev;
  auto* eval = app.add_subcommand("eval", "Score an estimated tree against the truth");
  eval->add_option("--truth", ev.truth)->required();
  eval->add_option("--est", ev.estimate)->required();
  eval->add_option("--sim", ev.sim, "Similarity CSV for the ordering entropy")->required();
  eval->add_option("--seed", ev.seed)->capture_default_str();
  eval->add_option("--reordered-out", ev.order_out, "Write the matrix in the estimate's leaf order");
  eval->add_option("--out", ev.out, "Also write the report here");

  ExpOpts ex;
  std::string which;
  auto* exp = app.add_subcommand("exp", "Run a canned experiment");
  exp->add_option("experiment", which, "table1 | fig2 | table2 | prop1")
      ->required()
      ->check(CLI::IsMember({"table1", "fig2", "table2", "prop1"}));
  exp->add_option("--n", ex.n, "Item count");
  exp->add_option("--sizes", ex.sizes, "Balanced sizes (table1)");
  exp->add_option("--errors", ex.errors, "Lying-call counts (fig2)");
  exp->add_option("--q", ex.q, "Inconsistency levels (table2)");
  exp->add_option("--m", ex.m, "Voting-set sizes (table2) or planted cluster size (prop1)");
  exp->add_option("--gamma", ex.gamma)->capture_default_str();
  exp->add_option("--linkage", ex.linkage)->capture_default_str();
  exp->add_option("--small-clusters", ex.small_clusters)->capture_default_str();
  exp->add_option("--trials", ex.trials);
  exp->add_option("--seed", ex.seed)->capture_default_str();
  exp->add_option("--out", ex.out, "Output prefix; .json and .csv are appended");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_tree) return cmd_gen_tree(tree_opts);
    if (*gen_sim) return cmd_gen_sim(sim_opts);
    if (*cluster) return cmd_cluster(cl);
    if (*eval) return cmd_eval(ev);
    if (*exp) return cmd_exp(which, ex);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
