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

#include "actclust/experiments.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "actclust/evaluation.hpp"
#include "actclust/outlier_cluster.hpp"
#include "actclust/rng.hpp"
#include "actclust/robust_params.hpp"
#include "actclust/synthesis.hpp"

namespace actclust {
namespace {

template <typename T>
double mean_of(const std::vector<T>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

nlohmann::json header(const char* experiment, const nlohmann::json& config) {
  return {{"experiment", experiment}, {"version", kVersion}, {"config", config}};
}

}  // namespace

// ---------------------------------------------------------------- table1

nlohmann::json Table1Config::to_json() const {
  return {{"balanced_sizes", balanced_sizes}, {"include_unbalanced", include_unbalanced},
          {"unbalanced_size", unbalanced_size}, {"unbalanced_eta", unbalanced_eta},
          {"trials", trials}, {"seed", seed}, {"insertion_order", "ascending"}};
}

Table1Report run_table1(const Table1Config& config) {
  if (config.trials < 1) throw std::invalid_argument("table1: trials must be positive");
  struct Topology {
    std::string label;
    GenConfig gen;
  };
  std::vector<Topology> topologies;
  for (int n : config.balanced_sizes) {
    GenConfig g;
    g.n_items = n;
    g.shape = TreeShape::Balanced;
    topologies.push_back({"balanced", g});
  }
  if (config.include_unbalanced) {
    GenConfig g;
    g.n_items = config.unbalanced_size;
    g.shape = TreeShape::RandomUnbalanced;
    g.eta_min = config.unbalanced_eta;
    topologies.push_back({"unbalanced-" + std::to_string(config.unbalanced_size) + " (stand-in)", g});
  }

  Table1Report report;
  report.config = config;
  for (const auto& topo : topologies) {
    Table1Row row;
    row.topology = topo.label;
    row.n = topo.gen.n_items;
    row.bound = query_bound(row.n);
    row.trials = config.trials;
    std::vector<double> distinct;
    std::vector<double> accesses;
    for (int t = 0; t < config.trials; ++t) {
      GenConfig g = topo.gen;
      g.seed = config.seed + static_cast<std::uint64_t>(t);
      const Instance inst = generate(g);
      if (t == 0) {
        QueryLedger agg_ledger(row.n);
        const ClusterTree agg = agglomerate(inst.observed, Linkage::Average, agg_ledger);
        row.n_agg = agg_ledger.distinct_pairs();
        row.agg_exact = tree_equal(agg, inst.tree);
      }
      QueryLedger ledger(row.n);
      StoreOracle<double> oracle(inst.observed, ledger);
      const auto order = insertion_order(row.n);
      const auto result = outlier_cluster(order, oracle);
      if (tree_equal(result.tree, inst.tree)) ++row.exact_recoveries;
      distinct.push_back(static_cast<double>(ledger.distinct_pairs()));
      accesses.push_back(static_cast<double>(ledger.count()));
      row.max_outlier = std::max(row.max_outlier, ledger.distinct_pairs());
    }
    row.n_outlier = mean_of(distinct);
    row.n_outlier_accesses = mean_of(accesses);
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::json Table1Report::to_json() const {
  nlohmann::json j = header("table1", config.to_json());
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"topology", r.topology},
                         {"n", r.n},
                         {"n_agg", r.n_agg},
                         {"agg_exact", r.agg_exact},
                         {"n_outlier", r.n_outlier},
                         {"n_outlier_accesses", r.n_outlier_accesses},
                         {"max_outlier", r.max_outlier},
                         {"ratio", r.ratio()},
                         {"query_bound", r.bound},
                         {"exact_recoveries", r.exact_recoveries},
                         {"trials", r.trials}});
  }
  j["rows"] = std::move(rows_json);
  return j;
}

std::string Table1Report::to_csv() const {
  std::ostringstream out;
  out << "topology,n,n_agg,n_outlier,n_outlier_accesses,ratio,query_bound,exact_recoveries,trials\n";
  for (const auto& r : rows)
    out << '"' << r.topology << "\"," << r.n << ',' << r.n_agg << ',' << r.n_outlier << ','
        << r.n_outlier_accesses << ',' << r.ratio() << ',' << r.bound << ',' << r.exact_recoveries << ','
        << r.trials << '\n';
  return out.str();
}

// ---------------------------------------------------------------- fig 2

nlohmann::json Fig2Config::to_json() const {
  return {{"n", n}, {"errors", errors}, {"trials", trials}, {"seed", seed}, {"shape", "balanced"}};
}

Fig2Report run_fig2(const Fig2Config& config) {
  if (config.trials < 1) throw std::invalid_argument("fig2: trials must be positive");
  Fig2Report report;
  report.config = config;
  for (int k : config.errors) {
    if (k < 0) throw std::invalid_argument("fig2: negative error count");
    Fig2Row row;
    row.k_errors = k;
    row.trials = config.trials;
    std::vector<double> r_values;
    std::vector<double> fired;
    for (int t = 0; t < config.trials; ++t) {
      // Same instance for every k so the sweep is paired.
      GenConfig g;
      g.n_items = config.n;
      g.seed = config.seed + static_cast<std::uint64_t>(t);
      const Instance inst = generate(g);
      const auto order = insertion_order(config.n);

      QueryLedger dry_ledger(config.n);
      StoreOracle<double> clean(inst.observed, dry_ledger);
      const std::int64_t calls = outlier_cluster(order, clean).tests;

      QueryLedger ledger(config.n);
      auto faulty = faulty_outlier_wrapper(inst.observed, ledger, k,
                                           derive_seed(g.seed, 100 + static_cast<std::uint64_t>(k)), calls);
      const auto result = outlier_cluster(order, faulty, TieMode::Tolerant);
      const int r = r_min(inst.tree, result.tree);
      r_values.push_back(r);
      fired.push_back(static_cast<double>(faulty.fired()));
      if (r == 1) ++row.exact;
    }
    row.mean_r_min = mean_of(r_values);
    double var = 0.0;
    for (double v : r_values) var += (v - row.mean_r_min) * (v - row.mean_r_min);
    if (r_values.size() > 1) var /= static_cast<double>(r_values.size() - 1);
    row.stderr_r_min = std::sqrt(var / static_cast<double>(r_values.size()));
    row.mean_fired = mean_of(fired);
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::json Fig2Report::to_json() const {
  nlohmann::json j = header("fig2", config.to_json());
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"k_errors", r.k_errors},
                         {"mean_r_min", r.mean_r_min},
                         {"stderr_r_min", r.stderr_r_min},
                         {"mean_fired", r.mean_fired},
                         {"exact", r.exact},
                         {"trials", r.trials}});
  j["rows"] = std::move(rows_json);
  return j;
}

std::string Fig2Report::to_csv() const {
  std::ostringstream out;
  out << "k_errors,mean_r_min,stderr_r_min,mean_fired,exact,trials\n";
  for (const auto& r : rows)
    out << r.k_errors << ',' << r.mean_r_min << ',' << r.stderr_r_min << ',' << r.mean_fired << ','
        << r.exact << ',' << r.trials << '\n';
  return out.str();
}

// ---------------------------------------------------------------- table2

nlohmann::json Table2Config::to_json() const {
  return {{"n", n},
          {"q_values", q_values},
          {"m_values", m_values},
          {"gamma", gamma},
          {"linkage", to_string(linkage)},
          {"small_clusters", small_clusters == SmallClusterPolicy::Refine ? "refine" : "flat"},
          {"trials", trials},
          {"seed", seed},
          {"random_orderings", kRandomOrderings},
          {"log_base", "e"}};
}

double Table2Cell::mean_delta_entropy() const { return mean_of(delta_entropy); }
double Table2Cell::mean_r_min() const { return mean_of(r_min); }
double Table2Cell::mean_query_fraction() const { return mean_of(query_fraction); }

Table2Report run_table2(const Table2Config& config) {
  if (config.trials < 1) throw std::invalid_argument("table2: trials must be positive");
  Table2Report report;
  report.config = config;
  const double all_pairs = static_cast<double>(config.n) * (config.n - 1) / 2.0;
  for (std::size_t qi = 0; qi < config.q_values.size(); ++qi) {
    const double q = config.q_values[qi];
    Table2Row row;
    row.q = q;
    row.a2_feasible = a2_feasible(q, config.gamma, 0.5).feasible;
    row.cells.push_back({"agglomerative", 0, {}, {}, {}, 0});
    for (int m : config.m_values) row.cells.push_back({"robust", m, {}, {}, {}, 0});

    for (int t = 0; t < config.trials; ++t) {
      GenConfig g;
      g.n_items = config.n;
      g.q = q;
      g.seed = derive_seed(config.seed + static_cast<std::uint64_t>(t), qi);
      const Instance inst = generate(g);
      const double random_entropy = random_order_entropy(inst.observed, derive_seed(g.seed, 7));
      const auto score = [&](Table2Cell& cell, const ClusterTree& est, const QueryLedger& ledger) {
        const auto order = leaf_order(est);
        const double e = decay_entropy(off_diag_decay(inst.observed, order));
        cell.delta_entropy.push_back(random_entropy - e);
        cell.r_min.push_back(r_min(inst.tree, est));
        cell.query_fraction.push_back(static_cast<double>(ledger.distinct_pairs()) / all_pairs);
      };

      {
        QueryLedger ledger(config.n);
        const ClusterTree est = agglomerate(inst.observed, config.linkage, ledger);
        score(row.cells[0], est, ledger);
      }
      for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
        RaClusterOptions opts;
        opts.m = config.m_values[mi];
        opts.gamma = config.gamma;
        opts.small_clusters = config.small_clusters;
        QueryLedger ledger(config.n);
        CachedSimilarities<double> oracle(inst.observed, ledger);
        std::mt19937_64 rng(derive_seed(g.seed, 1000 + static_cast<std::uint64_t>(opts.m)));
        const auto items = insertion_order(config.n);
        const auto result = ra_cluster(items, opts, oracle, rng);
        Table2Cell& cell = row.cells[mi + 1];
        cell.failed_splits += result.failed_splits;
        score(cell, result.tree, ledger);
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

nlohmann::json Table2Report::to_json() const {
  nlohmann::json j = header("table2", config.to_json());
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells) {
      cells.push_back({{"algorithm", c.algorithm},
                       {"m", c.m},
                       {"mean_delta_entropy", c.mean_delta_entropy()},
                       {"mean_r_min", c.mean_r_min()},
                       {"mean_query_fraction", c.mean_query_fraction()},
                       {"failed_splits", c.failed_splits},
                       {"delta_entropy", c.delta_entropy},
                       {"r_min", c.r_min},
                       {"query_fraction", c.query_fraction}});
    }
    rows_json.push_back({{"q", r.q}, {"a2_feasible", r.a2_feasible}, {"cells", std::move(cells)}});
  }
  j["rows"] = std::move(rows_json);
  return j;
}

std::string Table2Report::to_csv() const {
  std::ostringstream out;
  out << "q,algorithm,m,mean_delta_entropy,mean_r_min,mean_query_fraction,failed_splits\n";
  for (const auto& r : rows)
    for (const auto& c : r.cells)
      out << r.q << ',' << c.algorithm << ',' << c.m << ',' << c.mean_delta_entropy() << ','
          << c.mean_r_min() << ',' << c.mean_query_fraction() << ',' << c.failed_splits << '\n';
  return out.str();
}

// ---------------------------------------------------------------- prop 1

nlohmann::json Prop1Config::to_json() const {
  return {{"n", n},         {"m", m},           {"threshold_multiples", threshold_multiples},
          {"include_full", include_full}, {"trials", trials}, {"seed", seed}};
}

Prop1Report run_prop1(const Prop1Config& config) {
  Prop1Report report;
  report.config = config;
  report.threshold = random_sampling_threshold(config.n, config.m);
  const std::int64_t all_pairs = static_cast<std::int64_t>(config.n) * (config.n - 1) / 2;
  std::vector<std::pair<double, std::int64_t>> points;
  for (double mult : config.threshold_multiples) {
    const auto samples = static_cast<std::int64_t>(std::llround(mult * static_cast<double>(report.threshold)));
    points.emplace_back(mult, std::min(samples, all_pairs));
  }
  if (config.include_full)
    points.emplace_back(static_cast<double>(all_pairs) / static_cast<double>(report.threshold), all_pairs);
  for (std::size_t p = 0; p < points.size(); ++p) {
    Prop1Row row;
    row.multiple = points[p].first;
    row.n_samples = points[p].second;
    row.failure_fraction = random_sampling_trial(config.n, config.m, row.n_samples, config.trials,
                                                 derive_seed(config.seed, p));
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::json Prop1Report::to_json() const {
  nlohmann::json j = header("prop1", config.to_json());
  j["threshold"] = threshold;
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back(
        {{"n_samples", r.n_samples}, {"threshold_multiple", r.multiple}, {"failure_fraction", r.failure_fraction}});
  j["rows"] = std::move(rows_json);
  return j;
}

std::string Prop1Report::to_csv() const {
  std::ostringstream out;
  out << "n_samples,threshold_multiple,failure_fraction,threshold\n";
  for (const auto& r : rows)
    out << r.n_samples << ',' << r.multiple << ',' << r.failure_fraction << ',' << threshold << '\n';
  return out.str();
}

}  // namespace actclust
