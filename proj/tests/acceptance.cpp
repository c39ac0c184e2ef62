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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "actclust/agglomerative.hpp"
#include "actclust/evaluation.hpp"
#include "actclust/experiments.hpp"
#include "actclust/outlier_cluster.hpp"
#include "actclust/robust.hpp"
#include "actclust/robust_params.hpp"
#include "actclust/synthesis.hpp"
#include "test_util.hpp"

using namespace actclust;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<ItemId> iota(int n) { return insertion_order(n); }

Outcome exact_recovery() {
  std::mt19937_64 rng(1);
  const int sizes[] = {16, 32, 64, 128, 256, 512};
  int exact = 0, within = 0;
  for (int t = 0; t < 100; ++t) {
    GenConfig g;
    g.seed = 1000 + static_cast<std::uint64_t>(t);
    if (t % 2 == 0) {
      g.shape = TreeShape::Balanced;
      g.n_items = sizes[(t / 2) % 6];
    } else {
      g.shape = TreeShape::RandomUnbalanced;
      g.n_items = 16 + static_cast<int>(rng() % 497);
      g.eta_min = 0.1 + 0.4 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    const Instance inst = generate(g);
    QueryLedger ledger(g.n_items);
    StoreOracle<double> oracle(inst.observed, ledger);
    const auto order = iota(g.n_items);
    const auto r = outlier_cluster(std::span<const ItemId>(order), oracle);
    exact += tree_equal(r.tree, inst.tree) ? 1 : 0;
    within += ledger.distinct_pairs() <= query_bound(g.n_items) ? 1 : 0;
  }
  return {exact == 100 && within == 100,
          "exact " + std::to_string(exact) + "/100, within bound " + std::to_string(within) + "/100"};
}

Outcome table1() {
  const Table1Report r = run_table1(Table1Config{});
  const std::int64_t agg[] = {8128, 32640, 130816};
  const double paper_ratio[] = {0.1078, 0.0621, 0.0349};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const Table1Row& row = r.rows[static_cast<std::size_t>(i)];
    ok = ok && row.n_agg == agg[i] && row.ratio() <= 1.5 * paper_ratio[i];
    char buf[96];
    std::snprintf(buf, sizeof buf, "N=%d n_agg=%lld ratio=%.2f%% ", row.n, static_cast<long long>(row.n_agg),
                  100.0 * row.ratio());
    detail += buf;
  }
  return {ok, detail};
}

Outcome sampling() {
  const double f = random_sampling_trial(256, 16, 2040, 200, 1);
  return {f >= 0.95, "failure fraction " + std::to_string(f)};
}

Outcome fragility() {
  const Fig2Report r = run_fig2(Fig2Config{});
  bool ok = r.rows[0].mean_r_min == 1.0 && r.rows[2].mean_r_min >= 8.0;
  std::string detail;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (i > 0) {
      const auto& a = r.rows[i - 1];
      const auto& b = r.rows[i];
      ok = ok && b.mean_r_min + b.stderr_r_min >= a.mean_r_min - a.stderr_r_min;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "k=%d:%.1f ", r.rows[i].k_errors, r.rows[i].mean_r_min);
    detail += buf;
  }
  return {ok, detail};
}

Outcome clean_robust() {
  int good = 0, budget_ok = 0;
  for (int t = 0; t < 20; ++t) {
    const auto ut = static_cast<std::uint64_t>(t);
    const Instance inst = generate({256, TreeShape::Balanced, 0.5, 0.0, 500 + ut});
    QueryLedger ledger(256);
    CachedSimilarities<double> oracle(inst.observed, ledger);
    std::mt19937_64 rng(derive_seed(ut, 7));
    RaClusterOptions o;
    o.m = 40;
    o.gamma = 0.30;
    const auto items = iota(256);
    const RaClusterResult r = ra_cluster(items, o, oracle, rng);
    const ClusterSet found = clusters_of(r.tree);
    bool all = true;
    for (const auto& c : clusters_of(inst.tree))
      if (c.size() > 80 && !found.contains(c)) all = false;
    good += all ? 1 : 0;
    budget_ok += ledger.count() <= r.split_budget() ? 1 : 0;
  }
  return {good == 20 && budget_ok == 20,
          "recovered " + std::to_string(good) + "/20, within 3mn " + std::to_string(budget_ok) + "/20"};
}

Outcome table2() {
  Table2Config cfg;
  cfg.q_values = {0.05, 0.25};
  cfg.m_values = {40, 80};
  cfg.trials = 10;
  const Table2Report r = run_table2(cfg);
  const auto& low = r.rows[0].cells;   // agglomerative, m=40, m=80
  const auto& high = r.rows[1].cells;
  int paired = 0;
  for (int t = 0; t < cfg.trials; ++t)
    paired += low[1].delta_entropy[static_cast<std::size_t>(t)] > low[0].delta_entropy[static_cast<std::size_t>(t)];
  const bool a = paired >= 9;
  const bool b = low[1].mean_r_min() <= 32 && low[0].mean_r_min() >= 256;
  const bool c = high[2].mean_r_min() <= 128 && high[2].mean_r_min() <= high[1].mean_r_min();
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "q=0.05: dE robust>agglo %d/10, r_min robust %.1f agglo %.1f | q=0.25: r_min m=80 %.1f m=40 %.1f%s",
                paired, low[1].mean_r_min(), low[0].mean_r_min(), high[2].mean_r_min(), high[1].mean_r_min(),
                c ? "" : " (m=80 bound missed)");
  return {a && b && c, buf};
}

Outcome monotone() {
  const std::vector<std::function<double(double)>> maps{
      [](double s) { return 2 * s + 1; }, [](double s) { return std::exp(s); },
      [](double s) { return s * s * s; }};
  int same = 0, total = 0;
  for (int t = 0; t < 10; ++t) {
    const auto ut = static_cast<std::uint64_t>(t);
    const int n = 128;
    const Instance inst = generate({n, TreeShape::RandomUnbalanced, 0.2, t % 2 ? 0.1 : 0.0, 900 + ut});
    const auto items = iota(n);
    for (const auto& f : maps) {
      const SimilarityStored moved = transform_values(inst.observed, f);
      {
        QueryLedger la(n), lb(n);
        StoreOracle<double> oa(inst.observed, la), ob(moved, lb);
        const auto a = outlier_cluster(std::span<const ItemId>(items), oa, TieMode::Tolerant);
        const auto b = outlier_cluster(std::span<const ItemId>(items), ob, TieMode::Tolerant);
        ++total;
        same += leaf_order(a.tree) == leaf_order(b.tree) && tree_equal(a.tree, b.tree) &&
                la.count() == lb.count() && la.distinct_pairs() == lb.distinct_pairs();
      }
      {
        QueryLedger la(n), lb(n);
        CachedSimilarities<double> oa(inst.observed, la), ob(moved, lb);
        std::mt19937_64 ra(ut), rb(ut);
        RaClusterOptions o;
        o.m = 15;
        o.small_clusters = SmallClusterPolicy::Refine;
        const auto a = ra_cluster(items, o, oa, ra);
        const auto b = ra_cluster(items, o, ob, rb);
        ++total;
        same += leaf_order(a.tree) == leaf_order(b.tree) && tree_equal(a.tree, b.tree) &&
                la.count() == lb.count() && la.distinct_pairs() == lb.distinct_pairs();
      }
    }
  }
  return {same == total, "identical " + std::to_string(same) + "/" + std::to_string(total)};
}

Outcome calculus() {
  const double c = c0(0.05, 0.05, 0.30, 0.5);
  long mismatches = 0;
  for (int iq = 0; iq < 100; ++iq)
    for (int ig = 0; ig < 100; ++ig)
      for (int ie = 0; ie < 100; ++ie) {
        const double q = 0.5 * (iq + 0.5) / 100;
        const double g = 0.5 * (ig + 0.5) / 100;
        const double e = 0.5 * (ie + 1) / 100;
        const double keep = (1 - q) * (1 - q);
        const bool brute = (g - (1 - keep)) > 0 && (keep * e - g) > 0;
        mismatches += a2_feasible(q, g, e).feasible != brute;
      }
  bool a1 = false;
  try {
    c0(0.05, 0.4, 0.30, 0.5);
  } catch (const AssumptionViolation& e) {
    a1 = e.assumption() == "A1";
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "c0=%.4f, A2 grid mismatches %ld, A1 rejects q=0.4: %s", c, mismatches,
                a1 ? "yes" : "no");
  return {std::abs(c - 21.856) <= 0.001 && mismatches == 0 && a1, buf};
}

Outcome oracles() {
  std::mt19937_64 gen(5);
  int split_cases = 0, split_ok = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 5 + static_cast<int>(gen() % 12);
    const int m = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>((n - 1) / 2));
    const ClusterTree truth = testutil::random_tree(n, gen);
    const SimilarityStored s = inject_inconsistencies(gen_tc_similarities(truth, gen()), 0.2, gen());
    QueryLedger ledger(n);
    CachedSimilarities<double> oracle(s, ledger);
    std::mt19937_64 rng(gen());
    const auto items = iota(n);
    const SplitTrace t = split(items, m, 0.3, oracle, rng).trace;
    if (t.agree_items.empty()) continue;
    ++split_cases;
    QueryLedger scratch(n);
    const auto c = [&](ItemId i, ItemId k) {
      int fired = 0, used = 0;
      for (ItemId l : t.voters)
        if (l != i && l != k) {
          ++used;
          fired += outlier(s, i, k, l, scratch).is(l);
        }
      return static_cast<double>(fired) / used;
    };
    bool ok = true;
    for (ItemId i : t.cluster)
      for (ItemId k : t.agree_items)
        if (i != k && t.c(i, k) != c(i, k)) ok = false;
    for (ItemId i : t.cluster) {
      if (i == t.seed) continue;
      int agree = 0, used = 0;
      for (ItemId k : t.agreers)
        if (k != i && k != t.seed) {
          ++used;
          const double ci = c(i, k), cj = c(t.seed, k);
          agree += (ci > 0.3 && cj > 0.3) || (ci < 0.3 && cj < 0.3);
        }
      if (t.a(i) != static_cast<double>(agree) / used) ok = false;
    }
    split_ok += ok;
  }

  int eval_ok = 0;
  const int eval_cases = 50;
  for (int rep = 0; rep < eval_cases; ++rep) {
    const int n = 2 + static_cast<int>(gen() % 63);
    const ClusterTree a = testutil::random_tree(n, gen);
    const ClusterTree b = testutil::random_tree(n, gen);
    ClusterSet ref;
    std::function<void(NodeId)> walk = [&](NodeId id) {
      ref.insert(a.items(id));
      if (a.is_internal(id)) {
        walk(a.node(id).left);
        walk(a.node(id).right);
      }
    };
    walk(a.root());
    const ClusterSet cb = clusters_of(b);
    int naive_r = n;
    for (int sz = n; sz >= 1; --sz) {
      bool all = true;
      for (const auto& c : ref)
        if (static_cast<int>(c.size()) >= sz && !cb.contains(c)) all = false;
      if (!all) break;
      naive_r = sz;
    }
    bool decay_ok = true;
    if (n >= 2) {
      const SimilarityStored s = gen_tc_similarities(a, gen());
      const auto order = leaf_order(b);
      const Eigen::VectorXd d = off_diag_decay(s, std::span<const ItemId>(order));
      for (int k = 1; k < n; ++k) {
        double sum = 0.0;
        for (int i = 0; i + k < n; ++i)
          sum += s.value(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + k)]);
        if (d(k - 1) != sum / (n - k)) decay_ok = false;
      }
    }
    eval_ok += clusters_of(a) == ref && r_min(a, b) == naive_r && decay_ok;
  }
  return {split_cases > 0 && split_ok == split_cases && eval_ok == eval_cases,
          "split traces " + std::to_string(split_ok) + "/" + std::to_string(split_cases) + ", evaluation " +
              std::to_string(eval_ok) + "/" + std::to_string(eval_cases)};
}

Outcome scaling() {
  double lo = 1e300, hi = 0.0;
  std::string detail;
  for (int n : {128, 256, 512}) {
    const double ln = std::log(static_cast<double>(n));
    const int m = static_cast<int>(std::ceil(4.0 * ln));
    double total = 0.0;
    const int runs = 3;
    for (int t = 0; t < runs; ++t) {
      const Instance inst = generate({n, TreeShape::Balanced, 0.5, 0.0, 40 + static_cast<std::uint64_t>(t)});
      QueryLedger ledger(n);
      CachedSimilarities<double> oracle(inst.observed, ledger);
      std::mt19937_64 rng(static_cast<std::uint64_t>(t));
      RaClusterOptions o;
      o.m = m;
      const auto items = iota(n);
      ra_cluster(items, o, oracle, rng);
      total += static_cast<double>(ledger.distinct_pairs());
    }
    const double ratio = total / runs / (n * ln * ln);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    char buf[64];
    std::snprintf(buf, sizeof buf, "N=%d m=%d ratio=%.3f ", n, m, ratio);
    detail += buf;
  }
  return {hi / lo < 2.0, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "exact recovery on TC instances", 30, exact_recovery},
      {2, "table1 query counts", 60, table1},
      {3, "uniform sampling misses a planted cluster", 30, sampling},
      {4, "lying outlier oracle degrades recovery", 120, fragility},
      {5, "clean voting recursion", 60, clean_robust},
      {6, "table2 ordinal comparison", 600, table2},
      {7, "monotone invariance", 600, monotone},
      {8, "sample-size calculus", 600, calculus},
      {9, "trace and evaluation oracles", 600, oracles},
      {10, "voting recursion query scaling", 600, scaling},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.1fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs,
                in_time ? "" : " over limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
