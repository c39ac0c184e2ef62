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

#include <doctest.h>

#include <cmath>

#include "actclust/evaluation.hpp"
#include "actclust/outlier_cluster.hpp"
#include "actclust/synthesis.hpp"
#include "test_util.hpp"

using namespace actclust;
using testutil::J;
using testutil::L;

namespace {

struct Run {
  OutlierClusterResult result;
  std::int64_t distinct = 0;
  std::int64_t count = 0;
};

Run cluster_store(const SimilarityStored& s, std::span<const ItemId> order, TieMode ties = TieMode::Strict) {
  QueryLedger ledger(s.size());
  StoreOracle<double> oracle(s, ledger);
  Run r{outlier_cluster(order, oracle, ties)};
  r.distinct = ledger.distinct_pairs();
  r.count = ledger.count();
  return r;
}

}  // namespace

TEST_CASE("query_bound") {
  CHECK(query_bound(128) == 4596);
  CHECK(query_bound(256) == 10504);
  CHECK(query_bound(2) == 11);
}

TEST_CASE("small inputs") {
  SUBCASE("two items need no queries") {
    const SimilarityStored s = gen_tc_similarities(gen_balanced_tree(2), 1);
    const auto order = insertion_order(2);
    const Run r = cluster_store(s, order);
    CHECK(tree_equal(r.result.tree, J(L(0), L(1))));
    CHECK(r.count == 0);
  }
  SUBCASE("three items take one test") {
    const ClusterTree truth = J(J(L(0), L(1)), L(2));
    const SimilarityStored s = gen_tc_similarities(truth, 1);
    const auto order = insertion_order(3);
    const Run r = cluster_store(s, order);
    CHECK(tree_equal(r.result.tree, truth));
    CHECK(r.distinct == 3);
    CHECK(r.result.tests == 1);
  }
  SUBCASE("fewer than two items") {
    const SimilarityStored s = gen_tc_similarities(gen_balanced_tree(2), 1);
    QueryLedger ledger(2);
    StoreOracle<double> oracle(s, ledger);
    const std::vector<ItemId> one{0};
    CHECK_THROWS_AS(outlier_cluster(std::span<const ItemId>(one), oracle), std::invalid_argument);
  }
}

TEST_CASE("balanced 128 is recovered within budget") {
  const Instance inst = generate({128, TreeShape::Balanced, 0.5, 0.0, 3});
  const auto order = insertion_order(128);
  const Run r = cluster_store(inst.observed, order);
  CHECK(tree_equal(r.result.tree, inst.tree));
  CHECK(r.distinct <= 4596);
  CHECK(r.distinct < 1500);
  CHECK(r.count == 3 * r.result.tests);
}

TEST_CASE("exact recovery on random instances") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 200);
    const ClusterTree truth = testutil::random_tree(n, rng);
    const SimilarityStored s = gen_tc_similarities(truth, rng());
    const auto order = insertion_order(n);
    const Run r = cluster_store(s, order);
    CAPTURE(n);
    CHECK(tree_equal(r.result.tree, truth));
    CHECK(r.distinct <= query_bound(n));
    CHECK_FALSE(r.result.best_effort);
  }
}

TEST_CASE("insertion order changes cost, not the result") {
  const Instance inst = generate({200, TreeShape::RandomUnbalanced, 0.1, 0.0, 8});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto order = insertion_order(200, seed);
    CHECK(tree_equal(cluster_store(inst.observed, order).result.tree, inst.tree));
  }
}

TEST_CASE("strictly increasing maps change nothing") {
  const Instance inst = generate({96, TreeShape::RandomUnbalanced, 0.15, 0.0, 12});
  const auto order = insertion_order(96);
  const Run base = cluster_store(inst.observed, order);
  const auto cube = transform_values(inst.observed, [](double s) { return s * s * s; });
  const Run moved = cluster_store(cube, order);
  CHECK(leaf_order(moved.result.tree) == leaf_order(base.result.tree));
  CHECK(moved.count == base.count);
  CHECK(moved.distinct == base.distinct);
}

TEST_CASE("ties") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(4, 4, 1.0);
  const SimilarityStored flat(m);
  const auto order = insertion_order(4);
  CHECK_THROWS_AS(cluster_store(flat, order), TieError);
  const Run r = cluster_store(flat, order, TieMode::Tolerant);
  CHECK(r.result.best_effort);
  CHECK(r.result.tree.size() == 4);
}

TEST_CASE("lying oracle degrades recovery") {
  const Instance inst = generate({256, TreeShape::Balanced, 0.5, 0.0, 1});
  const auto order = insertion_order(256);
  double total = 0.0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    QueryLedger clean_ledger(256);
    StoreOracle<double> clean(inst.observed, clean_ledger);
    const auto calls = outlier_cluster(std::span<const ItemId>(order), clean).tests;
    QueryLedger ledger(256);
    auto faulty = faulty_outlier_wrapper(inst.observed, ledger, 2, static_cast<std::uint64_t>(t), calls);
    total += r_min(inst.tree, outlier_cluster(std::span<const ItemId>(order), faulty, TieMode::Tolerant).tree);
  }
  CHECK(total / trials > 1.0);
}
