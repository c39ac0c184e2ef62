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
#include "actclust/synthesis.hpp"
#include "test_util.hpp"

using namespace actclust;
using testutil::J;
using testutil::L;

namespace {

/// Reference r_min from a plain scan over every candidate size.
int naive_r_min(const ClusterTree& truth, const ClusterTree& est) {
  const ClusterSet t = clusters_of(truth);
  const ClusterSet e = clusters_of(est);
  for (int s = 1; s <= truth.size(); ++s) {
    bool all = true;
    for (const auto& c : t)
      if (static_cast<int>(c.size()) >= s && !e.contains(c)) all = false;
    if (all) return s;
  }
  return truth.size();
}

/// Reference cluster family: the item set below every node, collected by recursion.
void naive_clusters(const ClusterTree& t, NodeId id, ClusterSet& out) {
  out.insert(t.items(id));
  if (t.is_internal(id)) {
    naive_clusters(t, t.node(id).left, out);
    naive_clusters(t, t.node(id).right, out);
  }
}

}  // namespace

TEST_CASE("r_min") {
  const ClusterTree t = gen_balanced_tree(16);
  CHECK(r_min(t, t) == 1);
  std::vector<ItemId> all(16);
  for (int i = 0; i < 16; ++i) all[static_cast<std::size_t>(i)] = i;
  CHECK(r_min(t, ClusterTree::flat(all)) == 9);
  CHECK(recovered_cluster_fraction(t, t) == 1.0);

  const ClusterTree big = gen_balanced_tree(512);
  std::vector<ItemId> items = big.items();
  std::vector<ItemId> odd, even;
  for (ItemId x : items) (x % 2 ? odd : even).push_back(x);
  // Interleaved halves break every nontrivial cluster.
  // Every nontrivial cluster is broken, but the root always matches.
  CHECK(r_min(big, J(ClusterTree::flat(odd), ClusterTree::flat(even))) == 257);
  const ClusterTree eight = gen_balanced_tree(8);
  CHECK(r_min(eight, ClusterTree::flat(eight.items())) == 5);
  CHECK_THROWS_AS(r_min(t, gen_balanced_tree(8)), std::invalid_argument);
}

TEST_CASE("r_min and clusters_of match naive versions") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 63);
    const ClusterTree a = testutil::random_tree(n, rng);
    const ClusterTree b = rep % 3 == 0 ? a : testutil::random_tree(n, rng);
    ClusterSet ref;
    naive_clusters(a, a.root(), ref);
    CHECK(clusters_of(a) == ref);
    CHECK(r_min(a, b) == naive_r_min(a, b));
  }
}

TEST_CASE("r_min does not drop when a recovered cluster is lost") {
  const ClusterTree truth = gen_balanced_tree(32);
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const ClusterTree est = testutil::random_tree(32, rng);
    // Replace the estimate's left child by a flat leaf: it only loses clusters.
    TreeBuilder b;
    const NodeId right = b.graft(ClusterTree::flat(est.items(est.node(est.root()).right)));
    const NodeId left = b.graft(ClusterTree::flat(est.items(est.node(est.root()).left)));
    const ClusterTree coarse = b.build(b.join(left, right));
    CHECK(r_min(truth, coarse) >= r_min(truth, est));
  }
}

TEST_CASE("off-diagonal decay") {
  SUBCASE("two items") {
    const SimilarityStored s = gen_tc_similarities(gen_balanced_tree(2), 1);
    const std::vector<ItemId> order{0, 1};
    const Eigen::VectorXd d = off_diag_decay(s, std::span<const ItemId>(order));
    REQUIRE(d.size() == 1);
    CHECK(d(0) == s.value(0, 1));
  }
  SUBCASE("constant store") {
    const SimilarityStored s(Eigen::MatrixXd::Constant(6, 6, 0.7));
    std::vector<ItemId> six{0, 1, 2, 3, 4, 5};
    const Eigen::VectorXd d = off_diag_decay(s, std::span<const ItemId>(six));
    for (Eigen::Index k = 0; k < d.size(); ++k) CHECK(d(k) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(decay_entropy(d) == doctest::Approx(std::log(5.0)));
    CHECK(ordering_entropy(s, std::span<const ItemId>(six), 3).delta == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("balanced four keeps neighbours close") {
    const SimilarityStored s = gen_tc_similarities(gen_balanced_tree(4), 4);
    const std::vector<ItemId> order{0, 1, 2, 3};
    const Eigen::VectorXd d = off_diag_decay(s, std::span<const ItemId>(order));
    CHECK(d(0) > d(2));
  }
  SUBCASE("matches a naive double loop") {
    const Instance inst = generate({64, TreeShape::RandomUnbalanced, 0.1, 0.2, 5});
    std::vector<ItemId> order = inst.tree.items();
    std::mt19937_64 rng(3);
    std::shuffle(order.begin(), order.end(), rng);
    const Eigen::VectorXd d = off_diag_decay(inst.observed, std::span<const ItemId>(order));
    for (int k = 1; k < 64; ++k) {
      double sum = 0.0;
      for (int i = 0; i + k < 64; ++i)
        sum += inst.observed.value(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + k)]);
      CHECK(d(k - 1) == sum / (64 - k));
    }
  }
  SUBCASE("rejects a non-permutation") {
    const SimilarityStored s = gen_tc_similarities(gen_balanced_tree(4), 4);
    const std::vector<ItemId> bad{0, 1, 1, 3};
    CHECK_THROWS_AS(off_diag_decay(s, std::span<const ItemId>(bad)), std::invalid_argument);
  }
}

TEST_CASE("ordering entropy") {
  const Instance inst = generate({512, TreeShape::Balanced, 0.5, 0.0, 6});
  const std::vector<ItemId> truth_order = leaf_order(inst.tree);
  const OrderingEntropy good = ordering_entropy(inst.observed, std::span<const ItemId>(truth_order), 1);
  CHECK(good.entropy >= 0.0);
  CHECK(good.entropy <= std::log(511.0));
  CHECK(good.delta > 0.1);

  std::vector<ItemId> reversed(truth_order.rbegin(), truth_order.rend());
  CHECK(ordering_entropy(inst.observed, std::span<const ItemId>(reversed), 1).entropy ==
        doctest::Approx(good.entropy).epsilon(1e-12));

  const double reference = random_order_entropy(inst.observed, 1);
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<ItemId> order = truth_order;
    std::mt19937_64 rng(1000 + seed);
    std::shuffle(order.begin(), order.end(), rng);
    mean += reference - decay_entropy(off_diag_decay(inst.observed, std::span<const ItemId>(order)));
  }
  CHECK(std::abs(mean / 50) <= 0.05);
  CHECK(good.delta > std::abs(mean / 50));
}

TEST_CASE("random sampling threshold") {
  CHECK(random_sampling_threshold(512, 8) == 32704);
  CHECK(random_sampling_threshold(256, 16) == 4080);
  CHECK(random_sampling_threshold(100, 100) == 99);
}

TEST_CASE("random sampling trials") {
  CHECK(random_sampling_trial(256, 16, 256 * 255 / 2, 20, 1) == 0.0);
  CHECK(random_sampling_trial(256, 16, 0, 20, 1) == 1.0);
  CHECK(random_sampling_trial(256, 16, 2040, 200, 1) >= 0.95);
  double prev = 1.0;
  for (std::int64_t n : {2000, 8000, 16000, 32640}) {
    const double f = random_sampling_trial(256, 16, n, 200, 7);
    CHECK(f <= prev + 0.05);
    prev = f;
  }
}

TEST_CASE("evaluation report") {
  const Instance inst = generate({64, TreeShape::Balanced, 0.5, 0.0, 2});
  const EvalReport r = evaluate(inst.tree, inst.tree, inst.observed, 3);
  CHECK(r.r_min == 1);
  CHECK(r.recovered_cluster_fraction == 1.0);
  CHECK(r.s_hat.size() == 63);
  const nlohmann::json j = r.to_json();
  CHECK(j["r_min"] == 1);
  CHECK(j.contains("delta_entropy"));
}
