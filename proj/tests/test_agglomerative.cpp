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

#include "actclust/agglomerative.hpp"
#include "actclust/synthesis.hpp"
#include "test_util.hpp"

using namespace actclust;
using testutil::J;
using testutil::L;

TEST_CASE("two items") {
  const SimilarityStored s = gen_tc_similarities(gen_balanced_tree(2), 1);
  QueryLedger ledger(2);
  CHECK(tree_equal(agglomerate(s, Linkage::Average, ledger), J(L(0), L(1))));
  CHECK(ledger.distinct_pairs() == 1);
}

TEST_CASE("every pair is read once") {
  for (int n : {128, 512}) {
    const Instance inst = generate({n, TreeShape::Balanced, 0.5, 0.0, 1});
    QueryLedger ledger(n);
    const ClusterTree t = agglomerate(inst.observed, Linkage::Average, ledger);
    CHECK(tree_equal(t, inst.tree));
    CHECK(ledger.distinct_pairs() == static_cast<std::int64_t>(n) * (n - 1) / 2);
    CHECK(ledger.count() == ledger.distinct_pairs());
  }
  CHECK(static_cast<std::int64_t>(128) * 127 / 2 == 8128);
  CHECK(static_cast<std::int64_t>(512) * 511 / 2 == 130816);
}

TEST_CASE("all linkages recover TC trees") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 120);
    const ClusterTree truth = testutil::random_tree(n, rng);
    const SimilarityStored s = gen_tc_similarities(truth, rng());
    for (Linkage link : {Linkage::Single, Linkage::Average, Linkage::Complete}) {
      QueryLedger ledger(n);
      CAPTURE(n);
      CHECK(tree_equal(agglomerate(s, link, ledger), truth));
    }
  }
}

TEST_CASE("merge ties go to the lexicographically smallest pair") {
  // All similarities equal: merges proceed (0,1), then ({0,1},2), ...
  const SimilarityStored s(Eigen::MatrixXd::Constant(4, 4, 1.0));
  QueryLedger ledger(4);
  const ClusterTree t = agglomerate(s, Linkage::Average, ledger);
  CHECK(tree_equal(t, J(J(J(L(0), L(1)), L(2)), L(3))));
  // (2,3) and (0,1) tie above everything else; (0,1) wins, then {0,1} with {2,3}.
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(4, 4, 0.1);
  m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = 0.9;
  QueryLedger l2(4);
  CHECK(tree_equal(agglomerate(SimilarityStored(m), Linkage::Single, l2), J(J(L(0), L(1)), J(L(2), L(3)))));
}

TEST_CASE("linkage names") {
  CHECK(parse_linkage("single") == Linkage::Single);
  CHECK(to_string(Linkage::Complete) == "complete");
  CHECK_THROWS(parse_linkage("ward"));
}
