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

#ifndef ACTCLUST_AGGLOMERATIVE_HPP
#define ACTCLUST_AGGLOMERATIVE_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actclust/similarity.hpp"
#include "actclust/tree.hpp"

namespace actclust {

/// Inter-cluster similarity: max (single), mean (average) or min (complete)
/// over cross pairs. The most similar pair of clusters merges first.
enum class Linkage { Single, Average, Complete };

Linkage parse_linkage(const std::string& name);
std::string to_string(Linkage linkage);

/// Bottom-up agglomerative clustering on the full similarity matrix. Every
/// pair is read through the ledger once up front. Ties go to the pair of
/// clusters whose (smallest item, smallest item) is lexicographically least.
template <typename Scalar>
ClusterTree agglomerate(const SimilarityStore<Scalar>& store, Linkage linkage, QueryLedger& ledger) {
  const Index n = store.size();
  if (n < 2) throw std::invalid_argument("agglomerate: needs at least 2 items");

  Eigen::MatrixXd sim(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      sim(i, j) = sim(j, i) =
          static_cast<double>(query(store, static_cast<ItemId>(i), static_cast<ItemId>(j), ledger));

  TreeBuilder builder;
  std::vector<NodeId> node(n);
  std::vector<Index> count(n, 1);
  // Active slots ordered by their smallest item, so the first hit in a scan is
  // already the lexicographically smallest among equal similarities.
  std::vector<Index> active(n);
  for (Index i = 0; i < n; ++i) {
    node[i] = builder.leaf(static_cast<ItemId>(i));
    active[i] = i;
  }

  while (active.size() > 1) {
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    double best = sim(active[0], active[1]);
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double s = sim(active[x], active[y]);
        if (s > best) {
          best = s;
          best_a = x;
          best_b = y;
        }
      }
    }
    const Index a = active[best_a];
    const Index b = active[best_b];
    for (Index c : active) {
      if (c == a || c == b) continue;
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Single: merged = std::max(sim(a, c), sim(b, c)); break;
        case Linkage::Complete: merged = std::min(sim(a, c), sim(b, c)); break;
        case Linkage::Average:
          merged = (static_cast<double>(count[a]) * sim(a, c) + static_cast<double>(count[b]) * sim(b, c)) /
                   static_cast<double>(count[a] + count[b]);
          break;
      }
      sim(a, c) = sim(c, a) = merged;
    }
    node[a] = builder.join(node[a], node[b]);
    count[a] += count[b];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
  }
  return builder.build(node[active.front()]);
}

}  // namespace actclust

#endif  // ACTCLUST_AGGLOMERATIVE_HPP
