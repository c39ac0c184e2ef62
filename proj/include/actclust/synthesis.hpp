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

#ifndef ACTCLUST_SYNTHESIS_HPP
#define ACTCLUST_SYNTHESIS_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "actclust/similarity.hpp"
#include "actclust/tree.hpp"

namespace actclust {

enum class TreeShape { Balanced, RandomUnbalanced };

struct GenConfig {
  int n_items = 128;
  TreeShape shape = TreeShape::Balanced;
  double eta_min = 0.5;  // only read for RandomUnbalanced
  double q = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
  nlohmann::json to_json() const;
};

TreeShape parse_shape(const std::string& name);
std::string to_string(TreeShape shape);

/// Complete balanced tree over 0..N-1 in left-to-right order. N must be a power of 2.
ClusterTree gen_balanced_tree(int n_items);

/// Recursive random splits: a cluster of n splits into (k, n - k) with k uniform
/// on [ceil(eta_min n), floor(n / 2)] (at least 1), the smaller part placed on a
/// random side. Leaves are numbered 0..N-1 left to right.
ClusterTree gen_random_tree(int n_items, double eta_min, std::uint64_t seed);

/// Jitter added on top of the nearest-common-ancestor depth.
inline constexpr double kTcJitter = 0.5;

/// s(i,j) = depth(NCA(i,j)) + U(0, kTcJitter), root depth 0. Satisfies the tight
/// clustering condition for `tree`; the consistency mask is all true.
SimilarityStored gen_tc_similarities(const ClusterTree& tree, std::uint64_t seed);

/// Marks each pair inconsistent independently with probability q and redraws
/// its value uniformly over the clean store's value range.
SimilarityStored inject_inconsistencies(const SimilarityStored& store, double q, std::uint64_t seed);

/// Depth of the nearest common ancestor for every pair of items (root = 0).
Eigen::MatrixXi nca_depths(const ClusterTree& tree);

struct Instance {
  ClusterTree tree;
  SimilarityStored clean;
  SimilarityStored observed;
};

/// Tree, clean TC store and (possibly) corrupted store, all derived from config.seed.
Instance generate(const GenConfig& config);

}  // namespace actclust

#endif  // ACTCLUST_SYNTHESIS_HPP
