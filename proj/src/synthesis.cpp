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

#include "actclust/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "actclust/rng.hpp"

namespace actclust {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

NodeId balanced(TreeBuilder& b, ItemId first, int n) {
  if (n == 1) return b.leaf(first);
  const NodeId l = balanced(b, first, n / 2);
  const NodeId r = balanced(b, first + n / 2, n / 2);
  return b.join(l, r);
}

NodeId random_split(TreeBuilder& b, ItemId first, int n, double eta_min, std::mt19937_64& rng) {
  if (n == 1) return b.leaf(first);
  const int hi = n / 2;
  const int lo = std::clamp(static_cast<int>(std::ceil(eta_min * n - 1e-9)), 1, hi);
  const int k = std::uniform_int_distribution<int>(lo, hi)(rng);
  const bool small_left = std::bernoulli_distribution(0.5)(rng);
  const int left_size = small_left ? k : n - k;
  const NodeId l = random_split(b, first, left_size, eta_min, rng);
  const NodeId r = random_split(b, first + left_size, n - left_size, eta_min, rng);
  return b.join(l, r);
}

}  // namespace

void GenConfig::validate() const {
  if (n_items < 2) throw std::invalid_argument("config: N must be >= 2");
  if (shape == TreeShape::Balanced && !is_power_of_two(n_items))
    throw std::invalid_argument("config: balanced trees need N a power of 2");
  if (shape == TreeShape::RandomUnbalanced && !(eta_min > 0.0 && eta_min <= 0.5))
    throw std::invalid_argument("config: eta_min must lie in (0, 1/2]");
  if (!(q >= 0.0 && q < 0.5)) throw std::invalid_argument("config: q must lie in [0, 1/2)");
}

nlohmann::json GenConfig::to_json() const {
  nlohmann::json j{{"n", n_items}, {"shape", to_string(shape)}, {"q", q}, {"seed", seed}};
  if (shape == TreeShape::RandomUnbalanced) j["eta_min"] = eta_min;
  return j;
}

TreeShape parse_shape(const std::string& name) {
  if (name == "balanced") return TreeShape::Balanced;
  if (name == "random" || name == "random-unbalanced" || name == "unbalanced")
    return TreeShape::RandomUnbalanced;
  throw std::invalid_argument("unknown tree shape '" + name + "'");
}

std::string to_string(TreeShape shape) {
  return shape == TreeShape::Balanced ? "balanced" : "random-unbalanced";
}

ClusterTree gen_balanced_tree(int n_items) {
  if (n_items < 1 || !is_power_of_two(n_items))
    throw std::invalid_argument("gen_balanced_tree: N must be a power of 2, got " +
                                std::to_string(n_items));
  TreeBuilder b;
  return b.build(balanced(b, 0, n_items));
}

ClusterTree gen_random_tree(int n_items, double eta_min, std::uint64_t seed) {
  if (!(eta_min > 0.0 && eta_min <= 0.5))
    throw std::invalid_argument("gen_random_tree: eta_min must lie in (0, 1/2]");
  if (n_items < 1) throw std::invalid_argument("gen_random_tree: N must be positive");
  std::mt19937_64 rng(seed);
  TreeBuilder b;
  return b.build(random_split(b, 0, n_items, eta_min, rng));
}

Eigen::MatrixXi nca_depths(const ClusterTree& tree) {
  const int n = tree.size();
  Eigen::MatrixXi depth = Eigen::MatrixXi::Zero(n, n);
  std::vector<std::pair<NodeId, int>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    const TreeNode& node = tree.node(id);
    if (node.kind == NodeKind::Flat) {
      for (ItemId a : node.members)
        for (ItemId b : node.members)
          if (a != b) depth(a, b) = d;
      continue;
    }
    if (node.kind != NodeKind::Internal) continue;
    const auto left = tree.items(node.left);
    const auto right = tree.items(node.right);
    for (ItemId a : left)
      for (ItemId b : right) depth(a, b) = depth(b, a) = d;
    stack.emplace_back(node.left, d + 1);
    stack.emplace_back(node.right, d + 1);
  }
  return depth;
}

SimilarityStored gen_tc_similarities(const ClusterTree& tree, std::uint64_t seed) {
  const int n = tree.size();
  const auto items = tree.items();
  for (int i = 0; i < n; ++i)
    if (items[i] != i) throw std::invalid_argument("gen_tc_similarities: items must be 0..N-1");
  const Eigen::MatrixXi depth = nca_depths(tree);
  std::mt19937_64 rng(seed);
  // Open interval (0, kTcJitter): zero would let the root pairs touch 0.
  std::uniform_real_distribution<double> jitter(0.0, kTcJitter);
  SimilarityStored::Matrix values = SimilarityStored::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double u = jitter(rng);
      while (u <= 0.0) u = jitter(rng);
      values(i, j) = values(j, i) = depth(i, j) + u;
    }
  }
  SimilarityStored::Mask mask = SimilarityStored::Mask::Constant(n, n, true);
  return SimilarityStored(std::move(values), std::move(mask));
}

SimilarityStored inject_inconsistencies(const SimilarityStored& store, double q, std::uint64_t seed) {
  if (!(q >= 0.0 && q < 0.5))
    throw std::invalid_argument("inject_inconsistencies: q must lie in [0, 1/2)");
  const Index n = store.size();
  SimilarityStored::Matrix values = store.values();
  SimilarityStored::Mask mask =
      store.has_mask() ? store.mask() : SimilarityStored::Mask::Constant(n, n, true);
  if (q > 0.0) {
    const auto [lo, hi] = store.value_range();
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(q);
    std::uniform_real_distribution<double> redraw(lo, hi);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (!coin(rng)) continue;
        mask(i, j) = mask(j, i) = false;
        values(i, j) = values(j, i) = redraw(rng);
      }
    }
  }
  return SimilarityStored(std::move(values), std::move(mask));
}

Instance generate(const GenConfig& config) {
  config.validate();
  ClusterTree tree = config.shape == TreeShape::Balanced
                         ? gen_balanced_tree(config.n_items)
                         : gen_random_tree(config.n_items, config.eta_min, derive_seed(config.seed, 0));
  SimilarityStored clean = gen_tc_similarities(tree, derive_seed(config.seed, 1));
  SimilarityStored observed = inject_inconsistencies(clean, config.q, derive_seed(config.seed, 2));
  return {std::move(tree), std::move(clean), std::move(observed)};
}

}  // namespace actclust
