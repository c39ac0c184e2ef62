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

#include "actclust/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace actclust {

NodeId TreeBuilder::leaf(ItemId item) {
  if (item < 0) throw std::invalid_argument("tree: negative item id " + std::to_string(item));
  TreeNode node;
  node.kind = NodeKind::Leaf;
  node.item = item;
  node.size = 1;
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TreeBuilder::join(NodeId left, NodeId right) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (left < 0 || right < 0 || left >= n || right >= n || left == right)
    throw std::invalid_argument("tree: join of invalid node ids");
  TreeNode node;
  node.kind = NodeKind::Internal;
  node.left = left;
  node.right = right;
  node.size = nodes_[left].size + nodes_[right].size;
  nodes_.push_back(std::move(node));
  return n;
}

NodeId TreeBuilder::flat(std::vector<ItemId> members) {
  if (members.empty()) throw std::invalid_argument("tree: empty flat cluster");
  std::sort(members.begin(), members.end());
  if (members.front() < 0) throw std::invalid_argument("tree: negative item id in flat cluster");
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    throw std::invalid_argument("tree: duplicate item in flat cluster");
  TreeNode node;
  node.kind = NodeKind::Flat;
  node.size = static_cast<std::int32_t>(members.size());
  node.members = std::move(members);
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TreeBuilder::graft(const ClusterTree& tree) {
  if (tree.empty()) throw std::invalid_argument("tree: cannot graft an empty tree");
  // Post-order so children exist before their parent.
  std::vector<NodeId> mapped(tree.node_count(), kNoNode);
  std::vector<std::pair<NodeId, bool>> stack{{tree.root(), false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const TreeNode& n = tree.node(id);
    switch (n.kind) {
      case NodeKind::Leaf: mapped[id] = leaf(n.item); break;
      case NodeKind::Flat: mapped[id] = flat(n.members); break;
      case NodeKind::Internal:
        if (expanded) {
          mapped[id] = join(mapped[n.left], mapped[n.right]);
        } else {
          stack.emplace_back(id, true);
          stack.emplace_back(n.right, false);
          stack.emplace_back(n.left, false);
        }
        break;
    }
  }
  return mapped[tree.root()];
}

ClusterTree TreeBuilder::build(NodeId root) const {
  if (root < 0 || root >= static_cast<NodeId>(nodes_.size()))
    throw std::invalid_argument("tree: build from invalid root");

  ClusterTree out;
  out.nodes_.reserve(nodes_.size());
  out.parent_.reserve(nodes_.size());

  // Pre-order copy; children are patched once they are placed.
  struct Pending {
    NodeId source;
    NodeId parent;
    bool is_right;
  };
  std::vector<Pending> stack{{root, kNoNode, false}};
  std::vector<ItemId> seen;
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const TreeNode& src = nodes_[p.source];
    const auto id = static_cast<NodeId>(out.nodes_.size());
    TreeNode copy = src;
    copy.left = copy.right = kNoNode;
    out.nodes_.push_back(std::move(copy));
    out.parent_.push_back(p.parent);
    if (p.parent != kNoNode) {
      (p.is_right ? out.nodes_[p.parent].right : out.nodes_[p.parent].left) = id;
    }
    if (src.kind == NodeKind::Internal) {
      stack.push_back({src.right, id, true});
      stack.push_back({src.left, id, false});
    } else if (src.kind == NodeKind::Leaf) {
      seen.push_back(src.item);
    } else {
      seen.insert(seen.end(), src.members.begin(), src.members.end());
    }
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw std::invalid_argument("tree: item appears more than once");
  out.root_ = 0;
  return out;
}

ClusterTree ClusterTree::leaf(ItemId item) {
  TreeBuilder b;
  return b.build(b.leaf(item));
}

ClusterTree ClusterTree::join(const ClusterTree& left, const ClusterTree& right) {
  TreeBuilder b;
  const NodeId l = b.graft(left);
  const NodeId r = b.graft(right);
  return b.build(b.join(l, r));
}

ClusterTree ClusterTree::flat(std::vector<ItemId> members) {
  TreeBuilder b;
  return b.build(b.flat(std::move(members)));
}

std::vector<ItemId> ClusterTree::items(NodeId id) const {
  std::vector<ItemId> out;
  out.reserve(static_cast<std::size_t>(size(id)));
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const TreeNode& n = nodes_.at(stack.back());
    stack.pop_back();
    switch (n.kind) {
      case NodeKind::Leaf: out.push_back(n.item); break;
      case NodeKind::Flat: out.insert(out.end(), n.members.begin(), n.members.end()); break;
      case NodeKind::Internal:
        stack.push_back(n.right);
        stack.push_back(n.left);
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int ClusterTree::depth() const {
  if (empty()) return 0;
  int best = 0;
  std::vector<std::pair<NodeId, int>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& n = nodes_[id];
    if (n.kind == NodeKind::Internal) {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return best;
}

ClusterSet clusters_of(const ClusterTree& tree) {
  ClusterSet out;
  if (tree.empty()) return out;
  // Children precede parents in reverse pre-order, so item lists can be merged
  // bottom-up without re-walking subtrees.
  std::vector<std::vector<ItemId>> below(tree.node_count());
  for (auto id = static_cast<NodeId>(tree.node_count()) - 1; id >= 0; --id) {
    const TreeNode& n = tree.node(id);
    std::vector<ItemId>& set = below[id];
    switch (n.kind) {
      case NodeKind::Leaf: set = {n.item}; break;
      case NodeKind::Flat: set = n.members; break;
      case NodeKind::Internal:
        std::merge(below[n.left].begin(), below[n.left].end(), below[n.right].begin(),
                   below[n.right].end(), std::back_inserter(set));
        break;
    }
    out.insert(set);
  }
  return out;
}

bool is_laminar(const ClusterSet& clusters) {
  for (auto a = clusters.begin(); a != clusters.end(); ++a) {
    for (auto b = std::next(a); b != clusters.end(); ++b) {
      std::vector<ItemId> common;
      std::set_intersection(a->begin(), a->end(), b->begin(), b->end(), std::back_inserter(common));
      if (!common.empty() && common.size() != a->size() && common.size() != b->size()) return false;
    }
  }
  return true;
}

NodeId select_subtree(const ClusterTree& tree, NodeId root) {
  if (tree.size(root) <= 2)
    throw std::invalid_argument("select_subtree: needs more than 2 items, got " +
                                std::to_string(tree.size(root)));
  return centroid_descent(
      root, [&](NodeId id) { return tree.size(id); },
      [&](NodeId id) -> std::optional<std::pair<NodeId, NodeId>> {
        const TreeNode& n = tree.node(id);
        if (n.kind != NodeKind::Internal) return std::nullopt;
        return std::make_pair(n.left, n.right);
      });
}

NodeId select_subtree(const ClusterTree& tree) { return select_subtree(tree, tree.root()); }

ItemId representative(const ClusterTree& tree, NodeId id) {
  for (;;) {
    const TreeNode& n = tree.node(id);
    if (n.kind == NodeKind::Leaf) return n.item;
    if (n.kind == NodeKind::Flat) return n.members.front();
    id = n.left;
  }
}

std::pair<ItemId, ItemId> separated_pair(const ClusterTree& tree, NodeId id) {
  const TreeNode& n = tree.node(id);
  if (n.kind != NodeKind::Internal)
    throw std::invalid_argument("separated_pair: node is not internal");
  return {representative(tree, n.left), representative(tree, n.right)};
}

std::vector<ItemId> leaf_order(const ClusterTree& tree) {
  std::vector<ItemId> out;
  if (tree.empty()) return out;
  out.reserve(static_cast<std::size_t>(tree.size()));
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    const TreeNode& n = tree.node(stack.back());
    stack.pop_back();
    switch (n.kind) {
      case NodeKind::Leaf: out.push_back(n.item); break;
      case NodeKind::Flat: out.insert(out.end(), n.members.begin(), n.members.end()); break;
      case NodeKind::Internal:
        stack.push_back(n.right);
        stack.push_back(n.left);
        break;
    }
  }
  return out;
}

bool tree_equal(const ClusterTree& a, const ClusterTree& b) {
  if (a.items() != b.items()) throw std::invalid_argument("tree_equal: item universes differ");
  return clusters_of(a) == clusters_of(b);
}

double balance_factor(const ClusterTree& tree, NodeId id) {
  const TreeNode& n = tree.node(id);
  if (n.kind != NodeKind::Internal)
    throw std::invalid_argument("balance_factor: node is not internal");
  const int smaller = std::min(tree.size(n.left), tree.size(n.right));
  return static_cast<double>(smaller) / static_cast<double>(n.size);
}

double min_balance_factor(const ClusterTree& tree) {
  double best = 0.5;
  for (NodeId id = 0; id < static_cast<NodeId>(tree.node_count()); ++id) {
    if (tree.is_internal(id)) best = std::min(best, balance_factor(tree, id));
  }
  return best;
}

int max_depth_bound(int n_items, double eta) {
  if (!(eta > 0.0 && eta <= 0.5))
    throw std::invalid_argument("max_depth_bound: eta must lie in (0, 1/2]");
  if (n_items < 2) throw std::invalid_argument("max_depth_bound: needs N >= 2");
  const double raw = std::log(static_cast<double>(n_items)) / std::log(1.0 / (1.0 - eta));
  // Absorb rounding noise so exact powers (512 at eta = 1/2) land on the integer.
  const int bound = static_cast<int>(std::ceil(raw - 1e-9));
  // A binary tree over N leaves can never be deeper than N - 1.
  return std::min(bound, n_items - 1);
}

}  // namespace actclust
