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

#ifndef ACTCLUST_TREE_HPP
#define ACTCLUST_TREE_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace actclust {

using ItemId = std::int32_t;
using NodeId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

enum class NodeKind : std::uint8_t { Leaf, Internal, Flat };

/// One node of a cluster tree. Flat nodes hold an unresolved cluster whose
/// members are kept in ascending order.
struct TreeNode {
  NodeKind kind = NodeKind::Leaf;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  ItemId item = -1;
  std::vector<ItemId> members;
  std::int32_t size = 0;
};

class ClusterTree;

/// Arena builder for cluster trees. Node ids returned by leaf/join/flat are
/// only meaningful to this builder; build() compacts, validates and freezes.
class TreeBuilder {
 public:
  NodeId leaf(ItemId item);
  NodeId join(NodeId left, NodeId right);
  NodeId flat(std::vector<ItemId> members);

  /// Splices a copy of `tree` into this arena and returns the id of its root.
  NodeId graft(const ClusterTree& tree);

  std::int32_t size(NodeId id) const { return nodes_.at(id).size; }

  ClusterTree build(NodeId root) const;

 private:
  std::vector<TreeNode> nodes_;
};

/// Immutable rooted binary tree whose leaves are item ids. Internal nodes are
/// clusters; Flat nodes are leaf-level clusters left unresolved.
class ClusterTree {
 public:
  ClusterTree() = default;

  static ClusterTree leaf(ItemId item);
  static ClusterTree join(const ClusterTree& left, const ClusterTree& right);
  static ClusterTree flat(std::vector<ItemId> members);

  bool empty() const { return nodes_.empty(); }
  NodeId root() const { return root_; }
  std::size_t node_count() const { return nodes_.size(); }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  NodeId parent(NodeId id) const { return parent_.at(id); }

  /// Number of items in the whole tree.
  std::int32_t size() const { return empty() ? 0 : nodes_[root_].size; }
  std::int32_t size(NodeId id) const { return nodes_.at(id).size; }

  bool is_internal(NodeId id) const { return node(id).kind == NodeKind::Internal; }

  /// Items beneath `id`, ascending.
  std::vector<ItemId> items(NodeId id) const;
  std::vector<ItemId> items() const { return empty() ? std::vector<ItemId>{} : items(root_); }

  /// Edge count of the longest root-to-leaf path.
  int depth() const;

 private:
  friend class TreeBuilder;

  std::vector<TreeNode> nodes_;
  std::vector<NodeId> parent_;
  NodeId root_ = kNoNode;
};

/// Laminar family of item sets, each stored ascending.
using ClusterSet = std::set<std::vector<ItemId>>;

ClusterSet clusters_of(const ClusterTree& tree);

/// True when every pair of members is nested or disjoint.
bool is_laminar(const ClusterSet& clusters);

/// Walks from `root` into the larger child (left on ties) and returns the first
/// node whose size is at most two thirds of the root's size. `size_of(node)`
/// gives the current size and `children_of(node)` an optional (left, right).
/// Works on any binary view, including ones with collapsed subtrees.
template <typename SizeFn, typename ChildrenFn>
NodeId centroid_descent(NodeId root, SizeFn&& size_of, ChildrenFn&& children_of) {
  const long total = size_of(root);
  NodeId current = root;
  while (3L * size_of(current) > 2L * total) {
    const std::optional<std::pair<NodeId, NodeId>> kids = children_of(current);
    if (!kids) break;
    current = size_of(kids->second) > size_of(kids->first) ? kids->second : kids->first;
  }
  return current;
}

/// Subtree whose size lies in (n/3, 2n/3] for a tree of n > 2 items.
NodeId select_subtree(const ClusterTree& tree);
NodeId select_subtree(const ClusterTree& tree, NodeId root);

/// Leftmost item beneath `id`; the smallest member for a Flat node.
ItemId representative(const ClusterTree& tree, NodeId id);

/// One item from each child of an internal node.
std::pair<ItemId, ItemId> separated_pair(const ClusterTree& tree, NodeId id);

/// Left-to-right leaf sequence; Flat members are emitted ascending.
std::vector<ItemId> leaf_order(const ClusterTree& tree);

/// Equality of cluster families, ignoring child order. Throws when the two
/// trees cover different items.
bool tree_equal(const ClusterTree& a, const ClusterTree& b);

/// min(|left|, |right|) / |node| for an internal node.
double balance_factor(const ClusterTree& tree, NodeId id);

/// Smallest balance factor over all internal nodes (1/2 for trees without one).
double min_balance_factor(const ClusterTree& tree);

/// Depth bound for a binary tree with N leaves whose internal nodes all have
/// balance factor at least eta.
int max_depth_bound(int n_items, double eta);

}  // namespace actclust

#endif  // ACTCLUST_TREE_HPP
