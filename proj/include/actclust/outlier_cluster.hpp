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

#ifndef ACTCLUST_OUTLIER_CLUSTER_HPP
#define ACTCLUST_OUTLIER_CLUSTER_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "actclust/similarity.hpp"
#include "actclust/tree.hpp"

namespace actclust {

enum class TieMode {
  Strict,    // a tied outlier test aborts the run
  Tolerant,  // take the oracle's deterministic tie-break and flag the result
};

class TieError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutlierClusterResult {
  ClusterTree tree;
  std::int64_t tests = 0;  // outlier calls issued
  bool best_effort = false;  // a tie was broken in tolerant mode
};

/// ceil(3 N log_{3/2} N): the query budget of the insertion algorithm.
std::int64_t query_bound(int n_items);

/// Ascending ids 0..N-1, or a seeded shuffle of them when `shuffle_seed` is set.
std::vector<ItemId> insertion_order(int n_items, std::optional<std::uint64_t> shuffle_seed = {});

namespace detail {

/// Mutable tree the insertion algorithm grows one item at a time.
class GrowingTree {
 public:
  struct Node {
    NodeId parent = kNoNode;
    NodeId left = kNoNode;
    NodeId right = kNoNode;
    ItemId item = -1;
    std::int32_t size = 1;
  };

  GrowingTree(ItemId a, ItemId b) {
    const NodeId la = add_leaf(a);
    const NodeId lb = add_leaf(b);
    root_ = add_internal(la, lb);
  }

  NodeId root() const { return root_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  bool is_leaf(NodeId id) const { return nodes_[id].left == kNoNode; }
  std::size_t node_count() const { return nodes_.size(); }
  NodeId leaf_of(ItemId item) const { return leaf_of_.at(item); }

  /// Nearest common ancestor of two leaves.
  NodeId nca(ItemId a, ItemId b) const {
    std::vector<bool> on_path(nodes_.size(), false);
    for (NodeId x = leaf_of(a); x != kNoNode; x = nodes_[x].parent) on_path[x] = true;
    NodeId y = leaf_of(b);
    while (!on_path[y]) y = nodes_[y].parent;
    return y;
  }

  /// Child of `ancestor` on the path down to `item`.
  NodeId child_towards(NodeId ancestor, ItemId item) const {
    NodeId x = leaf_of(item);
    while (nodes_[x].parent != ancestor) x = nodes_[x].parent;
    return x;
  }

  /// Replaces subtree `target` with a new internal node {target, item}.
  void attach_above(NodeId target, ItemId item) {
    const NodeId parent = nodes_[target].parent;
    const NodeId leaf = add_leaf(item);
    const NodeId joined = add_internal(target, leaf);
    nodes_[joined].parent = parent;
    if (parent == kNoNode) {
      root_ = joined;
    } else {
      (nodes_[parent].left == target ? nodes_[parent].left : nodes_[parent].right) = joined;
    }
    for (NodeId a = parent; a != kNoNode; a = nodes_[a].parent) ++nodes_[a].size;
  }

  ClusterTree freeze() const {
    TreeBuilder b;
    std::vector<NodeId> mapped(nodes_.size(), kNoNode);
    std::vector<std::pair<NodeId, bool>> stack{{root_, false}};
    while (!stack.empty()) {
      auto [id, expanded] = stack.back();
      stack.pop_back();
      const Node& n = nodes_[id];
      if (n.left == kNoNode) {
        mapped[id] = b.leaf(n.item);
      } else if (expanded) {
        mapped[id] = b.join(mapped[n.left], mapped[n.right]);
      } else {
        stack.emplace_back(id, true);
        stack.emplace_back(n.right, false);
        stack.emplace_back(n.left, false);
      }
    }
    return b.build(mapped[root_]);
  }

 private:
  NodeId add_leaf(ItemId item) {
    Node n;
    n.item = item;
    nodes_.push_back(n);
    const auto id = static_cast<NodeId>(nodes_.size() - 1);
    if (static_cast<std::size_t>(item) >= leaf_of_.size()) leaf_of_.resize(item + 1, kNoNode);
    leaf_of_[item] = id;
    return id;
  }

  NodeId add_internal(NodeId l, NodeId r) {
    Node n;
    n.left = l;
    n.right = r;
    n.size = nodes_[l].size + nodes_[r].size;
    nodes_.push_back(n);
    const auto id = static_cast<NodeId>(nodes_.size() - 1);
    nodes_[l].parent = nodes_[r].parent = id;
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<NodeId> leaf_of_;
  NodeId root_ = kNoNode;
};

/// Scratch view of the working tree during one insertion: a subtree of the
/// grown tree in which some subtrees are collapsed onto a representative item.
/// Collapses only touch this view; the grown tree stays intact so that the
/// final placement resolves against real subtrees.
class WorkingView {
 public:
  explicit WorkingView(const GrowingTree& tree)
      : tree_(&tree), size_(tree.node_count()), rep_(tree.node_count(), -1), root_(tree.root()) {
    for (std::size_t i = 0; i < size_.size(); ++i) size_[i] = tree.node(static_cast<NodeId>(i)).size;
  }

  NodeId root() const { return root_; }
  std::int32_t size(NodeId id) const { return size_[id]; }

  std::optional<std::pair<NodeId, NodeId>> children(NodeId id) const {
    if (rep_[id] >= 0 || tree_->is_leaf(id)) return std::nullopt;
    return std::make_pair(tree_->node(id).left, tree_->node(id).right);
  }

  /// Leftmost item under `id`, where a collapsed subtree counts as its representative.
  ItemId representative(NodeId id) const {
    for (;;) {
      if (rep_[id] >= 0) return rep_[id];
      if (tree_->is_leaf(id)) return tree_->node(id).item;
      id = tree_->node(id).left;
    }
  }

  void descend(NodeId id) { root_ = id; }

  void collapse(NodeId id, ItemId rep) {
    const std::int32_t removed = size_[id] - 1;
    for (NodeId a = tree_->node(id).parent; a != kNoNode; a = tree_->node(a).parent) {
      size_[a] -= removed;
      if (a == root_) break;
    }
    size_[id] = 1;
    rep_[id] = rep;
  }

 private:
  const GrowingTree* tree_;
  std::vector<std::int32_t> size_;
  std::vector<ItemId> rep_;
  NodeId root_;
};

}  // namespace detail

/// Builds a cluster tree by inserting items one at a time, locating each new
/// item with outlier tests against a centroid-split binary search of the tree
/// built so far. `oracle(i, j, k)` returns an OutlierResult.
///
/// With answers consistent with a tree under the tight clustering condition,
/// the result equals that tree and uses at most query_bound(N) similarities.
template <typename Oracle>
OutlierClusterResult outlier_cluster(std::span<const ItemId> items, Oracle& oracle,
                                     TieMode ties = TieMode::Strict) {
  if (items.size() < 2) throw std::invalid_argument("outlier_cluster: needs at least 2 items");

  OutlierClusterResult result;
  const auto test = [&](ItemId i, ItemId j, ItemId k) {
    ++result.tests;
    const OutlierResult r = oracle(i, j, k);
    if (r.tie) {
      if (ties == TieMode::Strict)
        throw TieError("outlier_cluster: tied outlier test on (" + std::to_string(i) + ", " +
                       std::to_string(j) + ", " + std::to_string(k) +
                       "); similarities violate the tight clustering condition");
      result.best_effort = true;
    }
    return r.item;
  };

  detail::GrowingTree tree(items[0], items[1]);
  for (std::size_t pos = 2; pos < items.size(); ++pos) {
    const ItemId x = items[pos];
    detail::WorkingView view(tree);

    while (view.size(view.root()) > 2) {
      const NodeId sub = centroid_descent(
          view.root(), [&](NodeId id) { return view.size(id); },
          [&](NodeId id) { return view.children(id); });
      const auto [l, r] = *view.children(sub);
      const ItemId xj = view.representative(l);
      const ItemId xk = view.representative(r);
      if (test(x, xj, xk) == x) {
        view.collapse(sub, xj);
      } else {
        view.descend(sub);
      }
    }

    const auto [l, r] = *view.children(view.root());
    const ItemId xj = view.representative(l);
    const ItemId xk = view.representative(r);
    const NodeId joint = tree.nca(xj, xk);
    const ItemId leader = test(x, xj, xk);
    if (leader == x) {
      tree.attach_above(joint, x);
    } else if (leader == xj) {
      tree.attach_above(tree.child_towards(joint, xk), x);
    } else {
      tree.attach_above(tree.child_towards(joint, xj), x);
    }
  }
  result.tree = tree.freeze();
  return result;
}

}  // namespace actclust

#endif  // ACTCLUST_OUTLIER_CLUSTER_HPP
