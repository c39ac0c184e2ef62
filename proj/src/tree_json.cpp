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

#include "actclust/tree_json.hpp"

#include <fstream>
#include <stdexcept>

namespace actclust {
namespace {

nlohmann::json node_to_json(const ClusterTree& tree, NodeId id) {
  const TreeNode& n = tree.node(id);
  switch (n.kind) {
    case NodeKind::Leaf: return n.item;
    case NodeKind::Flat: return {{"items", n.members}};
    case NodeKind::Internal:
      return {{"l", node_to_json(tree, n.left)}, {"r", node_to_json(tree, n.right)}};
  }
  return nullptr;
}

NodeId node_from_json(const nlohmann::json& doc, TreeBuilder& builder) {
  if (doc.is_number_integer()) return builder.leaf(doc.get<ItemId>());
  if (!doc.is_object()) throw std::invalid_argument("tree json: expected integer or object");
  if (doc.contains("items")) {
    if (doc.size() != 1 || !doc["items"].is_array())
      throw std::invalid_argument("tree json: malformed flat cluster");
    return builder.flat(doc["items"].get<std::vector<ItemId>>());
  }
  if (doc.size() != 2 || !doc.contains("l") || !doc.contains("r"))
    throw std::invalid_argument("tree json: internal node needs exactly \"l\" and \"r\"");
  const NodeId left = node_from_json(doc["l"], builder);
  const NodeId right = node_from_json(doc["r"], builder);
  return builder.join(left, right);
}

}  // namespace

nlohmann::json tree_to_json(const ClusterTree& tree) {
  if (tree.empty()) throw std::invalid_argument("tree json: empty tree");
  return node_to_json(tree, tree.root());
}

ClusterTree tree_from_json(const nlohmann::json& doc) {
  TreeBuilder builder;
  const NodeId root = node_from_json(doc, builder);
  return builder.build(root);
}

void write_tree_json(const ClusterTree& tree, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << tree_to_json(tree).dump() << '\n';
}

ClusterTree read_tree_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return tree_from_json(nlohmann::json::parse(in));
}

}  // namespace actclust
