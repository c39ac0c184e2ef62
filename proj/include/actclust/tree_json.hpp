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

#ifndef ACTCLUST_TREE_JSON_HPP
#define ACTCLUST_TREE_JSON_HPP

#include <string>

#include <json.hpp>

#include "actclust/tree.hpp"

namespace actclust {

// Leaf -> integer, Internal -> {"l": node, "r": node}, Flat -> {"items": [...]}.
nlohmann::json tree_to_json(const ClusterTree& tree);
ClusterTree tree_from_json(const nlohmann::json& doc);

void write_tree_json(const ClusterTree& tree, const std::string& path);
ClusterTree read_tree_json(const std::string& path);

}  // namespace actclust

#endif  // ACTCLUST_TREE_JSON_HPP
