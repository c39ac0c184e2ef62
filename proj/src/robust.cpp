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

#include "actclust/robust.hpp"

namespace actclust {

double SplitTrace::c(ItemId i, ItemId k) const {
  const auto r = std::find(cluster.begin(), cluster.end(), i);
  const auto col = std::lower_bound(agree_items.begin(), agree_items.end(), k);
  if (r == cluster.end() || col == agree_items.end() || *col != k)
    throw std::out_of_range("split trace: no outlier fraction recorded for this pair");
  return outlier_fraction(r - cluster.begin(), col - agree_items.begin());
}

double SplitTrace::a(ItemId i) const {
  const auto r = std::find(cluster.begin(), cluster.end(), i);
  if (r == cluster.end()) throw std::out_of_range("split trace: item not in cluster");
  return agreement(r - cluster.begin());
}

nlohmann::json SplitTrace::to_json() const {
  nlohmann::json j{{"n", cluster.size()},    {"seed", seed},       {"voters", voters},
                   {"agreers", agreers},     {"attempts", attempts}, {"exhaustive", exhaustive},
                   {"queries", queries}};
  nlohmann::json agreement_json = nlohmann::json::object();
  for (std::size_t r = 0; r < cluster.size(); ++r) {
    if (static_cast<Eigen::Index>(r) < agreement.size() && !std::isnan(agreement(r)))
      agreement_json[std::to_string(cluster[r])] = agreement(r);
  }
  j["agreement"] = std::move(agreement_json);
  return j;
}

}  // namespace actclust
