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

#include "actclust/outlier_cluster.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace actclust {

std::int64_t query_bound(int n_items) {
  if (n_items < 2) throw std::invalid_argument("query_bound: needs N >= 2");
  const double n = n_items;
  return static_cast<std::int64_t>(std::ceil(3.0 * n * std::log(n) / std::log(1.5)));
}

std::vector<ItemId> insertion_order(int n_items, std::optional<std::uint64_t> shuffle_seed) {
  std::vector<ItemId> order(static_cast<std::size_t>(n_items));
  std::iota(order.begin(), order.end(), ItemId{0});
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

}  // namespace actclust
