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

#include <numeric>

#include "actclust/similarity.hpp"

namespace actclust {

QueryLedger::QueryLedger(Index n_items)
    : n_(n_items), seen_(static_cast<std::size_t>(n_items * n_items), false) {
  if (n_items < 0) throw std::invalid_argument("ledger: negative item count");
}

void QueryLedger::record(ItemId i, ItemId j) {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("ledger: invalid pair");
  ++count_;
  const auto lo = static_cast<std::size_t>(std::min(i, j));
  const auto hi = static_cast<std::size_t>(std::max(i, j));
  auto bit = seen_[lo * static_cast<std::size_t>(n_) + hi];
  if (!bit) {
    bit = true;
    ++distinct_;
  }
}

bool QueryLedger::touched(ItemId i, ItemId j) const {
  const auto lo = static_cast<std::size_t>(std::min(i, j));
  const auto hi = static_cast<std::size_t>(std::max(i, j));
  return seen_.at(lo * static_cast<std::size_t>(n_) + hi);
}

nlohmann::json QueryLedger::to_json() const {
  return {{"queries", count_}, {"distinct_pairs", distinct_}};
}

std::vector<std::int64_t> choose_fault_calls(std::int64_t total_calls, std::int64_t k_errors,
                                             std::mt19937_64& rng) {
  if (k_errors < 0 || total_calls < 0) throw std::invalid_argument("fault schedule: negative count");
  std::vector<std::int64_t> all(static_cast<std::size_t>(total_calls));
  std::iota(all.begin(), all.end(), std::int64_t{0});
  std::vector<std::int64_t> out;
  std::sample(all.begin(), all.end(), std::back_inserter(out), k_errors, rng);
  return out;
}

}  // namespace actclust
