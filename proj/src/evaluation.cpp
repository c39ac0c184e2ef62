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

#include "actclust/evaluation.hpp"

#include <numeric>

namespace actclust {

int r_min(const ClusterTree& truth, const ClusterTree& estimate) {
  if (truth.items() != estimate.items()) throw std::invalid_argument("r_min: item universes differ");
  const ClusterSet found = clusters_of(estimate);
  std::size_t largest_missing = 0;
  for (const auto& c : clusters_of(truth)) {
    if (c.size() > largest_missing && !found.contains(c)) largest_missing = c.size();
  }
  const int n = truth.size();
  return std::min(n, static_cast<int>(largest_missing) + 1);
}

double recovered_cluster_fraction(const ClusterTree& truth, const ClusterTree& estimate) {
  if (truth.items() != estimate.items())
    throw std::invalid_argument("recovered_cluster_fraction: item universes differ");
  const ClusterSet found = clusters_of(estimate);
  const ClusterSet wanted = clusters_of(truth);
  std::size_t hits = 0;
  for (const auto& c : wanted) hits += found.contains(c) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(wanted.size());
}

void check_permutation(std::span<const ItemId> order, Index n_items) {
  if (static_cast<Index>(order.size()) != n_items)
    throw std::invalid_argument("ordering: length does not match the item count");
  std::vector<bool> seen(static_cast<std::size_t>(n_items), false);
  for (ItemId x : order) {
    if (x < 0 || x >= n_items || seen[static_cast<std::size_t>(x)])
      throw std::invalid_argument("ordering: not a permutation of 0..N-1");
    seen[static_cast<std::size_t>(x)] = true;
  }
}

double decay_entropy(const Eigen::VectorXd& s_hat) {
  if (s_hat.size() == 0) throw std::invalid_argument("entropy: empty decay profile");
  if ((s_hat.array() <= 0.0).any())
    throw std::invalid_argument("entropy: decay profile must be positive; shift similarities first");
  const Eigen::ArrayXd p = s_hat.array() / s_hat.sum();
  return -(p * p.log()).sum();
}

std::int64_t random_sampling_threshold(int n_items, int m) {
  if (m < 2 || m > n_items) throw std::invalid_argument("threshold: need 2 <= m <= N");
  const std::int64_t num = static_cast<std::int64_t>(n_items) * (n_items - 1);
  return (num + m - 1) / m;
}

double random_sampling_trial(int n_items, int m, std::int64_t n_samples, int trials, std::uint64_t seed) {
  if (m < 2 || m > n_items) throw std::invalid_argument("random sampling: need 2 <= m <= N");
  const std::int64_t total = static_cast<std::int64_t>(n_items) * (n_items - 1) / 2;
  if (n_samples < 0 || n_samples > total)
    throw std::invalid_argument("random sampling: n_samples outside [0, N(N-1)/2]");
  if (trials < 1) throw std::invalid_argument("random sampling: trials must be positive");

  // Order the population with the cluster's pairs first. Selection sampling
  // (Knuth's Algorithm S) then decides their membership exactly without
  // visiting the rest.
  std::vector<std::pair<int, int>> inside;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) inside.emplace_back(a, b);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  std::vector<int> parent(static_cast<std::size_t>(m));
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int t = 0; t < trials; ++t) {
    std::iota(parent.begin(), parent.end(), 0);
    int components = m;
    std::int64_t chosen = 0;
    for (std::size_t e = 0; e < inside.size(); ++e) {
      const double remaining = static_cast<double>(total - static_cast<std::int64_t>(e));
      if (remaining * unit(rng) >= static_cast<double>(n_samples - chosen)) continue;
      ++chosen;
      const int ra = find(inside[e].first);
      const int rb = find(inside[e].second);
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
    if (components > 1) ++failures;
  }
  return static_cast<double>(failures) / trials;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j{{"r_min", r_min},
                   {"entropy", entropy},
                   {"random_entropy", random_entropy},
                   {"delta_entropy", delta_entropy},
                   {"recovered_cluster_fraction", recovered_cluster_fraction},
                   {"s_hat", std::vector<double>(s_hat.data(), s_hat.data() + s_hat.size())},
                   {"log_base", "e"},
                   {"random_orderings", kRandomOrderings}};
  if (queries) j["queries"] = *queries;
  return j;
}

EvalReport evaluate(const ClusterTree& truth, const ClusterTree& estimate, const SimilarityStored& store,
                    std::uint64_t seed) {
  EvalReport report;
  report.r_min = r_min(truth, estimate);
  report.recovered_cluster_fraction = recovered_cluster_fraction(truth, estimate);
  const auto order = leaf_order(estimate);
  report.s_hat = off_diag_decay(store, order);
  const OrderingEntropy e = ordering_entropy(store, order, seed);
  report.entropy = e.entropy;
  report.random_entropy = e.random_entropy;
  report.delta_entropy = e.delta;
  return report;
}

}  // namespace actclust
