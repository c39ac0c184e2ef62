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

#ifndef ACTCLUST_EVALUATION_HPP
#define ACTCLUST_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "actclust/rng.hpp"
#include "actclust/similarity.hpp"
#include "actclust/tree.hpp"

namespace actclust {

/// Smallest s such that every cluster of `truth` with at least s items is also
/// a cluster of `estimate`. 1 for exact recovery; capped at N.
int r_min(const ClusterTree& truth, const ClusterTree& estimate);

/// Share of the true clusters that appear in the estimate.
double recovered_cluster_fraction(const ClusterTree& truth, const ClusterTree& estimate);

void check_permutation(std::span<const ItemId> order, Index n_items);

/// s_hat(d) = mean over i of s(order[i], order[i + d]) for d = 1..N-1, stored
/// at index d - 1. Reads are not metered.
template <typename Scalar>
Eigen::VectorXd off_diag_decay(const SimilarityStore<Scalar>& store, std::span<const ItemId> order) {
  const Index n = store.size();
  check_permutation(order, n);
  Eigen::VectorXd s_hat(n - 1);
  for (Index d = 1; d < n; ++d) {
    double sum = 0.0;
    for (Index i = 0; i + d < n; ++i) sum += static_cast<double>(store.value(order[i], order[i + d]));
    s_hat(d - 1) = sum / static_cast<double>(n - d);
  }
  return s_hat;
}

/// Entropy (nats) of s_hat normalized to a distribution. All entries must be
/// positive; shift similarities into a positive range first.
double decay_entropy(const Eigen::VectorXd& s_hat);

/// Number of random permutations averaged for the reference entropy.
inline constexpr int kRandomOrderings = 20;

struct OrderingEntropy {
  double entropy = 0.0;         // of the given order
  double random_entropy = 0.0;  // mean over seeded random orders
  double delta = 0.0;           // random_entropy - entropy
};

template <typename Scalar>
double random_order_entropy(const SimilarityStore<Scalar>& store, std::uint64_t seed,
                            int orderings = kRandomOrderings) {
  std::vector<ItemId> order(static_cast<std::size_t>(store.size()));
  double total = 0.0;
  for (int r = 0; r < orderings; ++r) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<ItemId>(i);
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::shuffle(order.begin(), order.end(), rng);
    total += decay_entropy(off_diag_decay(store, order));
  }
  return total / orderings;
}

template <typename Scalar>
OrderingEntropy ordering_entropy(const SimilarityStore<Scalar>& store, std::span<const ItemId> order,
                                 std::uint64_t seed, int orderings = kRandomOrderings) {
  OrderingEntropy out;
  out.entropy = decay_entropy(off_diag_decay(store, order));
  out.random_entropy = random_order_entropy(store, seed, orderings);
  out.delta = out.random_entropy - out.entropy;
  return out;
}

/// ceil((N / m) (N - 1)): uniformly sampled pairs needed to see an m-cluster.
std::int64_t random_sampling_threshold(int n_items, int m);

/// Monte Carlo over `trials`: plant an m-item cluster, sample n_samples distinct
/// pairs uniformly, and count a failure when the sampled pairs inside the
/// cluster leave it disconnected. Returns the failed fraction.
double random_sampling_trial(int n_items, int m, std::int64_t n_samples, int trials, std::uint64_t seed);

struct EvalReport {
  int r_min = 0;
  Eigen::VectorXd s_hat;
  double entropy = 0.0;
  double random_entropy = 0.0;
  double delta_entropy = 0.0;
  double recovered_cluster_fraction = 0.0;
  std::optional<nlohmann::json> queries;

  nlohmann::json to_json() const;
};

/// r_min and recovery against the truth, plus the ordering entropy of the
/// estimate's leaf order on `store`.
EvalReport evaluate(const ClusterTree& truth, const ClusterTree& estimate, const SimilarityStored& store,
                    std::uint64_t seed);

}  // namespace actclust

#endif  // ACTCLUST_EVALUATION_HPP
