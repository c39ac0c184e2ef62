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

#ifndef ACTCLUST_ROBUST_HPP
#define ACTCLUST_ROBUST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "actclust/similarity.hpp"
#include "actclust/tree.hpp"

namespace actclust {

/// Default outlier-fraction threshold.
inline constexpr double kDefaultGamma = 0.30;

/// What the voting split recorded on its final attempt.
struct SplitTrace {
  std::vector<ItemId> cluster;
  std::vector<ItemId> voters;       // S_V, sampled with replacement
  std::vector<ItemId> agreers;      // S_A, sampled with replacement
  ItemId seed = -1;
  std::vector<ItemId> agree_items;  // distinct agreers ascending; columns of outlier_fraction
  Eigen::MatrixXd outlier_fraction;  // row per cluster item; NaN where row item == column item
  Eigen::VectorXd agreement;         // per cluster item against the seed; NaN at the seed
  int attempts = 0;
  bool exhaustive = false;
  std::int64_t queries = 0;  // metered reads issued by this split

  double c(ItemId i, ItemId k) const;
  double a(ItemId i) const;
  nlohmann::json to_json() const;
};

class SplitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SplitOptions {
  int max_retries = 3;
  /// Vote with the whole cluster instead of sampled sets (no n > 2m guard).
  bool exhaustive = false;
};

struct SplitResult {
  std::vector<ItemId> seed_side;
  std::vector<ItemId> other_side;
  SplitTrace trace;
  bool failed = false;  // still one-sided after all retries
};

/// Fraction of voters l (outside {i, k}) for which l is the outlier of (i, k, l).
/// Duplicate voters each count.
template <typename Oracle>
double outlier_fraction(ItemId i, ItemId k, std::span<const ItemId> voters, Oracle& oracle) {
  if (i == k) throw std::invalid_argument("outlier_fraction: i == k");
  int fired = 0;
  int used = 0;
  for (ItemId l : voters) {
    if (l == i || l == k) continue;
    ++used;
    if (oracle(i, k, l).is(l)) ++fired;
  }
  if (used == 0) throw SplitError("outlier_fraction: no voters outside the pair");
  return static_cast<double>(fired) / used;
}

/// Fraction of agreers k (outside {i, seed}) on which i and the seed make the
/// same call against gamma. A value exactly at gamma agrees with nothing.
/// `c(a, k)` returns the outlier fraction of the pair (a, k).
template <typename OutlierFractionFn>
double agreement_fraction(ItemId i, ItemId seed, std::span<const ItemId> agreers,
                          OutlierFractionFn&& c, double gamma) {
  if (i == seed) throw std::invalid_argument("agreement_fraction: i == seed");
  int agree = 0;
  int used = 0;
  for (ItemId k : agreers) {
    if (k == i || k == seed) continue;
    ++used;
    const double ci = c(i, k);
    const double cj = c(seed, k);
    if ((ci > gamma && cj > gamma) || (ci < gamma && cj < gamma)) ++agree;
  }
  if (used == 0) throw SplitError("agreement_fraction: no agreers outside the pair");
  return static_cast<double>(agree) / used;
}

namespace detail {

inline std::size_t distinct_count(std::vector<ItemId> v) {
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

template <typename Oracle>
std::int64_t ledger_count(const Oracle& oracle) {
  if constexpr (requires { oracle.ledger().count(); }) {
    return oracle.ledger().count();
  } else {
    return 0;
  }
}

}  // namespace detail

/// Splits a cluster into two subclusters by two rounds of voting on outlier
/// tests. Voter and agreement sets of size m are drawn with replacement and a
/// seed item picked uniformly; items whose agreement with the seed is at least
/// 1/2 join the seed's side. A one-sided outcome is retried with fresh draws.
template <typename Oracle>
SplitResult split(std::span<const ItemId> cluster, int m, double gamma, Oracle& oracle,
                  std::mt19937_64& rng, const SplitOptions& options = {}) {
  const auto n = static_cast<int>(cluster.size());
  if (!(gamma > 0.0 && gamma < 0.5)) throw std::invalid_argument("split: gamma must lie in (0, 1/2)");
  if (options.exhaustive) {
    if (n < 3) throw std::invalid_argument("split: exhaustive voting needs at least 3 items");
  } else {
    if (m < 1) throw std::invalid_argument("split: m must be positive");
    if (n <= 2 * m)
      throw std::invalid_argument("split: cluster of " + std::to_string(n) + " items needs n > 2m (m = " +
                                  std::to_string(m) + ")");
  }

  const std::int64_t queries_before = detail::ledger_count(oracle);
  std::uniform_int_distribution<int> pick(0, n - 1);
  SplitResult result;

  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    SplitTrace trace;
    trace.cluster.assign(cluster.begin(), cluster.end());
    trace.exhaustive = options.exhaustive;
    trace.attempts = attempt + 1;
    if (options.exhaustive) {
      trace.voters = trace.cluster;
      trace.agreers = trace.cluster;
    } else {
      trace.voters.resize(m);
      trace.agreers.resize(m);
      for (auto& v : trace.voters) v = cluster[pick(rng)];
      for (auto& v : trace.agreers) v = cluster[pick(rng)];
    }
    trace.seed = cluster[pick(rng)];

    // Fewer than three distinct items leave some pair without voters.
    if (detail::distinct_count(trace.voters) < 3 || detail::distinct_count(trace.agreers) < 3) {
      result.trace = std::move(trace);
      result.failed = true;
      continue;
    }

    trace.agree_items = trace.agreers;
    std::sort(trace.agree_items.begin(), trace.agree_items.end());
    trace.agree_items.erase(std::unique(trace.agree_items.begin(), trace.agree_items.end()),
                            trace.agree_items.end());
    const auto cols = static_cast<Eigen::Index>(trace.agree_items.size());
    trace.outlier_fraction.setConstant(n, cols, std::numeric_limits<double>::quiet_NaN());
    for (int r = 0; r < n; ++r) {
      for (Eigen::Index col = 0; col < cols; ++col) {
        const ItemId k = trace.agree_items[col];
        if (k == cluster[r]) continue;
        trace.outlier_fraction(r, col) = outlier_fraction(cluster[r], k, trace.voters, oracle);
      }
    }

    // Row lookup for the c-value callback.
    std::vector<std::pair<ItemId, int>> row_of;
    row_of.reserve(n);
    for (int r = 0; r < n; ++r) row_of.emplace_back(cluster[r], r);
    std::sort(row_of.begin(), row_of.end());
    const auto row = [&](ItemId item) {
      return std::lower_bound(row_of.begin(), row_of.end(), std::make_pair(item, -1))->second;
    };
    const auto col = [&](ItemId item) {
      return static_cast<Eigen::Index>(
          std::lower_bound(trace.agree_items.begin(), trace.agree_items.end(), item) -
          trace.agree_items.begin());
    };
    const auto c = [&](ItemId a, ItemId k) { return trace.outlier_fraction(row(a), col(k)); };

    trace.agreement.setConstant(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<ItemId> seed_side;
    std::vector<ItemId> other_side;
    for (int r = 0; r < n; ++r) {
      const ItemId i = cluster[r];
      if (i == trace.seed) {
        seed_side.push_back(i);
        continue;
      }
      const double a = agreement_fraction(i, trace.seed, trace.agreers, c, gamma);
      trace.agreement(r) = a;
      (a >= 0.5 ? seed_side : other_side).push_back(i);
    }

    result.seed_side = std::move(seed_side);
    result.other_side = std::move(other_side);
    result.trace = std::move(trace);
    result.failed = result.other_side.empty();
    if (!result.failed) break;
  }
  result.trace.queries = detail::ledger_count(oracle) - queries_before;
  if (result.failed) {
    result.seed_side.assign(cluster.begin(), cluster.end());
    result.other_side.clear();
  }
  return result;
}

/// How clusters at or below the 2m floor are emitted.
enum class SmallClusterPolicy {
  Flat,    // one unresolved Flat leaf per cluster
  Refine,  // keep splitting, voting with the whole cluster
};

struct RaClusterOptions {
  int m = 10;
  double gamma = kDefaultGamma;
  SmallClusterPolicy small_clusters = SmallClusterPolicy::Flat;
  int max_retries = 3;
  bool keep_traces = false;
};

struct SplitRecord {
  int n = 0;
  int votes = 0;  // m, or n for exhaustive splits
  bool exhaustive = false;
  bool failed = false;
  std::int64_t queries = 0;
};

struct RaClusterResult {
  ClusterTree tree;
  std::vector<SplitRecord> splits;
  std::vector<SplitTrace> traces;  // filled when keep_traces
  int failed_splits = 0;

  /// Sum over splits of 3 * votes * n.
  std::int64_t split_budget() const {
    std::int64_t total = 0;
    for (const auto& s : splits) total += 3LL * s.votes * s.n;
    return total;
  }
};

namespace detail {

template <typename Oracle>
class RaRecursion {
 public:
  RaRecursion(const RaClusterOptions& options, Oracle& oracle, std::mt19937_64& rng,
              RaClusterResult& out)
      : options_(options), oracle_(oracle), rng_(rng), out_(out) {}

  NodeId resolve(std::span<const ItemId> items) {
    SplitResult s = run_split(items, false);
    if (s.failed) return builder_.flat({items.begin(), items.end()});
    const NodeId l = child(s.seed_side);
    const NodeId r = child(s.other_side);
    return builder_.join(l, r);
  }

  TreeBuilder& builder() { return builder_; }

 private:
  NodeId child(const std::vector<ItemId>& side) {
    if (static_cast<int>(side.size()) > 2 * options_.m) return resolve(side);
    if (side.size() == 1) return builder_.leaf(side.front());
    if (options_.small_clusters == SmallClusterPolicy::Flat) return builder_.flat(side);
    return refine(side);
  }

  NodeId refine(std::span<const ItemId> items) {
    if (items.size() == 1) return builder_.leaf(items.front());
    if (items.size() == 2) return builder_.join(builder_.leaf(items[0]), builder_.leaf(items[1]));
    SplitResult s = run_split(items, true);
    if (s.failed) return builder_.flat({items.begin(), items.end()});
    const NodeId l = refine(s.seed_side);
    const NodeId r = refine(s.other_side);
    return builder_.join(l, r);
  }

  SplitResult run_split(std::span<const ItemId> items, bool exhaustive) {
    SplitOptions so;
    so.max_retries = options_.max_retries;
    so.exhaustive = exhaustive;
    SplitResult s = split(items, options_.m, options_.gamma, oracle_, rng_, so);
    SplitRecord rec;
    rec.n = static_cast<int>(items.size());
    rec.votes = exhaustive ? rec.n : options_.m;
    rec.exhaustive = exhaustive;
    rec.failed = s.failed;
    rec.queries = s.trace.queries;
    out_.splits.push_back(rec);
    if (s.failed) ++out_.failed_splits;
    if (options_.keep_traces) out_.traces.push_back(s.trace);
    return s;
  }

  const RaClusterOptions& options_;
  Oracle& oracle_;
  std::mt19937_64& rng_;
  RaClusterResult& out_;
  TreeBuilder builder_;
};

}  // namespace detail

/// Top-down recursive clustering by repeated voting splits. Clusters larger
/// than 2m are split again; smaller ones follow options.small_clusters. A split
/// that stays one-sided leaves its cluster as a Flat leaf and is counted in
/// failed_splits.
template <typename Oracle>
RaClusterResult ra_cluster(std::span<const ItemId> items, const RaClusterOptions& options,
                           Oracle& oracle, std::mt19937_64& rng) {
  const auto n = static_cast<int>(items.size());
  if (options.m < 1 || 2 * options.m >= n)
    throw std::invalid_argument("ra_cluster: needs m < N/2 (m = " + std::to_string(options.m) +
                                ", N = " + std::to_string(n) + ")");
  RaClusterResult out;
  detail::RaRecursion<Oracle> rec(options, oracle, rng, out);
  const NodeId root = rec.resolve(items);
  out.tree = rec.builder().build(root);
  return out;
}

}  // namespace actclust

#endif  // ACTCLUST_ROBUST_HPP
