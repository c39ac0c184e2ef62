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

#ifndef ACTCLUST_SIMILARITY_HPP
#define ACTCLUST_SIMILARITY_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "actclust/tree.hpp"

namespace actclust {

using Index = Eigen::Index;

/// Metered record of similarity accesses for one clustering run.
class QueryLedger {
 public:
  explicit QueryLedger(Index n_items);

  void record(ItemId i, ItemId j);

  /// Total metered accesses, repeats included.
  std::int64_t count() const { return count_; }
  /// Distinct unordered pairs touched.
  std::int64_t distinct_pairs() const { return distinct_; }
  bool touched(ItemId i, ItemId j) const;
  Index n_items() const { return n_; }

  nlohmann::json to_json() const;

 private:
  Index n_;
  std::int64_t count_ = 0;
  std::int64_t distinct_ = 0;
  std::vector<bool> seen_;
};

/// Symmetric table of pairwise similarities with an optional consistency mask.
/// The diagonal is never read.
template <typename Scalar>
class SimilarityStore {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  SimilarityStore() = default;

  /// `values` must be square and exactly symmetric off the diagonal.
  explicit SimilarityStore(Matrix values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols())
      throw std::invalid_argument("similarity store: matrix is not square");
    values_.diagonal().setZero();
    if (values_ != values_.transpose())
      throw std::invalid_argument("similarity store: matrix is not symmetric");
  }

  SimilarityStore(Matrix values, Mask consistent) : SimilarityStore(std::move(values)) {
    if (consistent.rows() != size() || consistent.cols() != size())
      throw std::invalid_argument("similarity store: mask shape mismatch");
    if ((consistent != consistent.transpose()).any())
      throw std::invalid_argument("similarity store: mask is not symmetric");
    mask_ = std::move(consistent);
  }

  Index size() const { return values_.rows(); }

  /// Unmetered read. Clustering code goes through query() instead.
  Scalar value(ItemId i, ItemId j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }

  bool has_mask() const { return mask_.size() > 0; }
  const Mask& mask() const { return mask_; }
  /// Membership in the consistent subset; all pairs are consistent without a mask.
  bool consistent(ItemId i, ItemId j) const { return !has_mask() || mask_(i, j); }

  void check_pair(ItemId i, ItemId j) const {
    if (i == j) throw std::invalid_argument("similarity: diagonal access (" + std::to_string(i) + ")");
    if (i < 0 || j < 0 || i >= size() || j >= size())
      throw std::out_of_range("similarity: item out of range");
  }

  /// Off-diagonal extremes.
  std::pair<Scalar, Scalar> value_range() const {
    Scalar lo = std::numeric_limits<Scalar>::max();
    Scalar hi = std::numeric_limits<Scalar>::lowest();
    for (Index j = 0; j < size(); ++j)
      for (Index i = 0; i < j; ++i) {
        lo = std::min(lo, values_(i, j));
        hi = std::max(hi, values_(i, j));
      }
    return {lo, hi};
  }

  bool operator==(const SimilarityStore& other) const {
    if (size() != other.size() || has_mask() != other.has_mask()) return false;
    if (values_ != other.values_) return false;
    return !has_mask() || (mask_ == other.mask_).all();
  }

 private:
  Matrix values_;
  Mask mask_;
};

using SimilarityStored = SimilarityStore<double>;

/// Metered read of s(i, j).
template <typename Scalar>
Scalar query(const SimilarityStore<Scalar>& store, ItemId i, ItemId j, QueryLedger& ledger) {
  store.check_pair(i, j);
  ledger.record(i, j);
  return store.value(i, j);
}

/// The item excluded from the largest of the three similarities of a triple.
/// `tie` is set when that largest value is not unique; `item` then holds the
/// smallest excluded item among the tied maxima.
struct OutlierResult {
  ItemId item = -1;
  bool tie = false;

  bool is(ItemId x) const { return !tie && item == x; }
  friend bool operator==(const OutlierResult&, const OutlierResult&) = default;
};

/// Outlier rule on three similarities of the triple (i, j, k).
template <typename Scalar>
OutlierResult outlier_rule(ItemId i, ItemId j, ItemId k, Scalar s_ij, Scalar s_ik, Scalar s_jk) {
  const Scalar top = std::max({s_ij, s_ik, s_jk});
  ItemId best = -1;
  int hits = 0;
  const auto consider = [&](Scalar s, ItemId excluded) {
    if (s != top) return;
    ++hits;
    if (best < 0 || excluded < best) best = excluded;
  };
  consider(s_jk, i);
  consider(s_ik, j);
  consider(s_ij, k);
  return {best, hits > 1};
}

/// Outlier test through the ledger: exactly three metered reads.
template <typename Scalar>
OutlierResult outlier(const SimilarityStore<Scalar>& store, ItemId i, ItemId j, ItemId k,
                      QueryLedger& ledger) {
  if (i == j || i == k || j == k) throw std::invalid_argument("outlier: items must be distinct");
  const Scalar s_ij = query(store, i, j, ledger);
  const Scalar s_ik = query(store, i, k, ledger);
  const Scalar s_jk = query(store, j, k, ledger);
  return outlier_rule(i, j, k, s_ij, s_ik, s_jk);
}

/// Applies a strictly increasing map to every off-diagonal entry. The mask is
/// carried over unchanged.
template <typename Scalar, typename Fn>
SimilarityStore<Scalar> transform_values(const SimilarityStore<Scalar>& store, Fn&& f) {
  typename SimilarityStore<Scalar>::Matrix out = store.values().unaryExpr(
      [&](Scalar s) { return static_cast<Scalar>(f(s)); });
  if (store.has_mask()) return SimilarityStore<Scalar>(std::move(out), store.mask());
  return SimilarityStore<Scalar>(std::move(out));
}

/// Outlier oracle over a store, metering through a ledger.
template <typename Scalar>
class StoreOracle {
 public:
  StoreOracle(const SimilarityStore<Scalar>& store, QueryLedger& ledger)
      : store_(&store), ledger_(&ledger) {}

  OutlierResult operator()(ItemId i, ItemId j, ItemId k) {
    ++calls_;
    return outlier(*store_, i, j, k, *ledger_);
  }

  std::int64_t calls() const { return calls_; }
  const SimilarityStore<Scalar>& store() const { return *store_; }

 private:
  const SimilarityStore<Scalar>* store_;
  QueryLedger* ledger_;
  std::int64_t calls_ = 0;
};

/// Wraps an outlier oracle and corrupts a fixed set of call indices: on those
/// calls one of the two items other than the true answer is returned, chosen
/// uniformly. Tied answers are passed through.
template <typename Oracle>
class FaultyOutlierOracle {
 public:
  FaultyOutlierOracle(Oracle base, std::vector<std::int64_t> corrupt_calls, std::uint64_t seed)
      : base_(std::move(base)), corrupt_(std::move(corrupt_calls)), rng_(seed) {
    std::sort(corrupt_.begin(), corrupt_.end());
  }

  OutlierResult operator()(ItemId i, ItemId j, ItemId k) {
    const std::int64_t index = calls_++;
    OutlierResult truth = base_(i, j, k);
    if (truth.tie || !std::binary_search(corrupt_.begin(), corrupt_.end(), index)) return truth;
    std::vector<ItemId> others;
    for (ItemId x : {i, j, k})
      if (x != truth.item) others.push_back(x);
    std::uniform_int_distribution<int> pick(0, 1);
    ++fired_;
    return {others[static_cast<std::size_t>(pick(rng_))], false};
  }

  std::int64_t calls() const { return calls_; }
  /// Corruptions actually applied; lower than requested when the run made
  /// fewer calls than the largest scheduled index.
  std::int64_t fired() const { return fired_; }
  const std::vector<std::int64_t>& schedule() const { return corrupt_; }
  Oracle& base() { return base_; }

 private:
  Oracle base_;
  std::vector<std::int64_t> corrupt_;
  std::mt19937_64 rng_;
  std::int64_t calls_ = 0;
  std::int64_t fired_ = 0;
};

/// `k_errors` distinct call indices drawn uniformly from [0, total_calls).
std::vector<std::int64_t> choose_fault_calls(std::int64_t total_calls, std::int64_t k_errors,
                                             std::mt19937_64& rng);

/// Builds a faulty wrapper over a store. `total_calls` is the length of the
/// realized call sequence of a clean run on the same input; the faulty calls
/// are drawn from it with `seed`.
template <typename Scalar>
FaultyOutlierOracle<StoreOracle<Scalar>> faulty_outlier_wrapper(const SimilarityStore<Scalar>& store,
                                                                QueryLedger& ledger,
                                                                std::int64_t k_errors,
                                                                std::uint64_t seed,
                                                                std::int64_t total_calls) {
  if (k_errors < 0) throw std::invalid_argument("faulty oracle: k_errors must be >= 0");
  std::mt19937_64 rng(seed);
  auto schedule = choose_fault_calls(total_calls, k_errors, rng);
  return FaultyOutlierOracle<StoreOracle<Scalar>>(StoreOracle<Scalar>(store, ledger),
                                                  std::move(schedule), rng());
}

/// Metered view that reads each pair through the ledger at most once and
/// serves repeats from a local copy. Used by the voting splitter, where the
/// same similarity feeds many outlier tests.
template <typename Scalar>
class CachedSimilarities {
 public:
  CachedSimilarities(const SimilarityStore<Scalar>& store, QueryLedger& ledger)
      : store_(&store),
        ledger_(&ledger),
        cache_(store.size(), store.size()),
        known_(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(store.size(),
                                                                            store.size(), false)) {}

  Scalar value(ItemId i, ItemId j) {
    if (!known_(i, j)) {
      const Scalar s = query(*store_, i, j, *ledger_);
      cache_(i, j) = cache_(j, i) = s;
      known_(i, j) = known_(j, i) = true;
    }
    return cache_(i, j);
  }

  OutlierResult operator()(ItemId i, ItemId j, ItemId k) {
    if (i == j || i == k || j == k) throw std::invalid_argument("outlier: items must be distinct");
    return outlier_rule(i, j, k, value(i, j), value(i, k), value(j, k));
  }

  const QueryLedger& ledger() const { return *ledger_; }

 private:
  const SimilarityStore<Scalar>* store_;
  QueryLedger* ledger_;
  typename SimilarityStore<Scalar>::Matrix cache_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> known_;
};

}  // namespace actclust

#endif  // ACTCLUST_SIMILARITY_HPP
