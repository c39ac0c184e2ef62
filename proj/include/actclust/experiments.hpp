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

#ifndef ACTCLUST_EXPERIMENTS_HPP
#define ACTCLUST_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "actclust/agglomerative.hpp"
#include "actclust/robust.hpp"

namespace actclust {

inline constexpr const char* kVersion = "0.1.0";

/// Insertion clustering vs. agglomerative query counts on TC trees.
struct Table1Config {
  std::vector<int> balanced_sizes{128, 256, 512};
  bool include_unbalanced = true;
  int unbalanced_size = 768;
  double unbalanced_eta = 0.05;
  int trials = 20;
  std::uint64_t seed = 1;
  nlohmann::json to_json() const;
};

struct Table1Row {
  std::string topology;
  int n = 0;
  std::int64_t n_agg = 0;            // distinct pairs read by the agglomerative run
  bool agg_exact = false;
  double n_outlier = 0.0;            // mean distinct pairs
  double n_outlier_accesses = 0.0;   // mean metered accesses
  std::int64_t max_outlier = 0;
  std::int64_t bound = 0;
  int exact_recoveries = 0;
  int trials = 0;
  double ratio() const { return n_outlier / static_cast<double>(n_agg); }
};

struct Table1Report {
  Table1Config config;
  std::vector<Table1Row> rows;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

Table1Report run_table1(const Table1Config& config);

/// Reconstruction quality of the insertion algorithm when k outlier tests lie.
struct Fig2Config {
  int n = 256;
  std::vector<int> errors{0, 1, 2, 4, 8};
  int trials = 150;
  std::uint64_t seed = 1;
  nlohmann::json to_json() const;
};

struct Fig2Row {
  int k_errors = 0;
  double mean_r_min = 0.0;
  double stderr_r_min = 0.0;
  double mean_fired = 0.0;
  int exact = 0;
  int trials = 0;
};

struct Fig2Report {
  Fig2Config config;
  std::vector<Fig2Row> rows;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

Fig2Report run_fig2(const Fig2Config& config);

/// Agglomerative vs. voting recursion on a balanced tree with inconsistent pairs.
struct Table2Config {
  int n = 512;
  std::vector<double> q_values{0.05, 0.15, 0.25};
  std::vector<int> m_values{40, 80};
  double gamma = kDefaultGamma;
  Linkage linkage = Linkage::Average;
  SmallClusterPolicy small_clusters = SmallClusterPolicy::Refine;
  int trials = 10;
  std::uint64_t seed = 1;
  nlohmann::json to_json() const;
};

struct Table2Cell {
  std::string algorithm;  // "agglomerative" or "robust"
  int m = 0;              // 0 for agglomerative
  std::vector<double> delta_entropy;  // per trial
  std::vector<int> r_min;             // per trial
  std::vector<double> query_fraction; // distinct pairs / (N(N-1)/2), per trial
  int failed_splits = 0;
  double mean_delta_entropy() const;
  double mean_r_min() const;
  double mean_query_fraction() const;
};

struct Table2Row {
  double q = 0.0;
  bool a2_feasible = false;  // for gamma and eta = 1/2
  std::vector<Table2Cell> cells;  // agglomerative first, then one per m
};

struct Table2Report {
  Table2Config config;
  std::vector<Table2Row> rows;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

Table2Report run_table2(const Table2Config& config);

/// Failure rate of uniformly sampled pairs at revealing a planted cluster.
struct Prop1Config {
  int n = 256;
  int m = 16;
  /// Sample sizes as multiples of the threshold; values >= the full pair count
  /// are clamped to it.
  std::vector<double> threshold_multiples{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0};
  bool include_full = true;
  int trials = 200;
  std::uint64_t seed = 1;
  nlohmann::json to_json() const;
};

struct Prop1Row {
  std::int64_t n_samples = 0;
  double multiple = 0.0;
  double failure_fraction = 0.0;
};

struct Prop1Report {
  Prop1Config config;
  std::int64_t threshold = 0;
  std::vector<Prop1Row> rows;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

Prop1Report run_prop1(const Prop1Config& config);

}  // namespace actclust

#endif  // ACTCLUST_EXPERIMENTS_HPP
