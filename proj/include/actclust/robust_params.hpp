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

#ifndef ACTCLUST_ROBUST_PARAMS_HPP
#define ACTCLUST_ROBUST_PARAMS_HPP

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace actclust {

// All logarithms here are natural logarithms.

/// Parameters of the voting split and of its sample-size calculus.
struct RobustParams {
  int m = 40;                  // voting-set size
  double gamma = 0.30;         // outlier-fraction threshold, in (0, 1/2)
  double q = 0.05;             // assumed inconsistency probability, in [0, 1/2)
  double eta = 0.5;            // assumed balance floor, in (0, 1/2]
  double delta = 0.1;          // global failure probability
  double delta_split = 0.05;   // per-split failure probability

  void validate() const;
  nlohmann::json to_json() const;
};

/// Raised when a sample-size requirement is asked for outside its assumptions.
class AssumptionViolation : public std::domain_error {
 public:
  AssumptionViolation(std::string assumption, const std::string& what)
      : std::domain_error(what), assumption_(std::move(assumption)) {}
  const std::string& assumption() const { return assumption_; }

 private:
  std::string assumption_;
};

/// Largest q admitted by A1: 1 - 1 / sqrt(2 (1 - delta_split)).
double a1_max_q(double delta_split);
bool a1_holds(double q, double delta_split);

/// A2: 1 - (1 - q)^2 < gamma < (1 - q)^2 eta.
struct A2Check {
  bool feasible = false;
  double lower = 0.0;  // 1 - (1 - q)^2
  double upper = 0.0;  // (1 - q)^2 eta
  bool interval_empty() const { return !(lower < upper); }
};
A2Check a2_feasible(double q, double gamma, double eta);

/// The sample-size constant
///   max( 1 / (2 ((1 - d)(1 - q)^2 - 1/2)^2),
///        1 / (2 min((gamma - 1 + (1 - q)^2)^2, ((1 - q)^2 eta - gamma)^2)) ).
/// Throws AssumptionViolation when A1 or A2 fails.
double c0(double delta_split, double q, double gamma, double eta);

/// ceil(c0 * ln(4 n / delta_split)).
int required_m_split(int n, double delta_split, double q, double gamma, double eta);

/// Per-split failure probability after a union bound over every cluster of an
/// N-leaf tree with balance floor eta: delta / (2 N^{1 / ln(1 / (1 - eta))}).
double union_bounded_delta(int n_items, double delta, double eta);

enum class GlobalMMode {
  Conservative,  // split requirement at the root with the union-bounded delta
  Literal,       // k0 = c0(delta, ...) / (1 + 1 / ln(1 / (1 - eta))), m = k0 ln(8 N / delta)
};

double k0_literal(double delta, double q, double gamma, double eta);

int required_m_global(int n_items, double delta, double q, double gamma, double eta,
                      GlobalMMode mode = GlobalMMode::Conservative);

}  // namespace actclust

#endif  // ACTCLUST_ROBUST_PARAMS_HPP
