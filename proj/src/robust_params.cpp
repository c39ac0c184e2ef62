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

#include "actclust/robust_params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace actclust {
namespace {

void check_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
}

void check_common(double q, double gamma, double eta) {
  if (!(q >= 0.0 && q < 0.5)) throw std::invalid_argument("q must lie in [0, 1/2)");
  if (!(gamma > 0.0 && gamma < 0.5)) throw std::invalid_argument("gamma must lie in (0, 1/2)");
  if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("eta must lie in (0, 1/2]");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void RobustParams::validate() const {
  if (m < 1) throw std::invalid_argument("m must be positive");
  check_common(q, gamma, eta);
  check_unit_open(delta, "delta");
  check_unit_open(delta_split, "delta'");
}

nlohmann::json RobustParams::to_json() const {
  return {{"m", m},         {"gamma", gamma}, {"q", q},
          {"eta", eta},     {"delta", delta}, {"delta_split", delta_split},
          {"log_base", "e"}};
}

double a1_max_q(double delta_split) {
  check_unit_open(delta_split, "delta'");
  return 1.0 - 1.0 / std::sqrt(2.0 * (1.0 - delta_split));
}

bool a1_holds(double q, double delta_split) { return q <= a1_max_q(delta_split); }

A2Check a2_feasible(double q, double gamma, double eta) {
  const double keep = (1.0 - q) * (1.0 - q);
  A2Check out;
  out.lower = 1.0 - keep;
  out.upper = keep * eta;
  out.feasible = out.lower < gamma && gamma < out.upper;
  return out;
}

double c0(double delta_split, double q, double gamma, double eta) {
  check_unit_open(delta_split, "delta'");
  check_common(q, gamma, eta);
  const double keep = (1.0 - q) * (1.0 - q);
  const double agreement_gap = (1.0 - delta_split) * keep - 0.5;
  if (!a1_holds(q, delta_split) || !(agreement_gap > 0.0))
    throw AssumptionViolation("A1", "A1 violated: q = " + fmt(q) + " exceeds 1 - 1/sqrt(2(1 - delta')) = " +
                                        fmt(a1_max_q(delta_split)));
  const A2Check a2 = a2_feasible(q, gamma, eta);
  if (!a2.feasible)
    throw AssumptionViolation("A2", "A2 violated: need " + fmt(a2.lower) + " < gamma = " + fmt(gamma) +
                                        " < " + fmt(a2.upper));
  const double lower_gap = gamma - 1.0 + keep;
  const double upper_gap = keep * eta - gamma;
  const double vote_term = 1.0 / (2.0 * agreement_gap * agreement_gap);
  const double threshold_term =
      1.0 / (2.0 * std::min(lower_gap * lower_gap, upper_gap * upper_gap));
  return std::max(vote_term, threshold_term);
}

int required_m_split(int n, double delta_split, double q, double gamma, double eta) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const double c = c0(delta_split, q, gamma, eta);
  return static_cast<int>(std::ceil(c * std::log(4.0 * n / delta_split)));
}

double union_bounded_delta(int n_items, double delta, double eta) {
  if (n_items < 2) throw std::invalid_argument("N must be >= 2");
  check_unit_open(delta, "delta");
  if (!(eta > 0.0 && eta <= 0.5)) throw std::invalid_argument("eta must lie in (0, 1/2]");
  const double exponent = 1.0 / std::log(1.0 / (1.0 - eta));
  return delta / (2.0 * std::pow(static_cast<double>(n_items), exponent));
}

double k0_literal(double delta, double q, double gamma, double eta) {
  const double c = c0(delta, q, gamma, eta);
  return c / (1.0 + 1.0 / std::log(1.0 / (1.0 - eta)));
}

int required_m_global(int n_items, double delta, double q, double gamma, double eta, GlobalMMode mode) {
  const double d_split = union_bounded_delta(n_items, delta, eta);
  if (mode == GlobalMMode::Conservative) return required_m_split(n_items, d_split, q, gamma, eta);
  // Literal mode still requires A1 at the union-bounded per-split delta.
  if (!a1_holds(q, d_split))
    throw AssumptionViolation("A1", "A1 violated at delta' = " + fmt(d_split));
  const double k0 = k0_literal(delta, q, gamma, eta);
  return static_cast<int>(std::ceil(k0 * std::log(8.0 * n_items / delta)));
}

}  // namespace actclust
