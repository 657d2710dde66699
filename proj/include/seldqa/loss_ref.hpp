// Copyright 2026 The seldqa Authors. All Rights Reserved.
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

// Reference implementation of the QA training objective: binary
// cross-entropy on detection outputs plus, per ordering head, a pairwise
// margin ranking loss and an L1 regression toward ideal ordering scores.
//
// An ordering score p_i in [0, 1] is 0 for an inactive class; larger values
// rank earlier (or more extreme) among the active classes.

#ifndef SELDQA_LOSS_REF_HPP_
#define SELDQA_LOSS_REF_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seldqa/scene_model.hpp"

namespace seldqa::loss {

struct LossConfig {
  double margin = 0.3;       // delta
  double bce_clamp = 1e-7;   // epsilon; q is clamped to [eps, 1 - eps]

  /// Throws RangeError unless margin >= 0 and 0 < bce_clamp < 0.5.
  void Validate() const;
};

/// Per-class ordering scores, each in [0, 1].
class OrderingScores {
 public:
  /// Throws RangeError on entries outside [0, 1] or NaN.
  explicit OrderingScores(std::vector<double> p);

  std::span<const double> values() const { return p_; }
  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

struct OrderingTarget {
  int num_classes = 0;
  std::vector<int> active;    // a_1..a_M in rank order
  std::vector<int> inactive;  // the remaining N - M indices, ascending
  std::vector<double> ideal;  // length N
};

/// Ideal scores: the m-th active class (1-based) gets (M - m + 1) / M and
/// inactive classes get 0. Throws InputError on duplicate or out-of-range
/// indices.
OrderingTarget EncodeIdealScores(std::span<const int> order, int num_classes);

/// sum_{i, j in B} max(0, d - (p_ai - p_j)) + sum_{i < j} max(0, d - (p_ai - p_aj))
double RankingLoss(std::span<const double> p, const OrderingTarget& target,
                   const LossConfig& cfg = {});
double RankingLoss(const OrderingScores& p, const OrderingTarget& target,
                   const LossConfig& cfg = {});

/// sum_i |ideal_i - p_i|
double L1Loss(std::span<const double> p, const OrderingTarget& target);
double L1Loss(const OrderingScores& p, const OrderingTarget& target);

/// Mean binary cross-entropy over K outputs; q is clamped to
/// [eps, 1 - eps]. Throws RangeError for q outside [0, 1], InputError for
/// labels other than 0/1 or a length mismatch.
double BceLoss(std::span<const double> q, std::span<const double> y,
               const LossConfig& cfg = {});

/// (Sub)gradients, valid away from hinge/absolute-value kinks.
std::vector<double> RankingLossGradient(std::span<const double> p,
                                        const OrderingTarget& target,
                                        const LossConfig& cfg = {});
std::vector<double> L1LossGradient(std::span<const double> p,
                                   const OrderingTarget& target);

/// Distance from p to the nearest kink: min over hinge pairs of
/// |d - (p_hi - p_lo)|, or min_i |p_i - ideal_i| for L1.
double RankingKinkDistance(std::span<const double> p,
                           const OrderingTarget& target,
                           const LossConfig& cfg = {});
double L1KinkDistance(std::span<const double> p, const OrderingTarget& target);

struct OrderingHead {
  OrderingScores scores;
  OrderingTarget target;
};

struct BceInputs {
  std::vector<double> q;
  std::vector<double> y;
};

struct LossBreakdown {
  double bce = 0;
  double spatial_rank = 0;
  double spatial_l1 = 0;
  double temporal_rank = 0;
  double temporal_l1 = 0;
  double total = 0;  // bce + spatial_rank + spatial_l1 + temporal_rank + temporal_l1
};

/// Unweighted sum of BCE and the ordering losses of whichever heads apply
/// to the question (an absent head contributes 0).
LossBreakdown CompositeLoss(const BceInputs& bce,
                            const std::optional<OrderingHead>& spatial,
                            const std::optional<OrderingHead>& temporal,
                            const LossConfig& cfg = {});

// ---------------------------------------------------------------------------
// Finite-difference gradient checking
// ---------------------------------------------------------------------------

/// A piecewise-linear objective: extended-precision value, analytic
/// gradient and distance to the nearest kink.
struct PiecewiseLinearObjective {
  std::string name;
  std::function<long double(std::span<const long double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
  std::function<double(std::span<const double>)> kink_distance;
};

PiecewiseLinearObjective RankingObjective(OrderingTarget target,
                                          LossConfig cfg = {});
PiecewiseLinearObjective L1Objective(OrderingTarget target);

struct GradCheckOptions {
  double step = 1e-5;      // h
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;   // floor used when the derivative is zero
};

struct GradCheckResult {
  double analytic = 0;  // gradient . direction
  double numeric = 0;   // (f(p + h d) - f(p - h d)) / 2h
  bool passed = false;
};

/// Raised when a grad-check point lies within 10h of a kink.
class KinkError : public InputError {
 public:
  using InputError::InputError;
};

/// Compares the analytic directional derivative with a central difference.
/// `direction` must have max-norm <= 1. Throws KinkError when the point is
/// within 10h of a kink, InputError on size mismatch.
GradCheckResult GradCheck(const PiecewiseLinearObjective& objective,
                          std::span<const double> point,
                          std::span<const double> direction,
                          const GradCheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Self-check suite (backs the `loss-check` command)
// ---------------------------------------------------------------------------

/// Ranking loss of the ideal encoding for M active classes out of N, in
/// closed form: sum_k (M-k) max(0, d - k/M) + (N-M) sum_k max(0, d - k/M).
double IdealRankingLossClosedForm(int num_active, int num_classes,
                                  double margin);

struct SelfCheckOptions {
  std::uint64_t seed = 0;
  int trials = 1000;
  int num_classes = 13;
  LossConfig cfg;
  /// Adds a unit error to one ranking-gradient coordinate; the suite must
  /// then fail.
  bool inject_broken_gradient = false;
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckOutcome> RunSelfCheck(const SelfCheckOptions& opts);

}  // namespace seldqa::loss

#endif  // SELDQA_LOSS_REF_HPP_
