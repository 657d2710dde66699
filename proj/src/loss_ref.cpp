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

#include "seldqa/loss_ref.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace seldqa::loss {

void LossConfig::Validate() const {
  if (!(margin >= 0)) throw RangeError("margin must be non-negative");
  if (!(bce_clamp > 0 && bce_clamp < 0.5))
    throw RangeError("bce clamp must lie in (0, 0.5)");
}

OrderingScores::OrderingScores(std::vector<double> p) : p_(std::move(p)) {
  for (double v : p_)
    if (!(v >= 0.0 && v <= 1.0))
      throw RangeError("ordering score outside [0, 1]");
}

OrderingTarget EncodeIdealScores(std::span<const int> order, int num_classes) {
  if (num_classes <= 0) throw InputError("need at least one class");
  OrderingTarget t;
  t.num_classes = num_classes;
  t.ideal.assign(num_classes, 0.0);
  std::vector<bool> used(num_classes, false);
  const int m_total = static_cast<int>(order.size());
  for (int m = 0; m < m_total; ++m) {
    const int c = order[m];
    if (c < 0 || c >= num_classes)
      throw InputError("class index " + std::to_string(c) + " out of range");
    if (used[c])
      throw InputError("class index " + std::to_string(c) + " repeated");
    used[c] = true;
    t.active.push_back(c);
    // 1-based rank m+1 gets (M - (m+1) + 1) / M.
    t.ideal[c] = static_cast<double>(m_total - m) / m_total;
  }
  for (int c = 0; c < num_classes; ++c)
    if (!used[c]) t.inactive.push_back(c);
  return t;
}

namespace {

void CheckSize(std::size_t n, const OrderingTarget& t) {
  if (static_cast<int>(n) != t.num_classes)
    throw InputError("score vector has " + std::to_string(n) +
                     " entries, expected " + std::to_string(t.num_classes));
}

// Visits every hinge pair (higher-ranked, lower-ranked) of the ranking loss.
template <typename Visit>
void ForEachHingePair(const OrderingTarget& t, Visit visit) {
  const std::size_t m = t.active.size();
  for (std::size_t i = 0; i < m; ++i)
    for (int j : t.inactive) visit(t.active[i], j);
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) visit(t.active[i], t.active[j]);
}

template <typename T>
T RankingValue(std::span<const T> p, const OrderingTarget& t, T margin) {
  T sum = 0;
  ForEachHingePair(t, [&](int hi, int lo) {
    sum += std::max(T(0), margin - (p[hi] - p[lo]));
  });
  return sum;
}

template <typename T>
T L1Value(std::span<const T> p, const OrderingTarget& t) {
  T sum = 0;
  for (int i = 0; i < t.num_classes; ++i)
    sum += std::abs(static_cast<T>(t.ideal[i]) - p[i]);
  return sum;
}

}  // namespace

double RankingLoss(std::span<const double> p, const OrderingTarget& target,
                   const LossConfig& cfg) {
  CheckSize(p.size(), target);
  return RankingValue<double>(p, target, cfg.margin);
}

double RankingLoss(const OrderingScores& p, const OrderingTarget& target,
                   const LossConfig& cfg) {
  return RankingLoss(p.values(), target, cfg);
}

double L1Loss(std::span<const double> p, const OrderingTarget& target) {
  CheckSize(p.size(), target);
  return L1Value<double>(p, target);
}

double L1Loss(const OrderingScores& p, const OrderingTarget& target) {
  return L1Loss(p.values(), target);
}

double BceLoss(std::span<const double> q, std::span<const double> y,
               const LossConfig& cfg) {
  if (q.size() != y.size())
    throw InputError("BCE inputs differ in length");
  if (q.empty()) return 0.0;
  const double eps = cfg.bce_clamp;
  double sum = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!(q[k] >= 0.0 && q[k] <= 1.0))
      throw RangeError("BCE probability outside [0, 1]");
    if (y[k] != 0.0 && y[k] != 1.0) throw InputError("BCE label must be 0 or 1");
    const double qc = std::clamp(q[k], eps, 1.0 - eps);
    sum -= y[k] == 1.0 ? std::log(qc) : std::log1p(-qc);
  }
  return sum / static_cast<double>(q.size());
}

std::vector<double> RankingLossGradient(std::span<const double> p,
                                        const OrderingTarget& target,
                                        const LossConfig& cfg) {
  CheckSize(p.size(), target);
  std::vector<double> g(p.size(), 0.0);
  ForEachHingePair(target, [&](int hi, int lo) {
    if (cfg.margin - (p[hi] - p[lo]) > 0) {
      g[hi] -= 1.0;
      g[lo] += 1.0;
    }
  });
  return g;
}

std::vector<double> L1LossGradient(std::span<const double> p,
                                   const OrderingTarget& target) {
  CheckSize(p.size(), target);
  std::vector<double> g(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - target.ideal[i];
    g[i] = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
  }
  return g;
}

double RankingKinkDistance(std::span<const double> p,
                           const OrderingTarget& target,
                           const LossConfig& cfg) {
  CheckSize(p.size(), target);
  double best = std::numeric_limits<double>::infinity();
  ForEachHingePair(target, [&](int hi, int lo) {
    best = std::min(best, std::abs(cfg.margin - (p[hi] - p[lo])));
  });
  return best;
}

double L1KinkDistance(std::span<const double> p, const OrderingTarget& target) {
  CheckSize(p.size(), target);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    best = std::min(best, std::abs(p[i] - target.ideal[i]));
  return best;
}

LossBreakdown CompositeLoss(const BceInputs& bce,
                            const std::optional<OrderingHead>& spatial,
                            const std::optional<OrderingHead>& temporal,
                            const LossConfig& cfg) {
  cfg.Validate();
  LossBreakdown b;
  b.bce = BceLoss(bce.q, bce.y, cfg);
  if (spatial) {
    b.spatial_rank = RankingLoss(spatial->scores, spatial->target, cfg);
    b.spatial_l1 = L1Loss(spatial->scores, spatial->target);
  }
  if (temporal) {
    b.temporal_rank = RankingLoss(temporal->scores, temporal->target, cfg);
    b.temporal_l1 = L1Loss(temporal->scores, temporal->target);
  }
  b.total = b.bce + b.spatial_rank + b.spatial_l1 + b.temporal_rank +
            b.temporal_l1;
  return b;
}

PiecewiseLinearObjective RankingObjective(OrderingTarget target,
                                          LossConfig cfg) {
  auto t = std::make_shared<const OrderingTarget>(std::move(target));
  return {
      "ranking",
      [t, cfg](std::span<const long double> p) {
        CheckSize(p.size(), *t);
        return RankingValue<long double>(p, *t, cfg.margin);
      },
      [t, cfg](std::span<const double> p) {
        return RankingLossGradient(p, *t, cfg);
      },
      [t, cfg](std::span<const double> p) {
        return RankingKinkDistance(p, *t, cfg);
      }};
}

PiecewiseLinearObjective L1Objective(OrderingTarget target) {
  auto t = std::make_shared<const OrderingTarget>(std::move(target));
  return {"l1",
          [t](std::span<const long double> p) {
            CheckSize(p.size(), *t);
            return L1Value<long double>(p, *t);
          },
          [t](std::span<const double> p) { return L1LossGradient(p, *t); },
          [t](std::span<const double> p) { return L1KinkDistance(p, *t); }};
}

GradCheckResult GradCheck(const PiecewiseLinearObjective& objective,
                          std::span<const double> point,
                          std::span<const double> direction,
                          const GradCheckOptions& opts) {
  if (point.size() != direction.size())
    throw InputError("point and direction differ in length");
  for (double d : direction)
    if (!(std::abs(d) <= 1.0))
      throw InputError("direction must have max-norm <= 1");
  const double h = opts.step;
  const double kink = objective.kink_distance(point);
  if (!(kink > 10.0 * h))
    throw KinkError(objective.name + ": point lies " + std::to_string(kink) +
                    " from a kink (need > " + std::to_string(10.0 * h) + ")");

  const auto grad = objective.gradient(point);
  GradCheckResult r;
  for (std::size_t i = 0; i < point.size(); ++i) r.analytic += grad[i] * direction[i];

  std::vector<long double> plus(point.size()), minus(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    plus[i] = static_cast<long double>(point[i]) +
              static_cast<long double>(h) * direction[i];
    minus[i] = static_cast<long double>(point[i]) -
               static_cast<long double>(h) * direction[i];
  }
  const long double diff = objective.value(plus) - objective.value(minus);
  r.numeric = static_cast<double>(diff / (2.0L * static_cast<long double>(h)));

  const double err = std::abs(r.analytic - r.numeric);
  const double scale = std::max(std::abs(r.analytic), std::abs(r.numeric));
  r.passed = err <= std::max(opts.rel_tol * scale, opts.abs_tol);
  return r;
}

}  // namespace seldqa::loss
