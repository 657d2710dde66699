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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "seldqa/loss_ref.hpp"
#include "seldqa/util.hpp"

namespace seldqa::loss {

double IdealRankingLossClosedForm(int num_active, int num_classes,
                                  double margin) {
  const int m = num_active;
  double within = 0.0, versus_inactive = 0.0;
  for (int k = 1; k < m; ++k)
    within += (m - k) * std::max(0.0, margin - static_cast<double>(k) / m);
  for (int k = 1; k <= m; ++k)
    versus_inactive += std::max(0.0, margin - static_cast<double>(k) / m);
  return within + (num_classes - m) * versus_inactive;
}

namespace {

std::string Sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<int> RandomOrder(StableRng& rng, int n, int m) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < m; ++i)
    std::swap(all[i], all[i + static_cast<int>(rng.Below(n - i))]);
  all.resize(m);
  return all;
}

std::vector<double> RandomPoint(StableRng& rng, int n) {
  std::vector<double> p(n);
  for (auto& v : p) v = rng.Unit();
  return p;
}

std::vector<double> RandomDirection(StableRng& rng, int n) {
  std::vector<double> d(n);
  for (auto& v : d) v = 2.0 * rng.Unit() - 1.0;
  return d;
}

bool Near(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

CheckOutcome ReferenceValues() {
  CheckOutcome out{"reference values (delta=0.3)", true, ""};
  std::ostringstream why;
  const LossConfig cfg;  // margin 0.3 regardless of the suite config
  auto expect = [&](const char* what, double got, double want,
                    double tol = 1e-12) {
    if (!Near(got, want, tol)) {
      out.passed = false;
      why << what << ": got " << got << " want " << want << "; ";
    }
  };
  const std::vector<int> a0{0};
  const auto t = EncodeIdealScores(a0, 3);
  expect("ranking [0.8,0.1,0]", RankingLoss(std::vector{0.8, 0.1, 0.0}, t, cfg), 0.0);
  expect("ranking [0.4,0.2,0.3]", RankingLoss(std::vector{0.4, 0.2, 0.3}, t, cfg), 0.3);
  expect("l1 [0.8,0.1,0]", L1Loss(std::vector{0.8, 0.1, 0.0}, t), 0.3);
  const std::vector<int> a01{0, 1};
  const auto t2 = EncodeIdealScores(a01, 3);
  expect("ranking ideal M=2", RankingLoss(t2.ideal, t2, cfg), 0.0);
  expect("l1 zero vs [1,0.5,0]", L1Loss(std::vector{0.0, 0.0, 0.0}, t2), 1.5);
  expect("bce y=1 q=0.5", BceLoss(std::vector{0.5}, std::vector{1.0}, cfg),
         std::log(2.0));
  // 1 - (1 - eps) is not exactly eps in binary, hence the looser bound.
  expect("bce y=0 q=1", BceLoss(std::vector{1.0}, std::vector{0.0}, cfg),
         -std::log(cfg.bce_clamp), 1e-7);
  out.detail = why.str();
  return out;
}

// Every non-empty class subset at N = num_classes, in a seeded order.
CheckOutcome IdealEncodingClosedForm(const SelfCheckOptions& o) {
  CheckOutcome out{"ideal encoding vs closed form", true, ""};
  const int n = o.num_classes;
  StableRng rng(MixSeed(o.seed, "ideal-encoding"));
  long checked = 0;
  double worst = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> order;
    for (int c = 0; c < n; ++c)
      if (mask & (1u << c)) order.push_back(c);
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.Below(i)]);
    const auto t = EncodeIdealScores(order, n);
    const int m = static_cast<int>(order.size());
    const double got = RankingLoss(t.ideal, t, o.cfg);
    const double want = IdealRankingLossClosedForm(m, n, o.cfg.margin);
    worst = std::max(worst, std::abs(got - want));
    if (m <= 3 && o.cfg.margin <= 1.0 / 3.0 && got > 1e-12) {
      out.passed = false;
      out.detail = "non-zero ideal loss at M=" + std::to_string(m);
    }
    ++checked;
  }
  if (worst > 1e-12) out.passed = false;
  out.detail += std::to_string(checked) + " subsets, max |diff| " + Sci(worst);
  return out;
}

CheckOutcome GradientSweep(const SelfCheckOptions& o, bool ranking) {
  CheckOutcome out{ranking ? "gradient check: ranking" : "gradient check: l1",
                   true, ""};
  StableRng rng(MixSeed(o.seed, ranking ? "grad-ranking" : "grad-l1"));
  const GradCheckOptions gopts;
  int done = 0, failed = 0, rejected = 0;
  double worst = 0.0;
  while (done < o.trials) {
    const int m = rng.Uniform(0, o.num_classes);
    const auto target = EncodeIdealScores(RandomOrder(rng, o.num_classes, m),
                                          o.num_classes);
    auto objective = ranking ? RankingObjective(target, o.cfg) : L1Objective(target);
    if (ranking && o.inject_broken_gradient) {
      auto good = objective.gradient;
      objective.gradient = [good](std::span<const double> p) {
        auto g = good(p);
        g[0] += 1.0;
        return g;
      };
    }
    const auto p = RandomPoint(rng, o.num_classes);
    const auto d = RandomDirection(rng, o.num_classes);
    try {
      const auto r = GradCheck(objective, p, d, gopts);
      worst = std::max(worst, std::abs(r.analytic - r.numeric));
      if (!r.passed) ++failed;
      ++done;
    } catch (const KinkError&) {
      ++rejected;  // resample
    }
  }
  out.passed = failed == 0;
  out.detail = std::to_string(done) + " points, " + std::to_string(failed) +
               " mismatches, " + std::to_string(rejected) +
               " near-kink points resampled, max |diff| " + Sci(worst);
  return out;
}

CheckOutcome L1Convexity(const SelfCheckOptions& o) {
  CheckOutcome out{"l1 convexity", true, ""};
  StableRng rng(MixSeed(o.seed, "convexity"));
  int violations = 0;
  for (int k = 0; k < o.trials; ++k) {
    const int m = rng.Uniform(0, o.num_classes);
    const auto t = EncodeIdealScores(RandomOrder(rng, o.num_classes, m), o.num_classes);
    const auto p = RandomPoint(rng, o.num_classes);
    const auto q = RandomPoint(rng, o.num_classes);
    const double w = rng.Unit();
    std::vector<double> mix(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) mix[i] = w * p[i] + (1 - w) * q[i];
    if (L1Loss(mix, t) > w * L1Loss(p, t) + (1 - w) * L1Loss(q, t) + 1e-12)
      ++violations;
  }
  out.passed = violations == 0;
  out.detail = std::to_string(violations) + " violations in " +
               std::to_string(o.trials) + " trials";
  return out;
}

CheckOutcome PermutationEquivariance(const SelfCheckOptions& o) {
  CheckOutcome out{"permutation equivariance", true, ""};
  StableRng rng(MixSeed(o.seed, "permutation"));
  const int n = o.num_classes;
  int violations = 0;
  for (int k = 0; k < o.trials; ++k) {
    const int m = rng.Uniform(0, n);
    const auto order = RandomOrder(rng, n, m);
    const auto perm = RandomOrder(rng, n, n);  // class c -> perm[c]
    const auto p = RandomPoint(rng, n);
    std::vector<int> order2;
    for (int c : order) order2.push_back(perm[c]);
    std::vector<double> p2(n);
    for (int c = 0; c < n; ++c) p2[perm[c]] = p[c];
    const auto t = EncodeIdealScores(order, n);
    const auto t2 = EncodeIdealScores(order2, n);
    if (!Near(RankingLoss(p, t, o.cfg), RankingLoss(p2, t2, o.cfg), 1e-9) ||
        !Near(L1Loss(p, t), L1Loss(p2, t2), 1e-9))
      ++violations;
  }
  out.passed = violations == 0;
  out.detail = std::to_string(violations) + " violations in " +
               std::to_string(o.trials) + " trials";
  return out;
}

CheckOutcome CompositeAdditivity(const SelfCheckOptions& o) {
  CheckOutcome out{"composite additivity", true, ""};
  StableRng rng(MixSeed(o.seed, "composite"));
  const int n = o.num_classes;
  int violations = 0;
  for (int k = 0; k < o.trials; ++k) {
    BceInputs bce;
    for (int i = 0; i < 3 * n + 2; ++i) {
      bce.q.push_back(rng.Unit());
      bce.y.push_back(rng.Bernoulli(0.3) ? 1.0 : 0.0);
    }
    const auto ts = EncodeIdealScores(RandomOrder(rng, n, rng.Uniform(0, n)), n);
    const auto tt = EncodeIdealScores(RandomOrder(rng, n, rng.Uniform(0, n)), n);
    const OrderingHead spatial{OrderingScores(RandomPoint(rng, n)), ts};
    const OrderingHead temporal{OrderingScores(RandomPoint(rng, n)), tt};
    const auto both = CompositeLoss(bce, spatial, temporal, o.cfg);
    const auto no_spatial = CompositeLoss(bce, std::nullopt, temporal, o.cfg);
    const double parts = both.bce + both.spatial_rank + both.spatial_l1 +
                         both.temporal_rank + both.temporal_l1;
    const bool ok = parts == both.total && both.bce >= 0 &&
                    both.spatial_rank >= 0 && both.spatial_l1 >= 0 &&
                    both.temporal_rank >= 0 && both.temporal_l1 >= 0 &&
                    no_spatial.temporal_rank == both.temporal_rank &&
                    no_spatial.temporal_l1 == both.temporal_l1 &&
                    no_spatial.spatial_rank == 0 && no_spatial.spatial_l1 == 0;
    if (!ok) ++violations;
  }
  out.passed = violations == 0;
  out.detail = std::to_string(violations) + " violations in " +
               std::to_string(o.trials) + " trials";
  return out;
}

}  // namespace

std::vector<CheckOutcome> RunSelfCheck(const SelfCheckOptions& opts) {
  opts.cfg.Validate();
  if (opts.num_classes < 1 || opts.num_classes > 20)
    throw RangeError("self-check supports 1..20 classes");
  std::vector<CheckOutcome> out;
  out.push_back(ReferenceValues());
  out.push_back(IdealEncodingClosedForm(opts));
  out.push_back(GradientSweep(opts, true));
  out.push_back(GradientSweep(opts, false));
  out.push_back(L1Convexity(opts));
  out.push_back(PermutationEquivariance(opts));
  out.push_back(CompositeAdditivity(opts));
  return out;
}

}  // namespace seldqa::loss
