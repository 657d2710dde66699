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

#include "seldqa/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "seldqa/records.hpp"

namespace seldqa {

double DetectionCounts::precision() const {
  return tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                     : 0.0;
}

double DetectionCounts::recall() const {
  return tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                     : 0.0;
}

double DetectionCounts::f1() const { return HarmonicF1(precision(), recall()); }

double HarmonicF1(double precision, double recall) {
  return precision + recall > 0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
}

DetectionCounts ScoreDetection(const Answer& gt, const Answer& pred) {
  if (gt.is_list() != pred.is_list())
    throw ScoringError(std::string("answer kind mismatch: expected ") +
                       std::string(ToString(gt.kind)) + ", got " +
                       std::string(ToString(pred.kind)));
  DetectionCounts c;
  if (!gt.is_list()) {
    if (!gt.yes_no || !pred.yes_no)
      throw ScoringError("yes/no answer without a value");
    if (*gt.yes_no && *pred.yes_no) c.tp = 1;
    if (!*gt.yes_no && *pred.yes_no) c.fp = 1;
    if (*gt.yes_no && !*pred.yes_no) c.fn = 1;
    return c;
  }
  const std::set<int> g(gt.classes.begin(), gt.classes.end());
  const std::set<int> p(pred.classes.begin(), pred.classes.end());
  for (int x : p) (g.count(x) ? c.tp : c.fp) += 1;
  for (int x : g)
    if (!p.count(x)) c.fn += 1;
  return c;
}

namespace {

void RequireDistinct(std::span<const int> v, const char* which) {
  std::set<int> seen;
  for (int x : v)
    if (!seen.insert(x).second)
      throw InputError(std::string(which) + " ordering repeats class " +
                       std::to_string(x));
}

}  // namespace

double MrrMod(std::span<const int> gt_order, std::span<const int> pred_order) {
  if (gt_order.empty()) throw InputError("ground-truth ordering is empty");
  RequireDistinct(gt_order, "ground-truth");
  RequireDistinct(pred_order, "predicted");
  double sum = 0.0;
  for (std::size_t r = 0; r < gt_order.size(); ++r) {
    const auto it =
        std::find(pred_order.begin(), pred_order.end(), gt_order[r]);
    if (it == pred_order.end()) continue;
    const auto r_hat = static_cast<std::size_t>(it - pred_order.begin());
    const double displacement =
        r_hat > r ? static_cast<double>(r_hat - r) : static_cast<double>(r - r_hat);
    sum += 1.0 / (1.0 + displacement);
  }
  return sum / static_cast<double>(gt_order.size());
}

namespace {

bool IsSpatialOrdering(const QaItem& q) {
  if (q.qtype == QuestionType::kIV) return true;
  return q.qtype == QuestionType::kIII && q.subtype != "stationary" &&
         q.subtype != "moving";
}

void Finish(MetricSummary& m) {
  m.precision = m.counts.precision();
  m.recall = m.counts.recall();
  m.f1 = m.counts.f1();
}

}  // namespace

ScoreReport ScoreAnswers(const std::vector<QaItem>& ground_truth,
                         const std::vector<Prediction>& predictions,
                         Averaging averaging) {
  ScoreReport report;
  report.averaging = averaging;

  std::unordered_map<std::string, const QaItem*> gt_index;
  for (const auto& q : ground_truth)
    if (!gt_index.emplace(q.question_id, &q).second)
      report.errors.push_back({q.question_id, "duplicate ground-truth question"});

  std::unordered_map<std::string, const Prediction*> pred_index;
  for (const auto& p : predictions) {
    if (!gt_index.count(p.question_id)) {
      report.unknown_question_ids.push_back(p.question_id);
      continue;
    }
    if (!pred_index.emplace(p.question_id, &p).second)
      report.errors.push_back({p.question_id, "duplicate prediction; first kept"});
  }

  std::set<std::string> scored;
  for (const auto& q : ground_truth) {
    if (!scored.insert(q.question_id).second) continue;
    Answer pred;
    if (auto it = pred_index.find(q.question_id); it != pred_index.end()) {
      pred = it->second->answer;
    } else {
      ++report.n_missing;
      pred = q.answer.is_list() ? Answer::ClassRanking({}) : Answer::YesNo(false);
    }

    DetectionCounts counts;
    std::optional<double> mrr;
    try {
      pred.Validate();
      counts = ScoreDetection(q.answer, pred);
      if (IsSpatialOrdering(q) || q.qtype == QuestionType::kV)
        mrr = MrrMod(q.answer.classes, pred.classes);
    } catch (const Error& e) {
      report.errors.push_back({q.question_id, e.what()});
      continue;
    }

    report.overall.counts += counts;
    ++report.overall.n_items;
    auto& t = report.per_type[q.qtype];
    t.counts += counts;
    ++t.n_items;
    if (mrr) {
      auto& bucket = q.qtype == QuestionType::kV ? report.temporal : report.spatial;
      bucket.sum += *mrr;
      ++bucket.n;
      auto& sub = report.per_subtype_mrr[std::string(ToString(q.qtype)) + ":" +
                                         q.subtype];
      sub.sum += *mrr;
      ++sub.n;
    }
  }

  for (auto& [type, m] : report.per_type) Finish(m);
  Finish(report.overall);
  if (averaging == Averaging::kMacro && !report.per_type.empty()) {
    double p = 0, r = 0;
    for (const auto& [type, m] : report.per_type) {
      p += m.precision;
      r += m.recall;
    }
    report.overall.precision = p / static_cast<double>(report.per_type.size());
    report.overall.recall = r / static_cast<double>(report.per_type.size());
    report.overall.f1 = HarmonicF1(report.overall.precision, report.overall.recall);
  }
  return report;
}

ScoreReport ScoreDataset(const std::filesystem::path& gt_file,
                         const std::filesystem::path& pred_file,
                         const ClassVocabulary& vocab, Averaging averaging) {
  std::vector<QaItem> gt;
  std::size_t line = 0;
  for (const auto& j : ReadJsonLines(gt_file)) {
    ++line;
    try {
      gt.push_back(QaItemFromJson(j, vocab));
    } catch (const std::exception& e) {
      throw ParseError(gt_file.string() + ": record " + std::to_string(line) +
                           ": " + e.what(),
                       line);
    }
  }

  std::vector<Prediction> preds;
  std::vector<std::string> unknown_labels;
  std::vector<ItemError> bad_preds;
  for (const auto& j : ReadJsonLines(pred_file)) {
    try {
      preds.push_back(PredictionFromJson(j, vocab, unknown_labels));
    } catch (const std::exception& e) {
      std::string id = j.is_object() && j.contains("question_id") &&
                               j["question_id"].is_string()
                           ? j["question_id"].get<std::string>()
                           : std::string("?");
      bad_preds.push_back({id, std::string("malformed prediction: ") + e.what()});
    }
  }

  ScoreReport report = ScoreAnswers(gt, preds, averaging);
  report.errors.insert(report.errors.begin(), bad_preds.begin(), bad_preds.end());
  return report;
}

namespace {

std::string Fixed(double v, int width, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*f", width, decimals, v);
  return buf;
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string RenderReportTable(const ScoreReport& r,
                              const std::string& model_name) {
  const std::size_t name_w = std::max<std::size_t>(12, model_name.size());
  std::string out;
  out += Pad("Model", name_w) +
         " | Precision | Recall |   F1 | Spatial MRR_mod | Temporal MRR_mod\n";
  out += std::string(name_w, '-') +
         "-+-----------+--------+------+-----------------+-----------------\n";
  out += Pad(model_name, name_w) + " | " + Fixed(r.overall.precision, 9) +
         " | " + Fixed(r.overall.recall, 6) + " | " + Fixed(r.overall.f1, 4) +
         " | " + Fixed(r.spatial_mrr_mod(), 15) + " | " +
         Fixed(r.temporal_mrr_mod(), 16) + "\n";

  out += "\n";
  out += Pad("Type", name_w) + " | Precision | Recall |   F1 | Items\n";
  for (const auto& [type, m] : r.per_type) {
    out += Pad(std::string(ToString(type)), name_w) + " | " +
           Fixed(m.precision, 9) + " | " + Fixed(m.recall, 6) + " | " +
           Fixed(m.f1, 4) + " | " + std::to_string(m.n_items) + "\n";
  }
  out += "\naveraging: ";
  out += r.averaging == Averaging::kMicro ? "micro" : "macro";
  out += ", missing predictions: " + std::to_string(r.n_missing) +
         ", errors: " + std::to_string(r.errors.size()) +
         ", unknown question ids: " +
         std::to_string(r.unknown_question_ids.size()) + "\n";
  return out;
}

}  // namespace seldqa
