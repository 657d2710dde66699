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

#ifndef SELDQA_SCORING_HPP_
#define SELDQA_SCORING_HPP_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "seldqa/qa_generator.hpp"
#include "seldqa/scene_model.hpp"

namespace seldqa {

class ScoringError : public Error {
 public:
  using Error::Error;
};

struct DetectionCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;

  DetectionCounts& operator+=(const DetectionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const DetectionCounts&) const = default;

  // Empty denominators score 0.
  double precision() const;
  double recall() const;
  double f1() const;
};

/// 2PR / (P + R), or 0 when P + R = 0.
double HarmonicF1(double precision, double recall);

/// TP/FP/FN of one answer. Lists compare as sets; a yes/no answer scores
/// the single queried class. Throws ScoringError when one answer is yes/no
/// and the other a class list.
DetectionCounts ScoreDetection(const Answer& gt, const Answer& pred);

/// Modified mean reciprocal rank:
///   (1/n) * sum over c in gt of [c in pred] / (1 + |rank_pred(c) - rank_gt(c)|)
/// with 1-based ranks. Classes only in `pred` do not contribute. Throws
/// InputError when `gt` is empty or either list repeats a class.
double MrrMod(std::span<const int> gt_order, std::span<const int> pred_order);

struct Prediction {
  std::string question_id;
  Answer answer;
};

struct ItemError {
  std::string question_id;
  std::string message;
};

struct MetricSummary {
  DetectionCounts counts;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int n_items = 0;
};

struct MrrSummary {
  double sum = 0;
  int n = 0;
  double mean() const { return n > 0 ? sum / n : 0.0; }
};

enum class Averaging { kMicro, kMacro };

struct ScoreReport {
  Averaging averaging = Averaging::kMicro;
  MetricSummary overall;
  std::map<QuestionType, MetricSummary> per_type;
  MrrSummary spatial;   // Type III extremes + Type IV
  MrrSummary temporal;  // Type V
  std::map<std::string, MrrSummary> per_subtype_mrr;  // "III:nearest", ...
  int n_missing = 0;    // gt questions without a prediction
  std::vector<ItemError> errors;  // excluded from every aggregate
  std::vector<std::string> unknown_question_ids;

  double spatial_mrr_mod() const { return spatial.mean(); }
  double temporal_mrr_mod() const { return temporal.mean(); }
};

/// Scores predictions against ground truth. Missing predictions count as
/// empty answers ("no" for yes/no). Unknown question ids and malformed
/// items are reported and excluded. In micro mode TP/FP/FN are pooled over
/// all questions; in macro mode overall precision and recall are the mean
/// of the per-type values and F1 is their harmonic mean.
ScoreReport ScoreAnswers(const std::vector<QaItem>& ground_truth,
                         const std::vector<Prediction>& predictions,
                         Averaging averaging = Averaging::kMicro);

/// Reads a QA dataset file and a prediction file (line-delimited JSON) and
/// scores them. Unreadable or malformed files throw.
ScoreReport ScoreDataset(const std::filesystem::path& gt_file,
                         const std::filesystem::path& pred_file,
                         const ClassVocabulary& vocab,
                         Averaging averaging = Averaging::kMicro);

/// Fixed-width table with the columns Precision, Recall, F1,
/// Spatial MRR_mod and Temporal MRR_mod, followed by a per-type breakdown.
std::string RenderReportTable(const ScoreReport& report,
                              const std::string& model_name = "submission");

}  // namespace seldqa

#endif  // SELDQA_SCORING_HPP_
