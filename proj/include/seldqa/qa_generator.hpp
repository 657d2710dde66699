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

#ifndef SELDQA_QA_GENERATOR_HPP_
#define SELDQA_QA_GENERATOR_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seldqa/captioner.hpp"
#include "seldqa/instances.hpp"
#include "seldqa/scene_model.hpp"

namespace seldqa {

/// Number of paraphrased variants attached to every question.
inline constexpr int kVariantsPerQuestion = 10;

enum class QuestionType { kI = 1, kII, kIII, kIV, kV };

/// "I".."V".
std::string_view ToString(QuestionType t);
/// Inverse of ToString; throws InputError.
QuestionType ParseQuestionType(std::string_view s);

struct Answer {
  enum class Kind { kYesNo, kClassSet, kClassRanking };

  Kind kind = Kind::kClassSet;
  std::optional<bool> yes_no;  // set iff kind == kYesNo
  std::vector<int> classes;    // class indices, no duplicates

  static Answer YesNo(bool yes) { return {Kind::kYesNo, yes, {}}; }
  static Answer ClassSet(std::vector<int> c) {
    return {Kind::kClassSet, std::nullopt, std::move(c)};
  }
  static Answer ClassRanking(std::vector<int> c) {
    return {Kind::kClassRanking, std::nullopt, std::move(c)};
  }

  bool is_list() const { return kind != Kind::kYesNo; }

  /// Throws InputError on a malformed answer (yes_no/kind mismatch or
  /// duplicate classes).
  void Validate() const;

  bool operator==(const Answer&) const = default;
};

std::string_view ToString(Answer::Kind k);
Answer::Kind ParseAnswerKind(std::string_view s);

struct QaItem {
  std::string question_id;  // "{clip_id}:{type}:{subtype}:{k}"
  std::string clip_id;
  QuestionType qtype = QuestionType::kI;
  std::string subtype;
  std::string question_text;
  std::vector<std::string> variants;
  Answer answer;

  bool operator==(const QaItem&) const = default;
};

std::string QuestionId(std::string_view clip_id, QuestionType t,
                       std::string_view subtype, int k = 0);

/// Initial time and position of a class's earliest instance in a clip.
struct ClassFirstAppearance {
  int class_idx = 0;
  int source_id = 0;
  int instance_idx = 0;
  int onset_frame = 0;
  int azimuth_deg = 0;
  int elevation_deg = 0;
  int distance_cm = 0;
  bool is_moving = false;

  double onset_s() const { return FrameToSeconds(onset_frame); }
};

/// One record per active class, ordered by class index. The earliest
/// instance wins; ties go to the smaller source id, then instance index.
std::vector<ClassFirstAppearance> FirstAppearances(
    const Clip& clip, const StaticTolerances& tol);

/// Which sign of azimuth points to the listener's left.
enum class AzimuthConvention { kLeftPositive, kRightPositive };

struct QaOptions {
  StaticTolerances tol;
  AzimuthConvention convention = AzimuthConvention::kLeftPositive;
  /// Keep all "yes" Type I items and a seeded sample of the same number of
  /// "no" items (at least one) instead of all N.
  bool balance_type1 = false;
};

// The generators below fill question_text and answer; variants are
// attached by GenerateClipQa (or VariantsFor).

/// Yes/no presence question for every vocabulary class.
std::vector<QaItem> GenType1(const Clip& clip, const ClassVocabulary& vocab,
                             const StaticTolerances& tol = {});

/// Active classes in first-appearance order.
QaItem GenType2(const Clip& clip, const ClassVocabulary& vocab,
                const StaticTolerances& tol = {});

/// Stationary and moving lists, then the six extremes when at least one
/// class is active.
std::vector<QaItem> GenType3(const Clip& clip, const ClassVocabulary& vocab,
                             const QaOptions& opts = {});

/// Ascending/descending rankings by azimuth, elevation and distance. Empty
/// when fewer than two classes are active.
std::vector<QaItem> GenType4(const Clip& clip, const ClassVocabulary& vocab,
                             const QaOptions& opts = {});

/// Ranking by onset; nullopt when fewer than two classes are active.
std::optional<QaItem> GenType5(const Clip& clip, const ClassVocabulary& vocab,
                               const StaticTolerances& tol = {});

/// Ten paraphrases of the item's question. Offline: drawn from a per-subtype
/// template bank, seeded by (rephraser seed, question_id). Remote: requested
/// from the client; every class label in the canonical question must
/// survive verbatim. Throws RephraseValidationError/RephraseTransportError.
std::vector<std::string> VariantsFor(const QaItem& item,
                                     const ClassVocabulary& vocab,
                                     const Rephraser& rephraser);

/// Offline template-bank variants only.
std::vector<std::string> OfflineVariants(const QaItem& item,
                                         const ClassVocabulary& vocab,
                                         std::uint64_t seed);

/// Checks a remote variant list: exactly `kVariantsPerQuestion` distinct
/// non-empty strings, each containing every entry of `required_terms`.
void ValidateVariants(const std::vector<std::string>& variants,
                      const std::vector<std::string>& required_terms);

/// Every question for a clip, sorted by (qtype, subtype), variants attached.
/// A clip with no active class yields only Type I items. Remote variant
/// failures fall back to the offline bank; `variant_fallbacks`, when given,
/// is incremented once per fallback.
std::vector<QaItem> GenerateClipQa(const Clip& clip,
                                   const ClassVocabulary& vocab,
                                   const QaOptions& opts,
                                   const Rephraser& rephraser,
                                   int* variant_fallbacks = nullptr);

/// (qtype, subtype) -> answer view used when comparing generators.
struct AnswerKey {
  QuestionType qtype;
  std::string subtype;
  Answer answer;

  bool operator==(const AnswerKey&) const = default;
};

}  // namespace seldqa

#endif  // SELDQA_QA_GENERATOR_HPP_
