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

// Line-delimited JSON records for captions, QA items, predictions and score
// reports.
//
// Caption:    {"clip_id", "source_id", "class", "instance_idx", "text_rule",
//              "text_rephrased"?, "rephrase_provider"?}
// QA item:    {"question_id", "clip_id", "type", "subtype", "question_text",
//              "variants": [10 strings], "answer": {"kind", "value"}}
//             value is "yes"/"no" for yes_no, else a list of class labels.
// Prediction: {"question_id", "answer"} with answer "yes"/"no" or a list of
//             class labels.

#ifndef SELDQA_RECORDS_HPP_
#define SELDQA_RECORDS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seldqa/captioner.hpp"
#include "seldqa/qa_generator.hpp"
#include "seldqa/scoring.hpp"

namespace seldqa {

using Json = nlohmann::ordered_json;

Json CaptionToJson(const InstanceCaption& c, const ClassVocabulary& vocab);
InstanceCaption CaptionFromJson(const Json& j, const ClassVocabulary& vocab);

Json AnswerValueToJson(const Answer& a, const ClassVocabulary& vocab);
Json QaItemToJson(const QaItem& item, const ClassVocabulary& vocab);
QaItem QaItemFromJson(const Json& j, const ClassVocabulary& vocab);

/// Labels outside the vocabulary are kept as distinct negative ids so they
/// score as wrong classes instead of being dropped. `unknown_labels` maps
/// such labels to their ids and is extended as new ones are met.
Prediction PredictionFromJson(const Json& j, const ClassVocabulary& vocab,
                              std::vector<std::string>& unknown_labels);
Json PredictionToJson(const Prediction& p, const ClassVocabulary& vocab);

Json ReportToJson(const ScoreReport& r);

/// One JSON document per non-blank line. Throws InputError when the file
/// cannot be read and ParseError (with the line number) on bad JSON.
std::vector<Json> ReadJsonLines(const std::filesystem::path& path);

/// Compact single-line dump followed by '\n'.
std::string ToJsonLine(const Json& j);

/// Writes via a temporary sibling file and rename, so readers never observe
/// a partial file.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace seldqa

#endif  // SELDQA_RECORDS_HPP_
