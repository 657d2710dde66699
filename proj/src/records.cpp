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

#include "seldqa/records.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

namespace seldqa {

namespace {

int ClassIndex(const ClassVocabulary& vocab, const std::string& label) {
  const int idx = vocab.Find(label);
  if (idx < 0) throw VocabularyError("unknown class label '" + label + "'");
  return idx;
}

std::vector<int> LabelsToIndices(const Json& list, const ClassVocabulary& vocab) {
  std::vector<int> out;
  for (const auto& l : list) out.push_back(ClassIndex(vocab, l.get<std::string>()));
  return out;
}

}  // namespace

Json CaptionToJson(const InstanceCaption& c, const ClassVocabulary& vocab) {
  Json j;
  j["clip_id"] = c.clip_id;
  j["source_id"] = c.source_id;
  j["class"] = vocab.label(c.class_idx);
  j["instance_idx"] = c.instance_idx;
  j["text_rule"] = c.text_rule;
  if (c.text_rephrased) j["text_rephrased"] = *c.text_rephrased;
  if (c.rephrase_provider) j["rephrase_provider"] = *c.rephrase_provider;
  return j;
}

InstanceCaption CaptionFromJson(const Json& j, const ClassVocabulary& vocab) {
  InstanceCaption c;
  c.clip_id = j.at("clip_id").get<std::string>();
  c.source_id = j.at("source_id").get<int>();
  c.class_idx = ClassIndex(vocab, j.at("class").get<std::string>());
  c.instance_idx = j.at("instance_idx").get<int>();
  c.text_rule = j.at("text_rule").get<std::string>();
  if (j.contains("text_rephrased"))
    c.text_rephrased = j["text_rephrased"].get<std::string>();
  if (j.contains("rephrase_provider"))
    c.rephrase_provider = j["rephrase_provider"].get<std::string>();
  return c;
}

Json AnswerValueToJson(const Answer& a, const ClassVocabulary& vocab) {
  if (a.kind == Answer::Kind::kYesNo) return Json(*a.yes_no ? "yes" : "no");
  Json list = Json::array();
  for (int c : a.classes) list.push_back(vocab.label(c));
  return list;
}

Json QaItemToJson(const QaItem& item, const ClassVocabulary& vocab) {
  Json j;
  j["question_id"] = item.question_id;
  j["clip_id"] = item.clip_id;
  j["type"] = std::string(ToString(item.qtype));
  j["subtype"] = item.subtype;
  j["question_text"] = item.question_text;
  j["variants"] = item.variants;
  j["answer"] = {{"kind", std::string(ToString(item.answer.kind))},
                 {"value", AnswerValueToJson(item.answer, vocab)}};
  return j;
}

QaItem QaItemFromJson(const Json& j, const ClassVocabulary& vocab) {
  QaItem item;
  item.question_id = j.at("question_id").get<std::string>();
  item.clip_id = j.at("clip_id").get<std::string>();
  item.qtype = ParseQuestionType(j.at("type").get<std::string>());
  item.subtype = j.at("subtype").get<std::string>();
  item.question_text = j.value("question_text", std::string());
  if (j.contains("variants"))
    item.variants = j["variants"].get<std::vector<std::string>>();
  const Json& a = j.at("answer");
  item.answer.kind = ParseAnswerKind(a.at("kind").get<std::string>());
  const Json& v = a.at("value");
  if (item.answer.kind == Answer::Kind::kYesNo) {
    const auto s = v.get<std::string>();
    if (s != "yes" && s != "no")
      throw InputError("yes_no answer must be \"yes\" or \"no\"");
    item.answer.yes_no = s == "yes";
  } else {
    item.answer.classes = LabelsToIndices(v, vocab);
  }
  item.answer.Validate();
  return item;
}

Prediction PredictionFromJson(const Json& j, const ClassVocabulary& vocab,
                              std::vector<std::string>& unknown_labels) {
  Prediction p;
  p.question_id = j.at("question_id").get<std::string>();
  const Json& a = j.at("answer");
  if (a.is_string()) {
    const auto s = a.get<std::string>();
    if (s != "yes" && s != "no")
      throw InputError("answer string must be \"yes\" or \"no\"");
    p.answer = Answer::YesNo(s == "yes");
    return p;
  }
  if (!a.is_array())
    throw InputError("answer must be \"yes\", \"no\" or a list of labels");
  std::vector<int> classes;
  for (const auto& l : a) {
    const auto label = l.get<std::string>();
    int idx = vocab.Find(label);
    if (idx < 0) {
      auto it = std::find(unknown_labels.begin(), unknown_labels.end(), label);
      if (it == unknown_labels.end())
        it = unknown_labels.insert(unknown_labels.end(), label);
      idx = -1 - static_cast<int>(it - unknown_labels.begin());
    }
    classes.push_back(idx);
  }
  p.answer = Answer::ClassRanking(std::move(classes));
  return p;
}

Json PredictionToJson(const Prediction& p, const ClassVocabulary& vocab) {
  Json j;
  j["question_id"] = p.question_id;
  j["answer"] = AnswerValueToJson(p.answer, vocab);
  return j;
}

namespace {

Json Summary(const MetricSummary& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
          {"tp", m.counts.tp},        {"fp", m.counts.fp},  {"fn", m.counts.fn},
          {"n_items", m.n_items}};
}

Json Mrr(const MrrSummary& m) { return {{"mrr_mod", m.mean()}, {"n_items", m.n}}; }

}  // namespace

Json ReportToJson(const ScoreReport& r) {
  Json j;
  j["averaging"] = r.averaging == Averaging::kMicro ? "micro" : "macro";
  j["overall"] = Summary(r.overall);
  j["overall"]["spatial_mrr_mod"] = r.spatial_mrr_mod();
  j["overall"]["temporal_mrr_mod"] = r.temporal_mrr_mod();
  j["spatial"] = Mrr(r.spatial);
  j["temporal"] = Mrr(r.temporal);
  Json per_type = Json::object();
  for (const auto& [t, m] : r.per_type) per_type[std::string(ToString(t))] = Summary(m);
  j["per_type"] = per_type;
  Json per_sub = Json::object();
  for (const auto& [k, m] : r.per_subtype_mrr) per_sub[k] = Mrr(m);
  j["per_subtype_mrr"] = per_sub;
  j["n_missing"] = r.n_missing;
  Json errors = Json::array();
  for (const auto& e : r.errors)
    errors.push_back({{"question_id", e.question_id}, {"message", e.message}});
  j["errors"] = errors;
  j["unknown_question_ids"] = r.unknown_question_ids;
  return j;
}

std::vector<Json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<Json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": invalid JSON: " + e.what(),
                       line_no);
    }
  }
  if (in.bad()) throw InputError("error reading " + path.string());
  return out;
}

std::string ToJsonLine(const Json& j) { return j.dump() + "\n"; }

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InputError("error writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace seldqa
