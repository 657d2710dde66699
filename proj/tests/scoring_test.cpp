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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>

#include "seldqa/records.hpp"
#include "seldqa/scoring.hpp"
#include "seldqa/util.hpp"
#include "test_support.hpp"

using namespace seldqa;
using seldqa::testing::DataDir;
using seldqa::testing::TempDir;

namespace {

const ClassVocabulary kVocab = ClassVocabulary::Starss23();

bool Near(double a, double b) { return std::abs(a - b) <= 1e-12; }

QaItem Item(std::string id, QuestionType t, std::string subtype, Answer a) {
  QaItem q;
  q.question_id = std::move(id);
  q.clip_id = "c";
  q.qtype = t;
  q.subtype = std::move(subtype);
  q.answer = std::move(a);
  return q;
}

Json Expected() {
  std::ifstream in(DataDir() / "scoring" / "expected.json");
  return Json::parse(in);
}

}  // namespace

TEST_CASE("set comparison counts") {
  const auto c = ScoreDetection(Answer::ClassSet({0, 1}), Answer::ClassSet({0, 2}));
  CHECK(c == DetectionCounts{1, 1, 1});
  CHECK(c.precision() == 0.5);
  CHECK(c.recall() == 0.5);
  CHECK(c.f1() == 0.5);
  CHECK(ScoreDetection(Answer::ClassSet({3, 4}), Answer::ClassRanking({4, 3})) ==
        DetectionCounts{2, 0, 0});
}

TEST_CASE("yes/no truth table") {
  CHECK(ScoreDetection(Answer::YesNo(true), Answer::YesNo(true)) == DetectionCounts{1, 0, 0});
  CHECK(ScoreDetection(Answer::YesNo(false), Answer::YesNo(true)) == DetectionCounts{0, 1, 0});
  CHECK(ScoreDetection(Answer::YesNo(true), Answer::YesNo(false)) == DetectionCounts{0, 0, 1});
  CHECK(ScoreDetection(Answer::YesNo(false), Answer::YesNo(false)) == DetectionCounts{0, 0, 0});
  CHECK_THROWS_AS(ScoreDetection(Answer::YesNo(true), Answer::ClassSet({1})), ScoringError);
}

TEST_CASE("harmonic f1 convention") {
  CHECK(HarmonicF1(0, 0) == 0);
  CHECK(HarmonicF1(1, 1) == 1);
  CHECK(Near(HarmonicF1(0.5, 1.0), 2.0 / 3.0));
  CHECK(DetectionCounts{}.precision() == 0);
  CHECK(DetectionCounts{}.f1() == 0);
}

TEST_CASE("mrr worked values") {
  const std::vector<int> abc{0, 1, 2};
  CHECK(MrrMod(abc, abc) == 1.0);
  CHECK(Near(MrrMod(abc, std::vector<int>{1, 0, 2}), 2.0 / 3.0));
  CHECK(Near(MrrMod(std::vector<int>{0, 1}, std::vector<int>{1}), 0.25));
  CHECK(MrrMod(abc, std::vector<int>{}) == 0.0);
  CHECK(MrrMod(abc, std::vector<int>{7, 8}) == 0.0);
  CHECK_THROWS_AS(MrrMod(std::vector<int>{}, abc), InputError);
  CHECK_THROWS_AS(MrrMod(std::vector<int>{0, 0}, abc), InputError);
  CHECK_THROWS_AS(MrrMod(abc, std::vector<int>{1, 1}), InputError);
}

TEST_CASE("mrr properties on random orderings") {
  StableRng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.Uniform(1, 8);
    std::vector<int> t(13);
    std::iota(t.begin(), t.end(), 0);
    for (int i = 0; i < n; ++i) std::swap(t[i], t[i + rng.Below(13 - i)]);
    t.resize(n);
    CHECK(MrrMod(t, t) == 1.0);

    std::vector<int> p = t;
    for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng.Below(i)]);
    if (rng.Bernoulli(0.5)) p.push_back(20 + trial % 5);  // a wrong class
    const double m = MrrMod(t, p);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);

    // Relabeling both lists consistently leaves the value unchanged.
    auto relabel = [](std::vector<int> v) {
      for (int& x : v) x = 100 - 3 * x;
      return v;
    };
    CHECK(Near(MrrMod(relabel(t), relabel(p)), m));

    // Dropping a correct element is never better than demoting it to the
    // tail: every other rank is the same and its own term only vanishes.
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (std::find(t.begin(), t.end(), p[k]) == t.end()) continue;
      auto q = p;
      q.erase(q.begin() + static_cast<long>(k));
      auto tail = q;
      tail.push_back(p[k]);
      CHECK(MrrMod(t, q) <= MrrMod(t, tail) + 1e-12);
    }
  }
}

TEST_CASE("dropping a misplaced class can raise mrr") {
  // Removal shifts the classes behind it forward, so the plain "removing a
  // correct element never helps" reading does not hold.
  const std::vector<int> t{0, 1, 2};
  CHECK(Near(MrrMod(t, std::vector<int>{2, 0, 1}), 4.0 / 9.0));
  CHECK(Near(MrrMod(t, std::vector<int>{0, 1}), 2.0 / 3.0));
}

TEST_CASE("identical answers score one and disjoint answers score zero") {
  std::vector<QaItem> gt{Item("a", QuestionType::kII, "active", Answer::ClassSet({1, 2})),
                         Item("b", QuestionType::kI, "x", Answer::YesNo(true)),
                         Item("c", QuestionType::kV, "onset", Answer::ClassRanking({2, 1}))};
  std::vector<Prediction> same;
  for (const auto& q : gt) same.push_back({q.question_id, q.answer});
  const auto r = ScoreAnswers(gt, same);
  CHECK(r.overall.f1 == 1.0);
  CHECK(r.temporal_mrr_mod() == 1.0);

  std::vector<Prediction> disjoint{{"a", Answer::ClassSet({5})},
                                   {"b", Answer::YesNo(false)},
                                   {"c", Answer::ClassRanking({7, 8})}};
  const auto d = ScoreAnswers(gt, disjoint);
  CHECK(d.overall.f1 == 0.0);
  CHECK(d.temporal_mrr_mod() == 0.0);
}

TEST_CASE("an empty prediction set scores zero everywhere") {
  std::vector<QaItem> gt{Item("a", QuestionType::kII, "active", Answer::ClassSet({1, 2})),
                         Item("n", QuestionType::kIII, "nearest", Answer::ClassRanking({1})),
                         Item("o", QuestionType::kV, "onset", Answer::ClassRanking({2, 1}))};
  const auto r = ScoreAnswers(gt, {});
  CHECK(r.overall.recall == 0.0);
  CHECK(r.overall.precision == 0.0);
  CHECK(r.overall.f1 == 0.0);
  CHECK(r.spatial_mrr_mod() == 0.0);
  CHECK(r.temporal_mrr_mod() == 0.0);
  CHECK(r.n_missing == 3);
}

TEST_CASE("unknown ids and kind mismatches are reported and excluded") {
  std::vector<QaItem> gt{Item("a", QuestionType::kI, "x", Answer::YesNo(true)),
                         Item("b", QuestionType::kII, "active", Answer::ClassSet({1}))};
  std::vector<Prediction> preds{{"a", Answer::ClassSet({1})},
                                {"b", Answer::ClassSet({1})},
                                {"zzz", Answer::YesNo(true)}};
  const auto r = ScoreAnswers(gt, preds);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].question_id == "a");
  CHECK(r.unknown_question_ids == std::vector<std::string>{"zzz"});
  CHECK(r.overall.counts == DetectionCounts{1, 0, 0});
}

TEST_CASE("committed fixture matches the independent oracle") {
  const auto exp = Expected();
  const auto r = ScoreDataset(DataDir() / "scoring" / "gt.jsonl",
                              DataDir() / "scoring" / "pred.jsonl", kVocab);
  CHECK(r.overall.counts.tp == exp["tp"].get<int>());
  CHECK(r.overall.counts.fp == exp["fp"].get<int>());
  CHECK(r.overall.counts.fn == exp["fn"].get<int>());
  CHECK(Near(r.overall.precision, exp["precision"].get<double>()));
  CHECK(Near(r.overall.recall, exp["recall"].get<double>()));
  CHECK(Near(r.overall.f1, exp["f1"].get<double>()));
  CHECK(Near(r.spatial_mrr_mod(), exp["spatial_mrr_mod"].get<double>()));
  CHECK(Near(r.temporal_mrr_mod(), exp["temporal_mrr_mod"].get<double>()));
  CHECK(r.spatial.n == exp["n_spatial"].get<int>());
  CHECK(r.temporal.n == exp["n_temporal"].get<int>());
  CHECK(r.n_missing == exp["n_missing"].get<int>());
  CHECK(r.unknown_question_ids ==
        exp["unknown_question_ids"].get<std::vector<std::string>>());
  CHECK(r.errors.empty());
  for (const auto& [type, m] : exp["per_type"].items()) {
    const auto& got = r.per_type.at(ParseQuestionType(type));
    CHECK(got.counts.tp == m["tp"].get<int>());
    CHECK(got.counts.fp == m["fp"].get<int>());
    CHECK(got.counts.fn == m["fn"].get<int>());
    CHECK(got.n_items == m["n_items"].get<int>());
    CHECK(Near(got.f1, m["f1"].get<double>()));
  }
  // Hand values, stated once more without the oracle file.
  CHECK(Near(r.overall.f1, 7.0 / 9.0));
  CHECK(Near(r.spatial_mrr_mod(), 49.0 / 108.0));
  CHECK(Near(r.temporal_mrr_mod(), 7.0 / 12.0));
}

TEST_CASE("macro averaging means the per-type values") {
  const auto r = ScoreDataset(DataDir() / "scoring" / "gt.jsonl",
                              DataDir() / "scoring" / "pred.jsonl", kVocab,
                              Averaging::kMacro);
  const double p = (0.75 + 0.8 + 0.6 + 1.0 + 1.0) / 5;
  const double rc = (0.6 + 0.8 + 0.5 + 1.0 + 0.6) / 5;
  CHECK(Near(r.overall.precision, p));
  CHECK(Near(r.overall.recall, rc));
  CHECK(Near(r.overall.f1, 2 * p * rc / (p + rc)));
}

TEST_CASE("perfect submission renders ones in the table") {
  TempDir dir("score");
  std::ofstream pred(dir / "perfect.jsonl");
  std::vector<std::string> unknown;
  for (const auto& j : ReadJsonLines(DataDir() / "scoring" / "gt.jsonl")) {
    const auto q = QaItemFromJson(j, kVocab);
    pred << ToJsonLine(PredictionToJson({q.question_id, q.answer}, kVocab));
  }
  pred.close();
  const auto r = ScoreDataset(DataDir() / "scoring" / "gt.jsonl", dir / "perfect.jsonl", kVocab);
  CHECK(r.overall.f1 == 1.0);
  CHECK(r.spatial_mrr_mod() == 1.0);
  CHECK(r.temporal_mrr_mod() == 1.0);
  const auto table = RenderReportTable(r, "oracle");
  CHECK(table.find("oracle       |      1.00 |   1.00 | 1.00 |            1.00 |             1.00") !=
        std::string::npos);
  const auto j = ReportToJson(r);
  CHECK(j["overall"]["f1"].get<double>() == 1.0);
}

TEST_CASE("malformed prediction records are reported") {
  TempDir dir("score_bad");
  seldqa::testing::WriteText(dir / "p.jsonl",
                             "{\"question_id\": \"fx_clip000:I:bell:0\", \"answer\": 3}\n");
  const auto r = ScoreDataset(DataDir() / "scoring" / "gt.jsonl", dir / "p.jsonl", kVocab);
  CHECK(r.errors.size() == 1);
  CHECK(r.n_missing == 20);
  seldqa::testing::WriteText(dir / "broken.jsonl", "{not json\n");
  CHECK_THROWS_AS(ReadJsonLines(dir / "broken.jsonl"), ParseError);
  CHECK_THROWS_AS(ScoreDataset(dir / "nope.jsonl", dir / "p.jsonl", kVocab), InputError);
}
