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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when a reachable criterion fails. Criterion 9 (trained-model
// scores) cannot be reproduced here; it is printed as FAIL but does not
// affect the exit code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "seldqa/captioner.hpp"
#include "seldqa/ingest.hpp"
#include "seldqa/instances.hpp"
#include "seldqa/loss_ref.hpp"
#include "seldqa/pipeline.hpp"
#include "seldqa/records.hpp"
#include "seldqa/scoring.hpp"
#include "seldqa/synth_testkit.hpp"
#include "seldqa/util.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace seldqa;
using seldqa::testing::DataDir;
using seldqa::testing::ReadAll;
using seldqa::testing::TempDir;
using seldqa::testing::WriteText;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

bool Near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const ClassVocabulary& Vocab() {
  static const ClassVocabulary v = ClassVocabulary::Starss23();
  return v;
}

Outcome WorkedExample() {
  const auto t0 = Clock::now();
  const auto rec = ParseAnnotationFile(DataDir() / "worked_example" / "worked_example.csv",
                                       Vocab());
  const auto clips = SegmentIntoClips(rec);
  if (clips.size() != 1) return {false, "expected one clip"};
  const auto caps = RenderClipCaptions(clips[0], {}, Vocab());
  const double s = Seconds(t0);
  if (caps.size() != 1) return {false, std::to_string(caps.size()) + " captions"};
  const auto& c = caps[0];
  if (c.text_rule != seldqa::testing::kWorkedExampleCaption)
    return {false, "caption differs: " + c.text_rule};
  if (c.source_id != 2 || c.class_idx != 1) return {false, "wrong source or class"};
  return {s < 1.0, "exact caption match in " + Fmt("%.3f s", s)};
}

Outcome OracleEquivalence() {
  const auto t0 = Clock::now();
  int clips = 0, items = 0, mismatched = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Clip clip = synth::GenerateClip(synth::RandomScene(seed), Vocab().size());
    for (auto conv : {AzimuthConvention::kLeftPositive, AzimuthConvention::kRightPositive}) {
      QaOptions opts;
      opts.convention = conv;
      const auto oracle = synth::BruteForceAnswers(clip, Vocab(), {}, conv);
      const auto got = synth::KeysOf(GenerateClipQa(clip, Vocab(), opts, Rephraser(seed)));
      items += static_cast<int>(oracle.size());
      if (!(oracle == got)) ++mismatched;
    }
    ++clips;
  }
  const double s = Seconds(t0);
  return {mismatched == 0 && s < 30.0,
          std::to_string(clips) + " clips x 2 conventions, " + std::to_string(items) +
              " answers, " + std::to_string(mismatched) + " mismatching clip(s), " +
              Fmt("%.2f s", s)};
}

Outcome MetricIdentities() {
  StableRng rng(2026);
  int bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> t(13);
    std::iota(t.begin(), t.end(), 0);
    const int n = rng.Uniform(1, 13);
    for (int i = 0; i < n; ++i) std::swap(t[i], t[i + rng.Below(13 - i)]);
    t.resize(n);
    if (MrrMod(t, t) != 1.0) ++bad;
    if (MrrMod(t, std::vector<int>{}) != 0.0) ++bad;
  }
  const std::vector<int> abc{0, 1, 2};
  const bool hand = Near(MrrMod(abc, std::vector<int>{1, 0, 2}), 2.0 / 3.0) &&
                    Near(MrrMod(std::vector<int>{0, 1}, std::vector<int>{1}), 0.25);
  return {bad == 0 && hand, "500 orderings, " + std::to_string(bad) +
                                " violation(s); hand cases " + (hand ? "match" : "differ")};
}

Outcome ScorerFixture() {
  std::ifstream in(DataDir() / "scoring" / "expected.json");
  const Json exp = Json::parse(in);
  const auto r = ScoreDataset(DataDir() / "scoring" / "gt.jsonl",
                              DataDir() / "scoring" / "pred.jsonl", Vocab());
  const bool fixture =
      r.overall.counts.tp == exp["tp"].get<int>() &&
      r.overall.counts.fp == exp["fp"].get<int>() &&
      r.overall.counts.fn == exp["fn"].get<int>() &&
      Near(r.overall.precision, exp["precision"].get<double>()) &&
      Near(r.overall.recall, exp["recall"].get<double>()) &&
      Near(r.overall.f1, exp["f1"].get<double>()) &&
      Near(r.spatial_mrr_mod(), exp["spatial_mrr_mod"].get<double>()) &&
      Near(r.temporal_mrr_mod(), exp["temporal_mrr_mod"].get<double>());

  // A perfect submission built from the ground truth itself.
  TempDir dir("accept_perfect");
  std::string preds;
  for (const auto& q : ReadJsonLines(DataDir() / "scoring" / "gt.jsonl")) {
    Json p;
    p["question_id"] = q["question_id"];
    p["answer"] = q["answer"]["value"];
    preds += ToJsonLine(p);
  }
  WriteText(dir / "perfect.jsonl", preds);
  const auto perfect = ScoreDataset(DataDir() / "scoring" / "gt.jsonl",
                                    dir / "perfect.jsonl", Vocab());
  const std::string table = RenderReportTable(perfect, "perfect");
  std::istringstream lines(table);
  std::string header, rule, row;
  std::getline(lines, header);
  std::getline(lines, rule);
  std::getline(lines, row);
  int ones = 0;
  for (std::size_t p = row.find("1.00"); p != std::string::npos; p = row.find("1.00", p + 1))
    ++ones;
  const bool all_one = ones == 5 && perfect.overall.f1 == 1.0 &&
                       perfect.spatial_mrr_mod() == 1.0 && perfect.temporal_mrr_mod() == 1.0;
  return {fixture && all_one,
          std::string("fixture ") + (fixture ? "matches" : "differs") +
              " (P " + Fmt("%.6f", r.overall.precision) + ", R " +
              Fmt("%.6f", r.overall.recall) + ", F1 " + Fmt("%.6f", r.overall.f1) +
              "); perfect row shows " + std::to_string(ones) + "/5 ones"};
}

Outcome LossClosedForms() {
  using namespace seldqa::loss;
  const LossConfig cfg;
  const auto t1 = EncodeIdealScores(std::vector<int>{0}, 3);
  const auto t2 = EncodeIdealScores(std::vector<int>{0, 1}, 3);
  bool ok = Near(RankingLoss(std::vector{0.8, 0.1, 0.0}, t1, cfg), 0.0) &&
            Near(RankingLoss(std::vector{0.4, 0.2, 0.3}, t1, cfg), 0.3) &&
            Near(L1Loss(std::vector{0.8, 0.1, 0.0}, t1), 0.3) &&
            Near(L1Loss(std::vector{0.0, 0.0, 0.0}, t2), 1.5);
  int subsets = 0, bad = 0;
  const int n = 13;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> order;
    for (int c = 0; c < n; ++c)
      if (mask & (1u << c)) order.push_back(c);
    const auto t = EncodeIdealScores(order, n);
    const double l = RankingLoss(t.ideal, t, cfg);
    const int m = static_cast<int>(order.size());
    const bool good = m <= 3 ? l == 0.0
                             : l > 0.0 && Near(l, IdealRankingLossClosedForm(m, n, cfg.margin));
    if (!good) ++bad;
    ++subsets;
  }
  return {ok && bad == 0, std::string("reference values ") + (ok ? "match" : "differ") +
                              "; " + std::to_string(subsets) + " subsets, " +
                              std::to_string(bad) + " off"};
}

Outcome GradientChecks() {
  using namespace seldqa::loss;
  const auto t0 = Clock::now();
  StableRng rng(7);
  const LossConfig cfg;
  int checked = 0, failed = 0, resampled = 0;
  while (checked < 1000) {
    const int n = rng.Uniform(2, 13);
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    const int m = rng.Uniform(1, n);
    for (int i = 0; i < m; ++i) std::swap(pool[i], pool[i + rng.Below(n - i)]);
    pool.resize(m);
    const auto target = EncodeIdealScores(pool, n);
    std::vector<double> p(n), d(n);
    for (int i = 0; i < n; ++i) {
      p[i] = rng.Unit();
      d[i] = 2.0 * rng.Unit() - 1.0;
    }
    const auto objective = checked % 2 == 0 ? RankingObjective(target, cfg)
                                            : L1Objective(target);
    try {
      if (!GradCheck(objective, p, d).passed) ++failed;
      ++checked;
    } catch (const KinkError&) {
      ++resampled;
    }
  }
  const double s = Seconds(t0);
  return {failed == 0 && s < 10.0,
          std::to_string(checked) + " points (" + std::to_string(resampled) +
              " resampled near a kink), " + std::to_string(failed) + " failed, " +
              Fmt("%.2f s", s)};
}

PipelineConfig Cfg(const fs::path& out) {
  PipelineConfig cfg;
  cfg.out_dir = out;
  return cfg;
}

Outcome Determinism() {
  TempDir corpus("accept_det_in"), a("accept_det_a"), b("accept_det_b");
  synth::CorpusOptions opts;
  opts.recordings = 6;
  opts.clips_per_recording = 10;
  if (RunSynth(Cfg(corpus.path()), opts).exit_code != kExitOk)
    return {false, "synth failed"};
  for (const auto* out : {&a, &b}) {
    if (RunCaption(corpus.path(), Cfg(out->path())).exit_code != kExitOk ||
        RunQa(corpus.path(), Cfg(out->path())).exit_code != kExitOk)
      return {false, "pipeline failed"};
  }
  int files = 0, differing = 0;
  for (const auto& f : fs::directory_iterator(a.path())) {
    ++files;
    if (ReadAll(f.path()) != ReadAll(b / f.path().filename().string())) ++differing;
  }
  return {files == 7 && differing == 0,
          std::to_string(files) + " output files, " + std::to_string(differing) + " differ"};
}

Outcome Throughput() {
  TempDir corpus("accept_tp_in"), out("accept_tp_out");
  // 2880 clips of 100 frames = 8 hours of annotation time.
  synth::CorpusOptions opts;
  opts.recordings = 48;
  opts.clips_per_recording = 60;
  if (RunSynth(Cfg(corpus.path()), opts).exit_code != kExitOk)
    return {false, "synth failed"};
  const auto t0 = Clock::now();
  const auto cap = RunCaption(corpus.path(), Cfg(out.path()));
  const auto qa = RunQa(corpus.path(), Cfg(out.path()));
  const double s = Seconds(t0);
  if (cap.exit_code != kExitOk || qa.exit_code != kExitOk)
    return {false, "pipeline failed"};
  // Trailing silent clips at the end of a recording are not emitted, so the
  // clip count can fall a little short of 2880.
  const long long span = static_cast<long long>(opts.recordings) *
                         opts.clips_per_recording * kClipFrames;
  const long long clips = qa.counts.at("clips");
  return {cap.counts.at("recordings") == opts.recordings && s < 60.0,
          std::to_string(span) + " frames over " + std::to_string(opts.recordings) +
              " recordings (" + std::to_string(clips) + " clips), " + std::to_string(cap.counts.at("instances")) + " captions, " +
              std::to_string(qa.counts.at("questions")) + " questions in " +
              Fmt("%.2f s", s)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "worked-example caption", WorkedExample},
      {2, "qa oracle equivalence", OracleEquivalence},
      {3, "mrr identities", MetricIdentities},
      {4, "scorer fixture", ScorerFixture},
      {5, "loss closed forms", LossClosedForms},
      {6, "gradient checks", GradientChecks},
      {7, "determinism", Determinism},
      {8, "throughput", Throughput},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("%s %d %s: %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
  }
  std::printf("FAIL 9 trained-model scores: not reproducible without the audio "
              "corpus and GPU training; informational, excluded from the exit code\n");
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
