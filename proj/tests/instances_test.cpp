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

#include <algorithm>

#include "seldqa/instances.hpp"
#include "seldqa/synth_testkit.hpp"
#include "seldqa/util.hpp"
#include "test_support.hpp"

using namespace seldqa;
using seldqa::testing::MakeClip;
using seldqa::testing::Span;

TEST_CASE("worked example becomes one moving instance") {
  const auto inst = ExtractInstances(MakeClip(seldqa::testing::WorkedExampleFrames()), {});
  REQUIRE(inst.size() == 1);
  const auto& e = inst[0];
  CHECK(e.class_idx == 1);
  CHECK(e.source_id == 2);
  CHECK(e.instance_idx == 0);
  CHECK(e.onset_frame == 2);
  CHECK(e.offset_frame == 14);
  CHECK(e.onset_s() == doctest::Approx(0.2));
  CHECK(e.offset_s() == doctest::Approx(1.4));
  CHECK(e.azimuth.initial == TimedValue{-70, 2});
  CHECK(e.azimuth.final == TimedValue{-95, 14});
  CHECK(e.azimuth.max == TimedValue{-70, 2});
  CHECK(e.azimuth.min == TimedValue{-95, 13});
  CHECK_FALSE(e.azimuth.is_static);
  CHECK(e.elevation.is_static);
  CHECK(e.elevation.approx() == -46);
  CHECK(e.distance.is_static);
  CHECK(e.distance.approx() == 97);
  CHECK(e.is_moving);
}

TEST_CASE("a gap splits a run into two instances") {
  const auto frames = seldqa::testing::Concat(
      {Span(3, 1, 0, 4, 10, 0, 100), Span(3, 1, 7, 9, 10, 0, 100)});
  const auto inst = ExtractInstances(MakeClip(frames), {});
  REQUIRE(inst.size() == 2);
  CHECK(inst[0].onset_frame == 0);
  CHECK(inst[0].offset_frame == 4);
  CHECK(inst[0].instance_idx == 0);
  CHECK(inst[1].onset_frame == 7);
  CHECK(inst[1].offset_frame == 9);
  CHECK(inst[1].instance_idx == 1);
}

TEST_CASE("adjacent frames never split") {
  const auto inst = ExtractInstances(MakeClip(Span(0, 0, 10, 11, 0, 0, 1)), {});
  REQUIRE(inst.size() == 1);
  CHECK(inst[0].offset_frame == 11);
}

TEST_CASE("empty clip gives no instances") {
  CHECK(ExtractInstances(MakeClip({}), {}).empty());
}

TEST_CASE("static threshold is inclusive") {
  std::vector<FrameAnnotation> f{{0, 0, 0, 0, 0, 50}, {1, 0, 0, 3, 0, 50}, {2, 0, 0, -2, 0, 50}};
  CHECK(SummarizeTrajectory(f, {5, 5, 10}).azimuth.is_static);
  CHECK_FALSE(SummarizeTrajectory(f, {4, 5, 10}).azimuth.is_static);
  CHECK(SummarizeTrajectory(f, {5, 5, 10}).is_moving == false);
  CHECK(SummarizeTrajectory(f, {4, 5, 10}).is_moving);
}

TEST_CASE("constant trajectory collapses every statistic") {
  const auto f = Span(0, 0, 5, 9, 30, -10, 250);
  const auto s = SummarizeTrajectory(f, {});
  for (const auto* d : {&s.azimuth, &s.elevation, &s.distance}) {
    CHECK(d->is_static);
    CHECK(d->min.value == d->max.value);
    CHECK(d->initial.value == d->final.value);
    CHECK(d->min.value == d->initial.value);
  }
  CHECK(s.azimuth.approx() == 30);
  CHECK_FALSE(s.is_moving);
}

TEST_CASE("extremum timestamps take the first occurrence") {
  std::vector<FrameAnnotation> f{{4, 0, 0, 10, 0, 50}, {5, 0, 0, 40, 0, 50},
                                 {6, 0, 0, 40, 0, 50}, {7, 0, 0, -20, 0, 50},
                                 {8, 0, 0, -20, 0, 50}};
  const auto s = SummarizeTrajectory(f, {});
  CHECK(s.azimuth.max == TimedValue{40, 5});
  CHECK(s.azimuth.min == TimedValue{-20, 7});
  CHECK(s.azimuth.final == TimedValue{-20, 8});
}

TEST_CASE("approximate value is the rounded mean") {
  std::vector<FrameAnnotation> f{{0, 0, 0, 1, 0, 50}, {1, 0, 0, 2, 0, 50}};
  CHECK(SummarizeTrajectory(f, {}).azimuth.approx() == 2);  // 1.5 rounds away
  std::vector<FrameAnnotation> g{{0, 0, 0, -1, 0, 50}, {1, 0, 0, -2, 0, 50}};
  CHECK(SummarizeTrajectory(g, {}).azimuth.approx() == -2);
}

TEST_CASE("summary rejects empty input and bad tolerances") {
  CHECK_THROWS_AS(SummarizeTrajectory({}, {}), InputError);
  CHECK_THROWS_AS((StaticTolerances{-1, 5, 10}.Validate()), RangeError);
}

TEST_CASE("instances partition the clip and respect summary invariants") {
  const auto vocab = ClassVocabulary::Starss23();
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Clip clip = synth::GenerateClip(synth::RandomScene(seed), vocab.size());
    const auto inst = ExtractInstances(clip, {});
    // Rebuild the frame set from the instances.
    std::size_t covered = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const auto& e = inst[i];
      CHECK(e.onset_frame <= e.offset_frame);
      CHECK(e.offset_frame < clip.length_frames);
      covered += static_cast<std::size_t>(e.offset_frame - e.onset_frame + 1);
      for (int f = e.onset_frame; f <= e.offset_frame; ++f) {
        const bool present = std::any_of(clip.frames.begin(), clip.frames.end(),
                                          [&](const FrameAnnotation& a) {
          return a.frame == f && a.class_idx == e.class_idx &&
                 a.source_id == e.source_id;
        });
        CHECK(present);
      }
      for (const auto* d : {&e.azimuth, &e.elevation, &e.distance}) {
        CHECK(d->min.value <= d->initial.value);
        CHECK(d->initial.value <= d->max.value);
        CHECK(d->min.value <= d->final.value);
        CHECK(d->final.value <= d->max.value);
        CHECK(d->min.frame >= e.onset_frame);
        CHECK(d->max.frame <= e.offset_frame);
        CHECK(d->initial.frame == e.onset_frame);
        CHECK(d->final.frame == e.offset_frame);
      }
      CHECK(e.is_moving == !(e.azimuth.is_static && e.elevation.is_static &&
                             e.distance.is_static));
      if (i > 0) {
        const auto& p = inst[i - 1];
        CHECK(std::tie(p.source_id, p.class_idx, p.onset_frame) <
              std::tie(e.source_id, e.class_idx, e.onset_frame));
        if (p.source_id == e.source_id && p.class_idx == e.class_idx) {
          CHECK(e.instance_idx == p.instance_idx + 1);
          CHECK(e.onset_frame > p.offset_frame + 1);  // maximal runs
        } else {
          CHECK(e.instance_idx == 0);
        }
      }
    }
    CHECK(covered == clip.frames.size());

    // Order independence.
    Clip shuffled = clip;
    StableRng rng(seed);
    for (std::size_t i = shuffled.frames.size(); i > 1; --i)
      std::swap(shuffled.frames[i - 1], shuffled.frames[rng.Below(i)]);
    CHECK(ExtractInstances(shuffled, {}) == inst);
  }
}
