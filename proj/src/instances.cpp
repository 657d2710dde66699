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

#include "seldqa/instances.hpp"

#include <algorithm>
#include <tuple>

namespace seldqa {

void StaticTolerances::Validate() const {
  if (azimuth_deg < 0 || elevation_deg < 0 || distance_cm < 0)
    throw RangeError("static tolerances must be non-negative");
}

namespace {

template <typename Field>
TrajectoryStat Summarize(std::span<const FrameAnnotation> frames, Field field,
                         double tolerance) {
  TrajectoryStat s;
  s.initial = {field(frames.front()), frames.front().frame};
  s.final = {field(frames.back()), frames.back().frame};
  s.min = s.initial;
  s.max = s.initial;
  long long sum = 0;
  for (const auto& f : frames) {
    const int v = field(f);
    sum += v;
    if (v < s.min.value) s.min = {v, f.frame};
    if (v > s.max.value) s.max = {v, f.frame};
  }
  s.mean = static_cast<double>(sum) / static_cast<double>(frames.size());
  s.is_static = static_cast<double>(s.max.value - s.min.value) <= tolerance;
  return s;
}

}  // namespace

TrajectorySummary SummarizeTrajectory(std::span<const FrameAnnotation> frames,
                                      const StaticTolerances& tol) {
  if (frames.empty())
    throw InputError("cannot summarize an empty trajectory");
  TrajectorySummary out;
  out.azimuth = Summarize(
      frames, [](const FrameAnnotation& f) { return f.azimuth_deg; },
      tol.azimuth_deg);
  out.elevation = Summarize(
      frames, [](const FrameAnnotation& f) { return f.elevation_deg; },
      tol.elevation_deg);
  out.distance = Summarize(
      frames, [](const FrameAnnotation& f) { return f.distance_cm; },
      tol.distance_cm);
  out.is_moving = !(out.azimuth.is_static && out.elevation.is_static &&
                    out.distance.is_static);
  return out;
}

std::vector<EventInstance> ExtractInstances(const Clip& clip,
                                            const StaticTolerances& tol) {
  std::vector<FrameAnnotation> frames = clip.frames;
  std::sort(frames.begin(), frames.end(),
            [](const FrameAnnotation& a, const FrameAnnotation& b) {
              return std::tie(a.source_id, a.class_idx, a.frame) <
                     std::tie(b.source_id, b.class_idx, b.frame);
            });

  std::vector<EventInstance> out;
  std::size_t begin = 0;
  int run_idx = 0;
  while (begin < frames.size()) {
    std::size_t end = begin + 1;
    while (end < frames.size() &&
           frames[end].source_id == frames[begin].source_id &&
           frames[end].class_idx == frames[begin].class_idx &&
           frames[end].frame == frames[end - 1].frame + 1)
      ++end;

    const auto& head = frames[begin];
    if (!out.empty() && out.back().source_id == head.source_id &&
        out.back().class_idx == head.class_idx)
      ++run_idx;
    else
      run_idx = 0;

    const std::span<const FrameAnnotation> run(frames.data() + begin,
                                               end - begin);
    const TrajectorySummary summary = SummarizeTrajectory(run, tol);
    EventInstance inst;
    inst.clip_id = clip.clip_id;
    inst.class_idx = head.class_idx;
    inst.source_id = head.source_id;
    inst.instance_idx = run_idx;
    inst.onset_frame = run.front().frame;
    inst.offset_frame = run.back().frame;
    inst.azimuth = summary.azimuth;
    inst.elevation = summary.elevation;
    inst.distance = summary.distance;
    inst.is_moving = summary.is_moving;
    out.push_back(std::move(inst));
    begin = end;
  }
  return out;
}

}  // namespace seldqa
