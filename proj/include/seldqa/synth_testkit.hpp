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

// Seeded synthetic scenes and a brute-force QA answer oracle.

#ifndef SELDQA_SYNTH_TESTKIT_HPP_
#define SELDQA_SYNTH_TESTKIT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seldqa/instances.hpp"
#include "seldqa/qa_generator.hpp"
#include "seldqa/scene_model.hpp"

namespace seldqa::synth {

class SpecError : public Error {
 public:
  using Error::Error;
};

enum class Motion { kStatic, kAzimuthSweep, kDistanceSweep };

struct InstanceSpan {
  int onset = 0;   // clip-local frame, inclusive
  int offset = 0;  // inclusive
};

struct SourceSpec {
  int source_id = 0;
  int class_idx = 0;
  Motion motion = Motion::kStatic;
  int azimuth_start = 0;
  int azimuth_end = 0;      // used by kAzimuthSweep
  int elevation = 0;
  int distance_start = 100;
  int distance_end = 100;   // used by kDistanceSweep
  /// Per-frame uniform jitter in [-jitter, jitter] added to every static
  /// dimension, drawn from the scene seed.
  int jitter = 0;
  std::vector<InstanceSpan> instances;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int clip_len_frames = kClipFrames;
  std::string recording_id = "synth";
  int clip_index = 0;
  std::vector<SourceSpec> sources;
};

/// Renders a scene into a clip. Sweeps are linear over each instance,
/// rounded to whole degrees/centimeters. Throws SpecError for offset < onset,
/// spans outside the clip, overlapping spans of one source, out-of-range
/// positions or duplicate source ids.
Clip GenerateClip(const SceneSpec& spec, int num_classes);

struct RandomSceneOptions {
  int max_sources = 6;
  int max_classes = 4;   // distinct classes drawn per scene
  int num_classes = 13;
  int clip_len_frames = kClipFrames;
  int max_instances_per_source = 3;
  /// Probability that a source is static (otherwise one of the sweeps).
  double static_probability = 0.5;
};

/// Draws a scene from `seed`: 0..max_sources sources, classes drawn from a
/// pool of up to max_classes, one to max_instances_per_source spans per
/// source, coarse position grids so ties occur.
SceneSpec RandomScene(std::uint64_t seed, const RandomSceneOptions& opts = {});

/// Answers to every question the generator emits for `clip`, recomputed by
/// per-frame scans over the raw annotations (no instance extraction).
std::vector<AnswerKey> BruteForceAnswers(const Clip& clip,
                                         const ClassVocabulary& vocab,
                                         const StaticTolerances& tol,
                                         AzimuthConvention convention =
                                             AzimuthConvention::kLeftPositive);

/// Keys of a generated item list, for comparison with BruteForceAnswers.
std::vector<AnswerKey> KeysOf(const std::vector<QaItem>& items);

struct CorpusOptions {
  std::uint64_t seed = 1;
  int recordings = 4;
  int clips_per_recording = 6;
  RandomSceneOptions scene;
};

/// Writes `recordings` annotation CSVs ("synth_rec{r:03}.csv") into `dir`,
/// each a concatenation of random clips. Returns the written paths.
std::vector<std::filesystem::path> WriteCorpus(const std::filesystem::path& dir,
                                               const CorpusOptions& opts);

}  // namespace seldqa::synth

#endif  // SELDQA_SYNTH_TESTKIT_HPP_
