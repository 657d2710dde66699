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

#include "seldqa/synth_testkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <tuple>

#include "seldqa/ingest.hpp"
#include "seldqa/records.hpp"
#include "seldqa/util.hpp"

namespace seldqa::synth {

namespace {

int Lerp(int start, int end, int step, int steps) {
  if (steps <= 0) return start;
  return start + static_cast<int>(std::lround(
                     static_cast<double>(end - start) * step / steps));
}

}  // namespace

Clip GenerateClip(const SceneSpec& spec, int num_classes) {
  if (spec.clip_len_frames < 1 || spec.clip_len_frames > kClipFrames)
    throw SpecError("clip length must be in 1..100 frames");
  Clip clip;
  clip.recording_id = spec.recording_id;
  clip.clip_id = ClipId(spec.recording_id, spec.clip_index);
  clip.start_frame = spec.clip_index * kClipFrames;
  clip.length_frames = spec.clip_len_frames;

  StableRng rng(MixSeed(spec.seed, "jitter"));
  std::set<int> source_ids;
  for (const auto& src : spec.sources) {
    if (!source_ids.insert(src.source_id).second)
      throw SpecError("duplicate source id " + std::to_string(src.source_id));
    if (src.class_idx < 0 || src.class_idx >= num_classes)
      throw SpecError("class index out of range");
    if (src.jitter < 0) throw SpecError("negative jitter");
    auto in = [](int v, int lo, int hi) { return v >= lo && v <= hi; };
    if (!in(src.azimuth_start, -180, 179) || !in(src.azimuth_end, -180, 179) ||
        !in(src.elevation, -90, 90) || src.distance_start < 0 || src.distance_end < 0)
      throw SpecError("source " + std::to_string(src.source_id) +
                      " position out of range");
    auto spans = src.instances;
    std::sort(spans.begin(), spans.end(),
              [](auto& a, auto& b) { return a.onset < b.onset; });
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto& s = spans[i];
      if (s.offset < s.onset)
        throw SpecError("instance offset " + std::to_string(s.offset) +
                        " before onset " + std::to_string(s.onset));
      if (s.onset < 0 || s.offset >= spec.clip_len_frames)
        throw SpecError("instance outside the clip");
      if (i > 0 && s.onset <= spans[i - 1].offset)
        throw SpecError("overlapping instances for source " +
                        std::to_string(src.source_id));
    }
    for (const auto& s : spans) {
      const int steps = s.offset - s.onset;
      for (int f = s.onset; f <= s.offset; ++f) {
        const int k = f - s.onset;
        auto jitter = [&] { return src.jitter ? rng.Uniform(-src.jitter, src.jitter) : 0; };
        FrameAnnotation a;
        a.frame = f;
        a.class_idx = src.class_idx;
        a.source_id = src.source_id;
        a.azimuth_deg = src.motion == Motion::kAzimuthSweep
                            ? Lerp(src.azimuth_start, src.azimuth_end, k, steps)
                            : src.azimuth_start + jitter();
        a.elevation_deg = src.elevation + jitter();
        a.distance_cm = src.motion == Motion::kDistanceSweep
                            ? Lerp(src.distance_start, src.distance_end, k, steps)
                            : src.distance_start + jitter();
        a.azimuth_deg = std::clamp(a.azimuth_deg, -180, 179);
        a.elevation_deg = std::clamp(a.elevation_deg, -90, 90);
        a.distance_cm = std::max(a.distance_cm, 0);
        clip.frames.push_back(a);
      }
    }
  }
  std::sort(clip.frames.begin(), clip.frames.end(), CanonicalLess);
  try {
    ValidateClip(clip, num_classes);
  } catch (const Error& e) {
    throw SpecError(std::string("scene produces an invalid clip: ") + e.what());
  }
  return clip;
}

SceneSpec RandomScene(std::uint64_t seed, const RandomSceneOptions& o) {
  StableRng rng(MixSeed(seed, "scene"));
  SceneSpec spec;
  spec.seed = seed;
  spec.clip_len_frames = o.clip_len_frames;
  const int len = o.clip_len_frames;

  const int pool_size = rng.Uniform(1, std::min(o.max_classes, o.num_classes));
  std::vector<int> classes(o.num_classes);
  std::iota(classes.begin(), classes.end(), 0);
  for (int i = 0; i < pool_size; ++i)
    std::swap(classes[i], classes[i + static_cast<int>(rng.Below(o.num_classes - i))]);
  classes.resize(pool_size);

  std::vector<int> ids(8);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t i = ids.size(); i > 1; --i)
    std::swap(ids[i - 1], ids[rng.Below(i)]);

  const int n_sources = rng.Uniform(0, std::min<int>(o.max_sources, ids.size()));
  for (int s = 0; s < n_sources; ++s) {
    SourceSpec src;
    src.source_id = ids[s];
    src.class_idx = classes[rng.Below(classes.size())];
    src.azimuth_start = -180 + 20 * rng.Uniform(0, 17);
    src.elevation = -45 + 15 * rng.Uniform(0, 6);
    src.distance_start = 50 * rng.Uniform(1, 8);
    src.azimuth_end = src.azimuth_start;
    src.distance_end = src.distance_start;
    if (!rng.Bernoulli(o.static_probability)) {
      if (rng.Bernoulli(0.5)) {
        src.motion = Motion::kAzimuthSweep;
        const int delta = 10 * rng.Uniform(1, 6) * (rng.Bernoulli(0.5) ? 1 : -1);
        src.azimuth_end = std::clamp(src.azimuth_start + delta, -180, 179);
      } else {
        src.motion = Motion::kDistanceSweep;
        const int delta = 25 * rng.Uniform(1, 4) * (rng.Bernoulli(0.5) ? 1 : -1);
        src.distance_end = std::max(0, src.distance_start + delta);
      }
    }
    src.jitter = rng.Bernoulli(0.3) ? 1 : 0;

    const int n_inst = rng.Uniform(1, o.max_instances_per_source);
    int cursor = rng.Uniform(0, std::max(0, len / 3));
    for (int i = 0; i < n_inst && cursor < len; ++i) {
      const int span = rng.Uniform(1, std::max(1, len / 4));
      const int offset = std::min(cursor + span - 1, len - 1);
      src.instances.push_back({cursor, offset});
      cursor = offset + 2 + rng.Uniform(0, std::max(0, len / 6));
    }
    spec.sources.push_back(std::move(src));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Brute-force oracle. Everything is recomputed from raw frames with linear
// scans and full sorts; nothing from the instance pipeline is reused.
// ---------------------------------------------------------------------------

namespace {

struct OracleRecord {
  int class_idx;
  int first_frame;
  int azimuth, elevation, distance;
  bool moving;
};

}  // namespace

std::vector<AnswerKey> BruteForceAnswers(const Clip& clip,
                                         const ClassVocabulary& vocab,
                                         const StaticTolerances& tol,
                                         AzimuthConvention convention) {
  std::set<std::tuple<int, int, int>> present;  // (class, source, frame)
  for (const auto& f : clip.frames) present.emplace(f.class_idx, f.source_id, f.frame);

  std::vector<OracleRecord> active;
  for (int c = 0; c < vocab.size(); ++c) {
    const FrameAnnotation* first = nullptr;
    for (const auto& f : clip.frames) {
      if (f.class_idx != c) continue;
      if (!first || f.frame < first->frame ||
          (f.frame == first->frame && f.source_id < first->source_id))
        first = &f;
    }
    if (!first) continue;

    // Walk the run forward one frame at a time.
    int lo[3] = {first->azimuth_deg, first->elevation_deg, first->distance_cm};
    int hi[3] = {lo[0], lo[1], lo[2]};
    for (int fr = first->frame + 1;
         present.count({c, first->source_id, fr}); ++fr) {
      for (const auto& f : clip.frames) {
        if (f.class_idx == c && f.source_id == first->source_id && f.frame == fr) {
          const int v[3] = {f.azimuth_deg, f.elevation_deg, f.distance_cm};
          for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], v[d]);
            hi[d] = std::max(hi[d], v[d]);
          }
        }
      }
    }
    const bool moving = (hi[0] - lo[0]) > tol.azimuth_deg ||
                        (hi[1] - lo[1]) > tol.elevation_deg ||
                        (hi[2] - lo[2]) > tol.distance_cm;
    active.push_back({c, first->frame, first->azimuth_deg, first->elevation_deg,
                      first->distance_cm, moving});
  }

  auto canonical = [](std::vector<AnswerKey> keys) {
    std::sort(keys.begin(), keys.end(), [](const AnswerKey& a, const AnswerKey& b) {
      return std::tie(a.qtype, a.subtype) < std::tie(b.qtype, b.subtype);
    });
    return keys;
  };

  std::vector<AnswerKey> out;
  for (int c = 0; c < vocab.size(); ++c) {
    bool yes = false;
    for (const auto& f : clip.frames) yes = yes || f.class_idx == c;
    out.push_back({QuestionType::kI, LabelSlug(vocab.label(c)), Answer::YesNo(yes)});
  }
  if (active.empty()) return canonical(std::move(out));

  auto ordered = [&](std::vector<OracleRecord> recs, auto key, bool desc) {
    std::sort(recs.begin(), recs.end(), [&](const auto& a, const auto& b) {
      if (key(a) != key(b)) return desc ? key(a) > key(b) : key(a) < key(b);
      return a.class_idx < b.class_idx;
    });
    std::vector<int> ids;
    for (const auto& r : recs) ids.push_back(r.class_idx);
    return ids;
  };
  auto onset = [](const OracleRecord& r) { return r.first_frame; };
  auto az = [](const OracleRecord& r) { return r.azimuth; };
  auto el = [](const OracleRecord& r) { return r.elevation; };
  auto dist = [](const OracleRecord& r) { return r.distance; };

  out.push_back({QuestionType::kII, "active",
                 Answer::ClassSet(ordered(active, onset, false))});

  std::vector<OracleRecord> still, moving;
  for (const auto& r : active) (r.moving ? moving : still).push_back(r);
  out.push_back({QuestionType::kIII, "stationary",
                 Answer::ClassSet(ordered(still, onset, false))});
  out.push_back({QuestionType::kIII, "moving",
                 Answer::ClassSet(ordered(moving, onset, false))});

  // Extremes by explicit scan: strictly better value wins, ties keep the
  // smaller class index because `active` is in class order.
  auto extreme = [&](auto key, bool want_max) {
    const OracleRecord* best = &active.front();
    for (const auto& r : active)
      if (want_max ? key(r) > key(*best) : key(r) < key(*best)) best = &r;
    return Answer::ClassRanking({best->class_idx});
  };
  const bool left_positive = convention == AzimuthConvention::kLeftPositive;
  out.push_back({QuestionType::kIII, "leftmost", extreme(az, left_positive)});
  out.push_back({QuestionType::kIII, "rightmost", extreme(az, !left_positive)});
  out.push_back({QuestionType::kIII, "topmost", extreme(el, true)});
  out.push_back({QuestionType::kIII, "bottommost", extreme(el, false)});
  out.push_back({QuestionType::kIII, "nearest", extreme(dist, false)});
  out.push_back({QuestionType::kIII, "farthest", extreme(dist, true)});

  if (active.size() >= 2) {
    out.push_back({QuestionType::kIV, "azimuth_asc", Answer::ClassRanking(ordered(active, az, false))});
    out.push_back({QuestionType::kIV, "azimuth_desc", Answer::ClassRanking(ordered(active, az, true))});
    out.push_back({QuestionType::kIV, "elevation_asc", Answer::ClassRanking(ordered(active, el, false))});
    out.push_back({QuestionType::kIV, "elevation_desc", Answer::ClassRanking(ordered(active, el, true))});
    out.push_back({QuestionType::kIV, "distance_asc", Answer::ClassRanking(ordered(active, dist, false))});
    out.push_back({QuestionType::kIV, "distance_desc", Answer::ClassRanking(ordered(active, dist, true))});
    out.push_back({QuestionType::kV, "onset", Answer::ClassRanking(ordered(active, onset, false))});
  }

  return canonical(std::move(out));
}

std::vector<AnswerKey> KeysOf(const std::vector<QaItem>& items) {
  std::vector<AnswerKey> out;
  for (const auto& it : items) out.push_back({it.qtype, it.subtype, it.answer});
  std::sort(out.begin(), out.end(), [](const AnswerKey& a, const AnswerKey& b) {
    return std::tie(a.qtype, a.subtype) < std::tie(b.qtype, b.subtype);
  });
  return out;
}

std::vector<std::filesystem::path> WriteCorpus(const std::filesystem::path& dir,
                                               const CorpusOptions& opts) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (int r = 0; r < opts.recordings; ++r) {
    char name[32];
    std::snprintf(name, sizeof(name), "synth_rec%03d", r);
    std::vector<FrameAnnotation> rows;
    for (int k = 0; k < opts.clips_per_recording; ++k) {
      auto spec = RandomScene(
          MixSeed(opts.seed, std::string(name) + ":" + std::to_string(k)),
          opts.scene);
      spec.recording_id = name;
      spec.clip_index = k;
      const Clip clip = GenerateClip(spec, opts.scene.num_classes);
      for (auto f : clip.frames) {
        f.frame += clip.start_frame;
        rows.push_back(f);
      }
    }
    const auto path = dir / (std::string(name) + ".csv");
    WriteFileAtomic(path, FormatAnnotations(rows));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace seldqa::synth
