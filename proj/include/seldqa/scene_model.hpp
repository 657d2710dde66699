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

#ifndef SELDQA_SCENE_MODEL_HPP_
#define SELDQA_SCENE_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seldqa {

// ---------------------------------------------------------------------------
// Errors. Every failure raised by the library derives from seldqa::Error so
// tools can catch a single type and still branch on the concrete kind.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class VocabularyError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Annotation grid
// ---------------------------------------------------------------------------

/// Annotations live on a 100 ms grid; 100 frames make one clip.
inline constexpr int kFramesPerSecond = 10;
inline constexpr int kClipFrames = 100;

/// Seconds for a frame index, e.g. 14 -> 1.4.
inline double FrameToSeconds(int frame) {
  return static_cast<double>(frame) / kFramesPerSecond;
}

/// Renders a frame index as seconds with exactly one decimal ("1.4").
/// Integer arithmetic, so no floating-point rounding surprises.
std::string FormatFrameSeconds(int frame);

// ---------------------------------------------------------------------------
// Class vocabulary
// ---------------------------------------------------------------------------

class ClassVocabulary {
 public:
  /// Throws VocabularyError on empty, duplicate or blank labels.
  explicit ClassVocabulary(std::vector<std::string> labels);

  /// The 13 STARSS23 sound-event classes in their dataset index order.
  static ClassVocabulary Starss23();

  /// Reads the `index,label` text format (see WriteFile). Lines starting
  /// with '#' and blank lines are ignored. Indices must run 0..N-1 in order.
  static ClassVocabulary ReadFile(const std::filesystem::path& path);
  static ClassVocabulary Parse(std::string_view text);

  /// Inverse of Parse: one `index,label` line per class.
  std::string Serialize() const;
  void WriteFile(const std::filesystem::path& path) const;

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int class_idx) const;
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of `label`, or -1.
  int Find(std::string_view label) const;
  bool Contains(int class_idx) const {
    return class_idx >= 0 && class_idx < size();
  }

  bool operator==(const ClassVocabulary&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Label with spaces and '/' replaced by '_' ("man speaking" ->
/// "man_speaking"); used in question identifiers.
std::string LabelSlug(std::string_view label);

// ---------------------------------------------------------------------------
// Frames, clips, instances
// ---------------------------------------------------------------------------

struct FrameAnnotation {
  int frame = 0;
  int class_idx = 0;
  int source_id = 0;
  int azimuth_deg = 0;    // [-180, 180), positive = counter-clockwise
  int elevation_deg = 0;  // [-90, 90], positive = up
  int distance_cm = 0;    // >= 0

  bool operator==(const FrameAnnotation&) const = default;
};

/// Canonical order: (frame, class_idx, source_id).
bool CanonicalLess(const FrameAnnotation& a, const FrameAnnotation& b);

/// Throws RangeError if any field is outside its domain. `num_classes`
/// bounds class_idx; a class index beyond it raises VocabularyError.
void ValidateFrame(const FrameAnnotation& f, int num_classes);

struct Clip {
  std::string clip_id;
  std::string recording_id;
  int start_frame = 0;      // absolute frame of local frame 0
  int length_frames = 0;    // <= kClipFrames
  std::vector<FrameAnnotation> frames;  // clip-local frame indices

  bool operator==(const Clip&) const = default;
};

/// Checks 0 <= frame < length_frames, field ranges and triple uniqueness.
void ValidateClip(const Clip& clip, int num_classes);

/// One extremum/endpoint of a spatial trajectory: the value and the
/// clip-local frame where it was observed.
struct TimedValue {
  int value = 0;
  int frame = 0;
  double time_s() const { return FrameToSeconds(frame); }
  bool operator==(const TimedValue&) const = default;
};

struct TrajectoryStat {
  TimedValue initial;
  TimedValue final;
  TimedValue min;
  TimedValue max;
  double mean = 0.0;
  bool is_static = true;

  /// Rounded mean, the "approximately X" value of a static dimension.
  int approx() const;

  bool operator==(const TrajectoryStat&) const = default;
};

struct EventInstance {
  std::string clip_id;
  int class_idx = 0;
  int source_id = 0;
  int instance_idx = 0;
  int onset_frame = 0;
  int offset_frame = 0;
  TrajectoryStat azimuth;
  TrajectoryStat elevation;
  TrajectoryStat distance;
  bool is_moving = false;

  double onset_s() const { return FrameToSeconds(onset_frame); }
  double offset_s() const { return FrameToSeconds(offset_frame); }

  bool operator==(const EventInstance&) const = default;
};

}  // namespace seldqa

#endif  // SELDQA_SCENE_MODEL_HPP_
