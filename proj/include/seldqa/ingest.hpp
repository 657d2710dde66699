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

#ifndef SELDQA_INGEST_HPP_
#define SELDQA_INGEST_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seldqa/scene_model.hpp"

namespace seldqa {

/// All frames of one recording, sorted by (frame, class_idx, source_id)
/// with no duplicate triples.
struct RecordingAnnotations {
  std::string recording_id;
  std::vector<FrameAnnotation> rows;
};

/// Parses DCASE-style metadata text: one row per line,
/// `frame,class,source,azimuth,elevation,distance`, all integers, no header.
/// Blank lines are skipped.
///
/// Errors: ParseError (wrong arity, non-integer field; carries the line
/// number), VocabularyError (class index >= N), RangeError (angle or
/// distance out of range), InputError (duplicate triple).
RecordingAnnotations ParseAnnotations(std::string_view text,
                                      std::string recording_id,
                                      const ClassVocabulary& vocab);

/// Reads `path` and parses it; recording_id is the file stem.
RecordingAnnotations ParseAnnotationFile(const std::filesystem::path& path,
                                         const ClassVocabulary& vocab);

/// Inverse of ParseAnnotations for a row list.
std::string FormatAnnotations(const std::vector<FrameAnnotation>& rows);

/// Splits a recording into 100-frame clips. Clip k covers absolute frames
/// [100k, 100k + 99]; the final clip is kept with its true length. Clips
/// with no annotations in the middle of a recording are still emitted.
std::vector<Clip> SegmentIntoClips(const RecordingAnnotations& rec);

/// "{recording_id}_clip{k:03}".
std::string ClipId(std::string_view recording_id, int k);

}  // namespace seldqa

#endif  // SELDQA_INGEST_HPP_
