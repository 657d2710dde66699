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

#include "seldqa/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace seldqa {

namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int ParseIntField(std::string_view field, std::size_t line_no, int column) {
  field = Trim(field);
  int value = 0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() ||
      ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(line_no) + ": column " +
                         std::to_string(column) + " is not an integer ('" +
                         std::string(field) + "')",
                     line_no);
  return value;
}

}  // namespace

RecordingAnnotations ParseAnnotations(std::string_view text,
                                      std::string recording_id,
                                      const ClassVocabulary& vocab) {
  RecordingAnnotations rec;
  rec.recording_id = std::move(recording_id);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = Trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;

    std::array<int, 6> v{};
    std::size_t start = 0;
    int column = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      if (column >= 6)
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected 6 fields, got more",
                         line_no);
      v[column] = ParseIntField(line.substr(start, comma - start), line_no,
                                column + 1);
      ++column;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (column != 6)
      throw ParseError("line " + std::to_string(line_no) + ": expected 6 " +
                           "fields, got " + std::to_string(column),
                       line_no);

    FrameAnnotation f{v[0], v[1], v[2], v[3], v[4], v[5]};
    try {
      ValidateFrame(f, vocab.size());
    } catch (const VocabularyError& e) {
      throw VocabularyError("line " + std::to_string(line_no) + ": " +
                            e.what());
    } catch (const RangeError& e) {
      throw RangeError("line " + std::to_string(line_no) + ": " + e.what());
    }
    rec.rows.push_back(f);
  }

  std::sort(rec.rows.begin(), rec.rows.end(), CanonicalLess);
  const auto dup = std::adjacent_find(
      rec.rows.begin(), rec.rows.end(),
      [](const FrameAnnotation& a, const FrameAnnotation& b) {
        return !CanonicalLess(a, b) && !CanonicalLess(b, a);
      });
  if (dup != rec.rows.end())
    throw InputError("duplicate annotation for frame " +
                     std::to_string(dup->frame) + ", class " +
                     std::to_string(dup->class_idx) + ", source " +
                     std::to_string(dup->source_id));
  return rec;
}

RecordingAnnotations ParseAnnotationFile(const std::filesystem::path& path,
                                         const ClassVocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseAnnotations(ss.str(), path.stem().string(), vocab);
}

std::string FormatAnnotations(const std::vector<FrameAnnotation>& rows) {
  std::string out;
  out.reserve(rows.size() * 24);
  for (const auto& r : rows) {
    out += std::to_string(r.frame) + ',' + std::to_string(r.class_idx) + ',' +
           std::to_string(r.source_id) + ',' + std::to_string(r.azimuth_deg) +
           ',' + std::to_string(r.elevation_deg) + ',' +
           std::to_string(r.distance_cm) + '\n';
  }
  return out;
}

std::string ClipId(std::string_view recording_id, int k) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", k);
  return std::string(recording_id) + "_clip" + buf;
}

std::vector<Clip> SegmentIntoClips(const RecordingAnnotations& rec) {
  std::vector<Clip> clips;
  if (rec.rows.empty()) return clips;
  int max_frame = 0;
  for (const auto& r : rec.rows) max_frame = std::max(max_frame, r.frame);
  const int n_clips = max_frame / kClipFrames + 1;
  clips.resize(n_clips);
  for (int k = 0; k < n_clips; ++k) {
    Clip& c = clips[k];
    c.clip_id = ClipId(rec.recording_id, k);
    c.recording_id = rec.recording_id;
    c.start_frame = k * kClipFrames;
    c.length_frames = std::min(kClipFrames, max_frame + 1 - c.start_frame);
  }
  for (auto r : rec.rows) {
    const int k = r.frame / kClipFrames;
    r.frame -= clips[k].start_frame;
    clips[k].frames.push_back(r);
  }
  for (auto& c : clips)
    if (!std::is_sorted(c.frames.begin(), c.frames.end(), CanonicalLess))
      std::sort(c.frames.begin(), c.frames.end(), CanonicalLess);
  return clips;
}

}  // namespace seldqa
