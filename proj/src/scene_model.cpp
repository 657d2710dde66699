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

#include "seldqa/scene_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace seldqa {

std::string FormatFrameSeconds(int frame) {
  const int whole = frame / kFramesPerSecond;
  const int tenth = frame % kFramesPerSecond;
  std::string out = (frame < 0 && whole == 0) ? "-" : "";
  out += std::to_string(whole);
  out += '.';
  out += std::to_string(std::abs(tenth));
  return out;
}

ClassVocabulary::ClassVocabulary(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw VocabularyError("vocabulary has no classes");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty() || l.find_first_not_of(" \t") == std::string::npos)
      throw VocabularyError("vocabulary contains an empty label");
    if (!seen.insert(l).second)
      throw VocabularyError("duplicate vocabulary label '" + l + "'");
  }
}

ClassVocabulary ClassVocabulary::Starss23() {
  return ClassVocabulary({"woman speaking", "man speaking", "clapping",
                          "telephone", "laughing", "domestic sounds",
                          "footsteps", "door open or close", "music",
                          "musical instrument", "water tap", "bell",
                          "knock"});
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ClassVocabulary ClassVocabulary::Parse(std::string_view text) {
  std::vector<std::string> labels;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos)
      throw ParseError("vocabulary line must be 'index,label'", line_no);
    const auto idx_text = Trim(line.substr(0, comma));
    int idx = -1;
    auto [ptr, ec] = std::from_chars(idx_text.data(),
                                     idx_text.data() + idx_text.size(), idx);
    if (ec != std::errc() || ptr != idx_text.data() + idx_text.size())
      throw ParseError("vocabulary index is not an integer", line_no);
    if (idx != static_cast<int>(labels.size()))
      throw ParseError("vocabulary indices must run 0..N-1 in order",
                       line_no);
    labels.emplace_back(Trim(line.substr(comma + 1)));
  }
  return ClassVocabulary(std::move(labels));
}

ClassVocabulary ClassVocabulary::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open vocabulary file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

std::string ClassVocabulary::Serialize() const {
  std::string out;
  for (int i = 0; i < size(); ++i)
    out += std::to_string(i) + "," + labels_[i] + "\n";
  return out;
}

void ClassVocabulary::WriteFile(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write vocabulary file " + path.string());
  out << Serialize();
}

const std::string& ClassVocabulary::label(int class_idx) const {
  if (!Contains(class_idx))
    throw VocabularyError("class index " + std::to_string(class_idx) +
                          " outside vocabulary of size " +
                          std::to_string(size()));
  return labels_[class_idx];
}

int ClassVocabulary::Find(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return -1;
}

std::string LabelSlug(std::string_view label) {
  std::string out(label);
  for (auto& c : out)
    if (c == ' ' || c == '/' || c == ':') c = '_';
  return out;
}

bool CanonicalLess(const FrameAnnotation& a, const FrameAnnotation& b) {
  return std::tie(a.frame, a.class_idx, a.source_id) <
         std::tie(b.frame, b.class_idx, b.source_id);
}

void ValidateFrame(const FrameAnnotation& f, int num_classes) {
  if (f.class_idx < 0 || f.class_idx >= num_classes)
    throw VocabularyError("class index " + std::to_string(f.class_idx) +
                          " outside vocabulary of size " +
                          std::to_string(num_classes));
  if (f.frame < 0)
    throw RangeError("negative frame index " + std::to_string(f.frame));
  if (f.source_id < 0)
    throw RangeError("negative source id " + std::to_string(f.source_id));
  if (f.azimuth_deg < -180 || f.azimuth_deg >= 180)
    throw RangeError("azimuth " + std::to_string(f.azimuth_deg) +
                     " outside [-180, 180)");
  if (f.elevation_deg < -90 || f.elevation_deg > 90)
    throw RangeError("elevation " + std::to_string(f.elevation_deg) +
                     " outside [-90, 90]");
  if (f.distance_cm < 0)
    throw RangeError("negative distance " + std::to_string(f.distance_cm));
}

void ValidateClip(const Clip& clip, int num_classes) {
  if (clip.length_frames < 0 || clip.length_frames > kClipFrames)
    throw RangeError("clip " + clip.clip_id + " has invalid length " +
                     std::to_string(clip.length_frames));
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& f : clip.frames) {
    ValidateFrame(f, num_classes);
    if (f.frame >= clip.length_frames)
      throw RangeError("clip " + clip.clip_id + " frame " +
                       std::to_string(f.frame) + " beyond clip length");
    if (!seen.emplace(f.frame, f.class_idx, f.source_id).second)
      throw InputError("clip " + clip.clip_id +
                       " has duplicate (frame, class, source) triple");
  }
}

int TrajectoryStat::approx() const {
  return static_cast<int>(std::lround(mean));
}

}  // namespace seldqa
