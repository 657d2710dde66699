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

// Fixtures shared by the unit tests and the acceptance binary.

#ifndef SELDQA_TESTS_TEST_SUPPORT_HPP_
#define SELDQA_TESTS_TEST_SUPPORT_HPP_

#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "seldqa/scene_model.hpp"

namespace seldqa::testing {

#ifndef SELDQA_SOURCE_DIR
#error "SELDQA_SOURCE_DIR must be defined by the build"
#endif

inline std::filesystem::path SourceDir() { return SELDQA_SOURCE_DIR; }
inline std::filesystem::path DataDir() { return SourceDir() / "tests" / "data"; }

/// A man speaking (class 1, source 2) from frame 2 to 14, azimuth sweeping
/// from -70 to -95 (reached at frame 13), elevation jittering around -46 and
/// distance around 97 cm.
inline std::vector<FrameAnnotation> WorkedExampleFrames() {
  constexpr std::array<int, 13> az{-70, -72, -74, -76, -78, -80, -82,
                                   -84, -87, -90, -93, -95, -95};
  constexpr std::array<int, 13> el{-46, -45, -47, -46, -46, -45, -47,
                                   -46, -46, -47, -45, -46, -46};
  constexpr std::array<int, 13> dist{97, 98, 96, 97, 97, 97, 98,
                                     96, 97, 97, 97, 96, 98};
  std::vector<FrameAnnotation> out;
  for (int i = 0; i < 13; ++i)
    out.push_back({2 + i, 1, 2, az[i], el[i], dist[i]});
  return out;
}

inline const char* kWorkedExampleCaption =
    "From 0.2s to 1.4s, man speaking is heard. It is initially at an azimuth "
    "angle of -70 degrees and moved finally to an azimuth of -95 degrees. "
    "During this time, the sound source moved to a maximum azimuth angle of "
    "-70 degrees at 0.2s and to a minimum azimuth angle of -95 degrees at "
    "1.3s. The sound was coming throughout from an elevation angle of "
    "approximately -46 degrees. The sound was coming throughout from a "
    "distance of approximately 97cm. Source id: 2";

inline Clip MakeClip(std::vector<FrameAnnotation> frames,
                     std::string clip_id = "rec_clip000",
                     int length = kClipFrames) {
  Clip c;
  c.clip_id = std::move(clip_id);
  c.recording_id = "rec";
  c.length_frames = length;
  c.frames = std::move(frames);
  return c;
}

/// Constant-position frames for one (class, source) over [on, off].
inline std::vector<FrameAnnotation> Span(int class_idx, int source_id, int on,
                                         int off, int az, int el, int dist) {
  std::vector<FrameAnnotation> out;
  for (int f = on; f <= off; ++f) out.push_back({f, class_idx, source_id, az, el, dist});
  return out;
}

inline std::vector<FrameAnnotation> Concat(
    std::initializer_list<std::vector<FrameAnnotation>> parts) {
  std::vector<FrameAnnotation> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// Fresh empty directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("seldqa_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace seldqa::testing

#endif  // SELDQA_TESTS_TEST_SUPPORT_HPP_
