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

#include "seldqa/scene_model.hpp"
#include "seldqa/util.hpp"
#include "test_support.hpp"

using namespace seldqa;
using seldqa::testing::TempDir;

TEST_CASE("default vocabulary has the thirteen dataset classes in order") {
  const auto v = ClassVocabulary::Starss23();
  REQUIRE(v.size() == 13);
  CHECK(v.label(0) == "woman speaking");
  CHECK(v.label(1) == "man speaking");
  CHECK(v.label(7) == "door open or close");
  CHECK(v.label(12) == "knock");
  CHECK(v.Find("music") == 8);
  CHECK(v.Find("musical instrument") == 9);
  CHECK(v.Find("Music") == -1);
  CHECK_THROWS_AS(v.label(13), VocabularyError);
  CHECK_THROWS_AS(v.label(-1), VocabularyError);
}

TEST_CASE("shipped vocabulary file matches the built-in default") {
  const auto v = ClassVocabulary::ReadFile(seldqa::testing::SourceDir() / "data" /
                                           "starss23_vocab.txt");
  CHECK(v == ClassVocabulary::Starss23());
}

TEST_CASE("vocabulary round-trips through its file format") {
  TempDir dir("vocab");
  const ClassVocabulary v({"alpha", "beta gamma", "d/e", "x,y"});
  v.WriteFile(dir / "v.txt");
  CHECK(ClassVocabulary::ReadFile(dir / "v.txt") == v);
  CHECK(ClassVocabulary::Parse(v.Serialize()) == v);
  CHECK(ClassVocabulary::Parse(ClassVocabulary::Starss23().Serialize()) ==
        ClassVocabulary::Starss23());
}

TEST_CASE("vocabulary parser skips comments and rejects bad layouts") {
  CHECK(ClassVocabulary::Parse("# header\n\n0,a\n1,b\n").size() == 2);
  CHECK_THROWS_AS(ClassVocabulary::Parse("0,a\n2,b\n"), ParseError);
  CHECK_THROWS_AS(ClassVocabulary::Parse("1,a\n"), ParseError);
  CHECK_THROWS_AS(ClassVocabulary::Parse("0,a\n1,a\n"), VocabularyError);
  CHECK_THROWS_AS(ClassVocabulary::Parse("0,\n"), VocabularyError);
  CHECK_THROWS_AS(ClassVocabulary::Parse("zero,a\n"), ParseError);
  CHECK_THROWS_AS(ClassVocabulary::Parse(""), VocabularyError);
  CHECK_THROWS_AS(ClassVocabulary::ReadFile("/nonexistent/vocab.txt"), InputError);
}

TEST_CASE("label slugs") {
  CHECK(LabelSlug("man speaking") == "man_speaking");
  CHECK(LabelSlug("door open/close") == "door_open_close");
  CHECK(LabelSlug("a:b") == "a_b");
}

TEST_CASE("frame times render with one decimal") {
  CHECK(FormatFrameSeconds(0) == "0.0");
  CHECK(FormatFrameSeconds(2) == "0.2");
  CHECK(FormatFrameSeconds(14) == "1.4");
  CHECK(FormatFrameSeconds(99) == "9.9");
  CHECK(FormatFrameSeconds(100) == "10.0");
  CHECK(FormatFrameSeconds(12345) == "1234.5");
  CHECK(FrameToSeconds(14) == doctest::Approx(1.4));
}

TEST_CASE("frame validation enforces field domains") {
  const int n = 13;
  CHECK_NOTHROW(ValidateFrame({0, 0, 0, -180, -90, 0}, n));
  CHECK_NOTHROW(ValidateFrame({0, 12, 0, 179, 90, 5000}, n));
  CHECK_THROWS_AS(ValidateFrame({0, 0, 0, 180, 0, 0}, n), RangeError);
  CHECK_THROWS_AS(ValidateFrame({0, 0, 0, -181, 0, 0}, n), RangeError);
  CHECK_THROWS_AS(ValidateFrame({0, 0, 0, 0, 91, 0}, n), RangeError);
  CHECK_THROWS_AS(ValidateFrame({0, 0, 0, 0, -91, 0}, n), RangeError);
  CHECK_THROWS_AS(ValidateFrame({0, 0, 0, 0, 0, -1}, n), RangeError);
  CHECK_THROWS_AS(ValidateFrame({-1, 0, 0, 0, 0, 0}, n), RangeError);
  CHECK_THROWS_AS(ValidateFrame({0, 0, -1, 0, 0, 0}, n), RangeError);
  CHECK_THROWS_AS(ValidateFrame({0, 13, 0, 0, 0, 0}, n), VocabularyError);
  CHECK_THROWS_AS(ValidateFrame({0, -1, 0, 0, 0, 0}, n), VocabularyError);
}

TEST_CASE("clip validation checks bounds and triple uniqueness") {
  using seldqa::testing::MakeClip;
  CHECK_NOTHROW(ValidateClip(MakeClip({{0, 0, 0, 0, 0, 0}, {99, 0, 0, 0, 0, 0}}), 13));
  CHECK_THROWS_AS(ValidateClip(MakeClip({{100, 0, 0, 0, 0, 0}}), 13), RangeError);
  CHECK_THROWS_AS(ValidateClip(MakeClip({{50, 0, 0, 0, 0, 0}}, "c", 50), 13),
                  RangeError);
  CHECK_THROWS_AS(
      ValidateClip(MakeClip({{3, 1, 1, 0, 0, 0}, {3, 1, 1, 5, 5, 5}}), 13),
      InputError);
  // Same frame, different source: fine.
  CHECK_NOTHROW(ValidateClip(MakeClip({{3, 1, 1, 0, 0, 0}, {3, 1, 2, 5, 5, 5}}), 13));
}

TEST_CASE("stable rng is reproducible and bounded") {
  StableRng a(7), b(7), c(8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.Next();
    CHECK(x == b.Next());
    differs = differs || x != c.Next();
  }
  CHECK(differs);
  StableRng r(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.Below(7) < 7u);
    const int u = r.Uniform(-3, 3);
    CHECK(u >= -3);
    CHECK(u <= 3);
    const double d = r.Unit();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
  }
  CHECK(MixSeed(1, "a") == MixSeed(1, "a"));
  CHECK(MixSeed(1, "a") != MixSeed(1, "b"));
  CHECK(MixSeed(1, "a") != MixSeed(2, "a"));
  // FNV-1a reference values.
  CHECK(StableHash("") == 0xcbf29ce484222325ull);
  CHECK(StableHash("a") == 0xaf63dc4c8601ec8cull);
}
