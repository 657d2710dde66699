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

#include "seldqa/captioner.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "seldqa/util.hpp"

namespace seldqa {

namespace {

// Noun phrases for one spatial dimension. "{}" marks the value slot.
struct DimensionPhrases {
  const char* initial;
  const char* final;
  const char* max;
  const char* min;
  const char* throughout;
  const char* unit;  // appended directly after the number
};

constexpr DimensionPhrases kAzimuth{
    "an azimuth angle of", "an azimuth of", "a maximum azimuth angle of",
    "a minimum azimuth angle of", "an azimuth angle of", " degrees"};
constexpr DimensionPhrases kElevation{
    "an elevation angle of", "an elevation of", "a maximum elevation angle of",
    "a minimum elevation angle of", "an elevation angle of", " degrees"};
constexpr DimensionPhrases kDistance{
    "a distance of", "a distance of", "a maximum distance of",
    "a minimum distance of", "a distance of", "cm"};

void AppendDimension(std::string& out, const TrajectoryStat& s,
                     const DimensionPhrases& p) {
  auto value = [&](int v) { return std::to_string(v) + p.unit; };
  if (s.is_static) {
    out += " The sound was coming throughout from ";
    out += p.throughout;
    out += " approximately " + value(s.approx()) + ".";
    return;
  }
  out += " It is initially at ";
  out += p.initial;
  out += " " + value(s.initial.value) + " and moved finally to ";
  out += p.final;
  out += " " + value(s.final.value) + ".";
  out += " During this time, the sound source moved to ";
  out += p.max;
  out += " " + value(s.max.value) + " at " + FormatFrameSeconds(s.max.frame) +
         "s and to ";
  out += p.min;
  out += " " + value(s.min.value) + " at " + FormatFrameSeconds(s.min.frame) +
         "s.";
}

}  // namespace

std::string RenderInstanceCaption(const EventInstance& inst,
                                  const ClassVocabulary& vocab) {
  std::string out = "From " + FormatFrameSeconds(inst.onset_frame) + "s to " +
                    FormatFrameSeconds(inst.offset_frame) + "s, " +
                    vocab.label(inst.class_idx) + " is heard.";
  AppendDimension(out, inst.azimuth, kAzimuth);
  AppendDimension(out, inst.elevation, kElevation);
  AppendDimension(out, inst.distance, kDistance);
  out += " Source id: " + std::to_string(inst.source_id);
  return out;
}

std::vector<InstanceCaption> RenderClipCaptions(const Clip& clip,
                                                const StaticTolerances& tol,
                                                const ClassVocabulary& vocab) {
  std::vector<InstanceCaption> out;
  for (const auto& inst : ExtractInstances(clip, tol)) {
    InstanceCaption c;
    c.clip_id = clip.clip_id;
    c.source_id = inst.source_id;
    c.class_idx = inst.class_idx;
    c.instance_idx = inst.instance_idx;
    c.text_rule = RenderInstanceCaption(inst, vocab);
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Numerals
// ---------------------------------------------------------------------------

std::vector<std::string> ExtractNumerals(std::string_view text) {
  std::vector<std::string> out;
  const auto is_digit = [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  };
  const auto is_alnum = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    if (begin > 0 && text[begin - 1] == '-' &&
        (begin == 1 || !is_alnum(text[begin - 2])))
      --begin;
    while (i < text.size() && is_digit(text[i])) ++i;
    if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
      ++i;
      while (i < text.size() && is_digit(text[i])) ++i;
    }
    out.emplace_back(text.substr(begin, i - begin));
  }
  return out;
}

void ValidateNumerals(std::string_view original, std::string_view paraphrase) {
  std::map<std::string, int> need;
  for (auto& n : ExtractNumerals(original)) ++need[n];
  for (auto& n : ExtractNumerals(paraphrase)) {
    auto it = need.find(n);
    if (it != need.end()) --it->second;
  }
  std::string missing;
  for (const auto& [n, count] : need) {
    if (count <= 0) continue;
    if (!missing.empty()) missing += ", ";
    missing += n;
  }
  if (!missing.empty())
    throw RephraseValidationError("paraphrase lost or altered numerals: " +
                                  missing);
}

// ---------------------------------------------------------------------------
// Offline paraphrase bank
// ---------------------------------------------------------------------------

namespace {

// A pattern is literal text with positional slots "{0}".."{9}". Matching is
// non-greedy for every slot except that the final literal must end the
// sentence.
struct Rewrite {
  std::string_view pattern;
  std::array<std::string_view, 3> alternatives;
};

constexpr std::array<Rewrite, 5> kRewrites{{
    {"From {0}s to {1}s, {2} is heard.",
     {"Between {0}s and {1}s, the sound of {2} is heard.",
      "The sound of {2} is heard from {0}s to {1}s.",
      "From {0}s until {1}s, {2} can be heard."}},
    {"It is initially at {0} and moved finally to {1}.",
     {"The source starts at {0} and ends at {1}.",
      "It begins at {0} and finally reaches {1}.",
      "Initially it is located at {0}, and it ends up at {1}."}},
    {"During this time, the sound source moved to {0} at {1}s and to {2} at "
     "{3}s.",
     {"During this interval, it reaches {0} at {1}s and {2} at {3}s.",
      "Over this period, the source reaches {0} at {1}s and {2} at {3}s.",
      "Along the way, it moves to {0} at {1}s and to {2} at {3}s."}},
    {"The sound was coming throughout from {0} of approximately {1}.",
     {"Throughout, the sound arrives from {0} of approximately {1}.",
      "The sound is continuously perceived from {0} of around {1}.",
      "The sound stays at {0} of roughly {1} the whole time."}},
    {"Source id: {0}",
     {"Source ID: {0}", "Source identifier: {0}", "Source ID: {0}"}},
}};

struct PatternPart {
  std::string_view literal;
  int slot = -1;  // slot following the literal, -1 for the tail
};

std::vector<PatternPart> SplitPattern(std::string_view pattern) {
  std::vector<PatternPart> parts;
  std::size_t start = 0;
  for (;;) {
    const auto open = pattern.find('{', start);
    if (open == std::string_view::npos) {
      parts.push_back({pattern.substr(start), -1});
      return parts;
    }
    parts.push_back({pattern.substr(start, open - start), pattern[open + 1] - '0'});
    start = open + 3;
  }
}

std::optional<std::array<std::string, 10>> Match(std::string_view pattern,
                                                 std::string_view text) {
  const auto parts = SplitPattern(pattern);
  std::array<std::string, 10> slots;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& part = parts[k];
    if (text.substr(pos, part.literal.size()) != part.literal)
      return std::nullopt;
    pos += part.literal.size();
    if (part.slot < 0) return pos == text.size() ? std::optional(slots)
                                                 : std::nullopt;
    const auto& next = parts[k + 1].literal;
    std::size_t end;
    if (parts[k + 1].slot < 0) {
      // Tail literal anchors at the end of the sentence.
      if (text.size() < pos + next.size() ||
          text.substr(text.size() - next.size()) != next)
        return std::nullopt;
      end = text.size() - next.size();
    } else {
      end = text.find(next, pos);
      if (end == std::string_view::npos) return std::nullopt;
    }
    if (end <= pos) return std::nullopt;
    slots[part.slot] = std::string(text.substr(pos, end - pos));
    pos = end;
  }
  return std::nullopt;
}

std::string Fill(std::string_view templ,
                 const std::array<std::string, 10>& slots) {
  std::string out;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ[i] == '{' && i + 2 < templ.size() && templ[i + 2] == '}') {
      out += slots[templ[i + 1] - '0'];
      i += 2;
    } else {
      out += templ[i];
    }
  }
  return out;
}

// Sentences end at a '.' followed by a space; decimals such as "0.2s" never
// contain ". ".
std::vector<std::string_view> SplitSentences(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == '.' && text[i + 1] == ' ') {
      out.push_back(text.substr(start, i + 1 - start));
      start = i + 2;
      i = start - 1;
    }
  }
  if (start < text.size()) out.push_back(text.substr(start));
  return out;
}

}  // namespace

std::string OfflineParaphrase(std::string_view text, std::uint64_t seed) {
  std::string out;
  for (const auto sentence : SplitSentences(text)) {
    std::string rewritten(sentence);
    for (const auto& rw : kRewrites) {
      if (auto slots = Match(rw.pattern, sentence)) {
        const auto pick = MixSeed(seed, sentence) % rw.alternatives.size();
        rewritten = Fill(rw.alternatives[pick], *slots);
        break;
      }
    }
    if (!out.empty()) out += ' ';
    out += rewritten;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Remote paraphrase
// ---------------------------------------------------------------------------

std::string CaptionPrompt(std::string_view caption) {
  std::string prompt =
      "Paraphrase the following sentences while preserving all factual "
      "details, numbers, and structure of the events. Do not add any new "
      "information or descriptions. Ensure the paraphrase sounds natural and "
      "fluent, but all temporal, spatial, and entity-related details (time, "
      "azimuth, elevation, distance, source ID) must remain exactly the "
      "same.\nSentence:\n";
  prompt += caption;
  return prompt;
}

std::string Rephrase(std::string_view text, RephraseClient& client) {
  std::string reply = client.Complete(CaptionPrompt(text));
  const auto b = reply.find_first_not_of(" \t\r\n");
  const auto e = reply.find_last_not_of(" \t\r\n");
  reply = b == std::string::npos ? std::string() : reply.substr(b, e - b + 1);
  if (reply.empty())
    throw RephraseValidationError("remote paraphrase is empty");
  ValidateNumerals(text, reply);
  return reply;
}

std::string Rephraser::Paraphrase(std::string_view text) const {
  if (!remote_) {
    std::string out = OfflineParaphrase(text, seed_);
    ValidateNumerals(text, out);
    return out;
  }
  for (int attempt = 1;; ++attempt) {
    try {
      return Rephrase(text, *remote_);
    } catch (const RephraseTransportError&) {
      if (attempt >= max_attempts_) throw;
    }
  }
}

int AttachParaphrases(std::vector<InstanceCaption>& captions,
                      const Rephraser& rephraser) {
  int failures = 0;
  for (auto& c : captions) {
    try {
      c.text_rephrased = rephraser.Paraphrase(c.text_rule);
      c.rephrase_provider = rephraser.provider();
    } catch (const RephraseTransportError&) {
      ++failures;
    } catch (const RephraseValidationError&) {
      ++failures;
    }
  }
  return failures;
}

}  // namespace seldqa
