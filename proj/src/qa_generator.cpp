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

#include "seldqa/qa_generator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <tuple>

#include "seldqa/util.hpp"

namespace seldqa {

std::string_view ToString(QuestionType t) {
  switch (t) {
    case QuestionType::kI: return "I";
    case QuestionType::kII: return "II";
    case QuestionType::kIII: return "III";
    case QuestionType::kIV: return "IV";
    case QuestionType::kV: return "V";
  }
  return "?";
}

QuestionType ParseQuestionType(std::string_view s) {
  if (s == "I") return QuestionType::kI;
  if (s == "II") return QuestionType::kII;
  if (s == "III") return QuestionType::kIII;
  if (s == "IV") return QuestionType::kIV;
  if (s == "V") return QuestionType::kV;
  throw InputError("unknown question type '" + std::string(s) + "'");
}

std::string_view ToString(Answer::Kind k) {
  switch (k) {
    case Answer::Kind::kYesNo: return "yes_no";
    case Answer::Kind::kClassSet: return "class_set";
    case Answer::Kind::kClassRanking: return "class_ranking";
  }
  return "?";
}

Answer::Kind ParseAnswerKind(std::string_view s) {
  if (s == "yes_no") return Answer::Kind::kYesNo;
  if (s == "class_set") return Answer::Kind::kClassSet;
  if (s == "class_ranking") return Answer::Kind::kClassRanking;
  throw InputError("unknown answer kind '" + std::string(s) + "'");
}

void Answer::Validate() const {
  if ((kind == Kind::kYesNo) != yes_no.has_value())
    throw InputError("yes/no value must be set exactly for yes_no answers");
  if (kind == Kind::kYesNo && !classes.empty())
    throw InputError("yes_no answer must not carry classes");
  std::set<int> seen;
  for (int c : classes)
    if (!seen.insert(c).second)
      throw InputError("answer lists class " + std::to_string(c) + " twice");
}

std::string QuestionId(std::string_view clip_id, QuestionType t,
                       std::string_view subtype, int k) {
  std::string id(clip_id);
  id += ':';
  id += ToString(t);
  id += ':';
  id += subtype;
  id += ':';
  id += std::to_string(k);
  return id;
}

std::vector<ClassFirstAppearance> FirstAppearances(
    const Clip& clip, const StaticTolerances& tol) {
  std::vector<ClassFirstAppearance> out;
  for (const auto& inst : ExtractInstances(clip, tol)) {
    const auto better = [&](const ClassFirstAppearance& cur) {
      return std::tie(inst.onset_frame, inst.source_id, inst.instance_idx) <
             std::tie(cur.onset_frame, cur.source_id, cur.instance_idx);
    };
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& r) {
      return r.class_idx == inst.class_idx;
    });
    if (it != out.end() && !better(*it)) continue;
    ClassFirstAppearance rec{inst.class_idx,
                             inst.source_id,
                             inst.instance_idx,
                             inst.onset_frame,
                             inst.azimuth.initial.value,
                             inst.elevation.initial.value,
                             inst.distance.initial.value,
                             inst.is_moving};
    if (it != out.end())
      *it = rec;
    else
      out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.class_idx < b.class_idx; });
  return out;
}

// ---------------------------------------------------------------------------
// Question phrasing. Each subtype has a set of stems and suffixes; the
// canonical question is stems[0] + suffixes[0], and the offline variant bank
// is the full cross product.
// ---------------------------------------------------------------------------

namespace {

struct Phrasing {
  std::string_view subtype;
  std::array<std::string_view, 5> stems;
  std::array<std::string_view, 3> suffixes;
};

constexpr std::array<std::string_view, 3> kWhere{" in the scene?",
                                                 " in this clip?",
                                                 " in the recording?"};
constexpr std::array<std::string_view, 3> kImperative{
    ".", " in this clip.", " in the scene."};

// Type I stems take the class label through "{L}".
constexpr Phrasing kType1{
    "",
    {"Is there a sound event of {L}", "Can {L} be heard", "Is {L} present",
     "Is any {L} audible", "Does {L} occur"},
    {" in the scene?", " in this clip?", " anywhere in the audio?"}};

constexpr Phrasing kType2{
    "active",
    {"Which sound sources are active", "What sound events can be heard",
     "Which sound classes are present", "What sounds are audible",
     "Which sound events occur"},
    kWhere};

constexpr std::array<Phrasing, 8> kType3{{
    {"stationary",
     {"What sound sources remain stationary", "Which sound events do not move",
      "Which sources stay in one place", "Which sound events keep a fixed position",
      "What sound sources are static"},
     kWhere},
    {"moving",
     {"What sound sources are moving", "Which sound events change position",
      "Which sources move around", "Which sound events travel through space",
      "What sound sources are in motion"},
     kWhere},
    {"leftmost",
     {"Which sound event is the leftmost", "Which sound source is located furthest to the left",
      "What is the leftmost sound event", "Which sound comes from the far left",
      "Which event lies furthest left"},
     kWhere},
    {"rightmost",
     {"Which sound event is the rightmost", "Which sound source is located furthest to the right",
      "What is the rightmost sound event", "Which sound comes from the far right",
      "Which event lies furthest right"},
     kWhere},
    {"topmost",
     {"Which sound event is the topmost", "Which sound source is positioned highest",
      "What is the highest sound event", "Which sound comes from the top",
      "Which event has the greatest elevation"},
     kWhere},
    {"bottommost",
     {"Which sound event is the bottommost", "Which sound source is positioned lowest",
      "What is the lowest sound event", "Which sound comes from the bottom",
      "Which event has the smallest elevation"},
     kWhere},
    {"nearest",
     {"Which sound event is the nearest to the microphone",
      "Which sound source is closest to the microphone",
      "What is the closest sound event", "Which sound is heard from the shortest distance",
      "Which event is nearest to the listener"},
     kWhere},
    {"farthest",
     {"Which sound event is the farthest from the microphone",
      "Which sound source is most distant from the microphone",
      "What is the most distant sound event", "Which sound is heard from the greatest distance",
      "Which event is farthest from the listener"},
     kWhere},
}};

constexpr std::array<Phrasing, 6> kType4{{
    {"azimuth_asc",
     {"Sort the audio events by azimuth angle in ascending order",
      "Order the sound events by increasing azimuth",
      "Arrange the sound sources from the lowest to the highest azimuth",
      "Rank the sound events by azimuth, smallest first",
      "List the sound events in ascending order of azimuth angle"},
     kImperative},
    {"azimuth_desc",
     {"Sort the audio events by azimuth angle in descending order",
      "Order the sound events by decreasing azimuth",
      "Arrange the sound sources from the highest to the lowest azimuth",
      "Rank the sound events by azimuth, largest first",
      "List the sound events in descending order of azimuth angle"},
     kImperative},
    {"distance_asc",
     {"Order the audio events by distance, beginning with the closest",
      "Sort the sound events from nearest to farthest",
      "Arrange the sound sources by increasing distance",
      "Rank the sound events from the closest to the most distant",
      "List the sound events ordered from near to far"},
     kImperative},
    {"distance_desc",
     {"Order the audio events by distance, beginning with the farthest",
      "Sort the sound events from farthest to nearest",
      "Arrange the sound sources by decreasing distance",
      "Rank the sound events from the most distant to the closest",
      "List the sound events ordered from far to near"},
     kImperative},
    {"elevation_asc",
     {"Sort the audio events from the bottommost to the topmost",
      "Order the sound events by increasing elevation",
      "Arrange the sound sources from lowest to highest elevation",
      "Rank the sound events by elevation, lowest first",
      "List the sound events in ascending order of elevation"},
     kImperative},
    {"elevation_desc",
     {"Sort the audio events from the topmost to the bottommost",
      "Order the sound events by decreasing elevation",
      "Arrange the sound sources from highest to lowest elevation",
      "Rank the sound events by elevation, highest first",
      "List the sound events in descending order of elevation"},
     kImperative},
}};

constexpr Phrasing kType5{
    "onset",
    {"Arrange the sound sources in order of when they begin, from earliest to latest",
     "Sort the sound events by their onset time",
     "Order the sound events from first to last appearance",
     "List the sound events in the order they start",
     "Rank the sound sources by when they first appear"},
    kImperative};

std::string Substitute(std::string_view text, std::string_view label) {
  std::string out(text);
  const auto pos = out.find("{L}");
  if (pos != std::string::npos) out.replace(pos, 3, label);
  return out;
}

std::string Canonical(const Phrasing& p, std::string_view label = {}) {
  return Substitute(std::string(p.stems[0]) + std::string(p.suffixes[0]),
                    label);
}

const Phrasing& PhrasingFor(QuestionType t, std::string_view subtype) {
  switch (t) {
    case QuestionType::kI: return kType1;
    case QuestionType::kII: return kType2;
    case QuestionType::kV: return kType5;
    case QuestionType::kIII:
      for (const auto& p : kType3)
        if (p.subtype == subtype) return p;
      break;
    case QuestionType::kIV:
      for (const auto& p : kType4)
        if (p.subtype == subtype) return p;
      break;
  }
  throw InputError("no phrasing for question type " + std::string(ToString(t)) +
                   " subtype '" + std::string(subtype) + "'");
}

QaItem MakeItem(const Clip& clip, QuestionType t, std::string subtype,
                std::string text, Answer answer) {
  QaItem item;
  item.question_id = QuestionId(clip.clip_id, t, subtype);
  item.clip_id = clip.clip_id;
  item.qtype = t;
  item.subtype = std::move(subtype);
  item.question_text = std::move(text);
  item.answer = std::move(answer);
  return item;
}

// Class indices sorted by `key` ascending (or descending), ties by class
// index ascending in both directions.
template <typename Key>
std::vector<int> RankBy(const std::vector<ClassFirstAppearance>& fa, Key key,
                        bool descending) {
  std::vector<ClassFirstAppearance> sorted = fa;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const auto& a, const auto& b) {
                     const auto ka = key(a);
                     const auto kb = key(b);
                     if (ka != kb) return descending ? ka > kb : ka < kb;
                     return a.class_idx < b.class_idx;
                   });
  std::vector<int> out;
  out.reserve(sorted.size());
  for (const auto& r : sorted) out.push_back(r.class_idx);
  return out;
}

std::vector<int> ByOnset(const std::vector<ClassFirstAppearance>& fa) {
  return RankBy(fa, [](const auto& r) { return r.onset_frame; }, false);
}

}  // namespace

std::vector<QaItem> GenType1(const Clip& clip, const ClassVocabulary& vocab,
                             const StaticTolerances& tol) {
  std::vector<bool> active(vocab.size(), false);
  for (const auto& r : FirstAppearances(clip, tol)) active[r.class_idx] = true;
  std::vector<QaItem> out;
  for (int c = 0; c < vocab.size(); ++c)
    out.push_back(MakeItem(clip, QuestionType::kI, LabelSlug(vocab.label(c)),
                           Canonical(kType1, vocab.label(c)),
                           Answer::YesNo(active[c])));
  return out;
}

QaItem GenType2(const Clip& clip, const ClassVocabulary& vocab,
                const StaticTolerances& tol) {
  (void)vocab;
  return MakeItem(clip, QuestionType::kII, std::string(kType2.subtype),
                  Canonical(kType2),
                  Answer::ClassSet(ByOnset(FirstAppearances(clip, tol))));
}

std::vector<QaItem> GenType3(const Clip& clip, const ClassVocabulary& vocab,
                             const QaOptions& opts) {
  (void)vocab;
  const auto fa = FirstAppearances(clip, opts.tol);
  std::vector<ClassFirstAppearance> stationary, moving;
  for (const auto& r : fa) (r.is_moving ? moving : stationary).push_back(r);

  std::vector<QaItem> out;
  out.push_back(MakeItem(clip, QuestionType::kIII, "stationary",
                         Canonical(kType3[0]),
                         Answer::ClassSet(ByOnset(stationary))));
  out.push_back(MakeItem(clip, QuestionType::kIII, "moving",
                         Canonical(kType3[1]), Answer::ClassSet(ByOnset(moving))));
  if (fa.empty()) return out;

  const bool left_positive =
      opts.convention == AzimuthConvention::kLeftPositive;
  const auto az = [](const auto& r) { return r.azimuth_deg; };
  const auto el = [](const auto& r) { return r.elevation_deg; };
  const auto dist = [](const auto& r) { return r.distance_cm; };
  const auto head = [](std::vector<int> v) {
    return Answer::ClassRanking({v.front()});
  };
  const std::array<Answer, 6> extremes{
      head(RankBy(fa, az, left_positive)),   // leftmost
      head(RankBy(fa, az, !left_positive)),  // rightmost
      head(RankBy(fa, el, true)),            // topmost
      head(RankBy(fa, el, false)),           // bottommost
      head(RankBy(fa, dist, false)),         // nearest
      head(RankBy(fa, dist, true)),          // farthest
  };
  for (std::size_t i = 0; i < extremes.size(); ++i) {
    const auto& p = kType3[i + 2];
    out.push_back(MakeItem(clip, QuestionType::kIII, std::string(p.subtype),
                           Canonical(p), extremes[i]));
  }
  return out;
}

std::vector<QaItem> GenType4(const Clip& clip, const ClassVocabulary& vocab,
                             const QaOptions& opts) {
  (void)vocab;
  const auto fa = FirstAppearances(clip, opts.tol);
  std::vector<QaItem> out;
  if (fa.size() < 2) return out;
  const auto az = [](const auto& r) { return r.azimuth_deg; };
  const auto el = [](const auto& r) { return r.elevation_deg; };
  const auto dist = [](const auto& r) { return r.distance_cm; };
  for (const auto& p : kType4) {
    const bool desc = p.subtype.ends_with("_desc");
    std::vector<int> order;
    if (p.subtype.starts_with("azimuth"))
      order = RankBy(fa, az, desc);
    else if (p.subtype.starts_with("elevation"))
      order = RankBy(fa, el, desc);
    else
      order = RankBy(fa, dist, desc);
    out.push_back(MakeItem(clip, QuestionType::kIV, std::string(p.subtype),
                           Canonical(p), Answer::ClassRanking(std::move(order))));
  }
  return out;
}

std::optional<QaItem> GenType5(const Clip& clip, const ClassVocabulary& vocab,
                               const StaticTolerances& tol) {
  (void)vocab;
  const auto fa = FirstAppearances(clip, tol);
  if (fa.size() < 2) return std::nullopt;
  return MakeItem(clip, QuestionType::kV, std::string(kType5.subtype),
                  Canonical(kType5), Answer::ClassRanking(ByOnset(fa)));
}

// ---------------------------------------------------------------------------
// Variants
// ---------------------------------------------------------------------------

namespace {

std::string LabelFor(const QaItem& item, const ClassVocabulary& vocab) {
  if (item.qtype != QuestionType::kI) return {};
  for (const auto& l : vocab.labels())
    if (LabelSlug(l) == item.subtype) return l;
  throw InputError("question " + item.question_id +
                   " names a class outside the vocabulary");
}

std::vector<std::string> RequiredTerms(const QaItem& item,
                                       const ClassVocabulary& vocab) {
  std::vector<std::string> terms;
  for (const auto& l : vocab.labels())
    if (item.question_text.find(l) != std::string::npos) terms.push_back(l);
  return terms;
}

std::string VariantPrompt(const QaItem& item,
                          const std::vector<std::string>& terms) {
  std::string prompt =
      "Write " + std::to_string(kVariantsPerQuestion) +
      " linguistically diverse paraphrases of the following question. Keep "
      "the meaning identical";
  if (!terms.empty()) {
    prompt += " and keep these sound event names exactly as written:";
    for (std::size_t i = 0; i < terms.size(); ++i)
      prompt += (i ? ", '" : " '") + terms[i] + "'";
  }
  prompt +=
      ". Return one paraphrase per line with no numbering or extra text.\n"
      "Question:\n" +
      item.question_text;
  return prompt;
}

std::vector<std::string> ParseVariantLines(const std::string& reply) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= reply.size()) {
    auto nl = reply.find('\n', start);
    if (nl == std::string::npos) nl = reply.size();
    std::string line = reply.substr(start, nl - start);
    start = nl + 1;
    // Strip list markers such as "1.", "2)", "-", "*".
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t d = b;
    while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d])))
      ++d;
    if (d > b && d < line.size() && (line[d] == '.' || line[d] == ')'))
      b = d + 1;
    else if (line[b] == '-' || line[b] == '*')
      b = b + 1;
    b = line.find_first_not_of(" \t", b);
    const auto e = line.find_last_not_of(" \t\r");
    if (b == std::string::npos || e < b) continue;
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

void ValidateVariants(const std::vector<std::string>& variants,
                      const std::vector<std::string>& required_terms) {
  if (static_cast<int>(variants.size()) != kVariantsPerQuestion)
    throw RephraseValidationError(
        "expected " + std::to_string(kVariantsPerQuestion) + " variants, got " +
        std::to_string(variants.size()));
  std::set<std::string> seen;
  for (const auto& v : variants) {
    if (v.empty()) throw RephraseValidationError("empty variant");
    if (!seen.insert(v).second)
      throw RephraseValidationError("duplicate variant '" + v + "'");
    for (const auto& t : required_terms)
      if (v.find(t) == std::string::npos)
        throw RephraseValidationError("variant '" + v + "' drops '" + t + "'");
  }
}

std::vector<std::string> OfflineVariants(const QaItem& item,
                                         const ClassVocabulary& vocab,
                                         std::uint64_t seed) {
  const Phrasing& p = PhrasingFor(item.qtype, item.subtype);
  const std::string label = LabelFor(item, vocab);
  std::vector<std::string> bank;
  for (const auto stem : p.stems)
    for (const auto suffix : p.suffixes)
      bank.push_back(Substitute(std::string(stem) + std::string(suffix), label));
  // Partial Fisher-Yates: the first kVariantsPerQuestion slots.
  StableRng rng(MixSeed(seed, item.question_id));
  for (int i = 0; i < kVariantsPerQuestion; ++i) {
    const auto j = i + rng.Below(bank.size() - i);
    std::swap(bank[i], bank[j]);
  }
  bank.resize(kVariantsPerQuestion);
  return bank;
}

std::vector<std::string> VariantsFor(const QaItem& item,
                                     const ClassVocabulary& vocab,
                                     const Rephraser& rephraser) {
  if (rephraser.offline())
    return OfflineVariants(item, vocab, rephraser.seed());
  const auto terms = RequiredTerms(item, vocab);
  const std::string prompt = VariantPrompt(item, terms);
  for (int attempt = 1;; ++attempt) {
    try {
      auto lines = ParseVariantLines(rephraser.remote()->Complete(prompt));
      // Surplus lines are tolerated; the first ten distinct ones are kept.
      std::vector<std::string> variants;
      for (auto& l : lines) {
        if (std::find(variants.begin(), variants.end(), l) != variants.end())
          continue;
        variants.push_back(std::move(l));
        if (static_cast<int>(variants.size()) == kVariantsPerQuestion) break;
      }
      ValidateVariants(variants, terms);
      return variants;
    } catch (const RephraseTransportError&) {
      if (attempt >= rephraser.max_attempts()) throw;
    }
  }
}

std::vector<QaItem> GenerateClipQa(const Clip& clip,
                                   const ClassVocabulary& vocab,
                                   const QaOptions& opts,
                                   const Rephraser& rephraser,
                                   int* variant_fallbacks) {
  std::vector<QaItem> items = GenType1(clip, vocab, opts.tol);
  if (opts.balance_type1) {
    std::vector<QaItem> yes, no;
    for (auto& it : items) (*it.answer.yes_no ? yes : no).push_back(std::move(it));
    const std::size_t keep =
        std::min(no.size(), std::max<std::size_t>(1, yes.size()));
    StableRng rng(MixSeed(rephraser.seed(), clip.clip_id + ":balance"));
    for (std::size_t i = 0; i < keep; ++i)
      std::swap(no[i], no[i + rng.Below(no.size() - i)]);
    no.resize(keep);
    items = std::move(yes);
    for (auto& it : no) items.push_back(std::move(it));
  }

  const auto fa = FirstAppearances(clip, opts.tol);
  if (!fa.empty()) {
    items.push_back(GenType2(clip, vocab, opts.tol));
    for (auto& it : GenType3(clip, vocab, opts)) items.push_back(std::move(it));
    for (auto& it : GenType4(clip, vocab, opts)) items.push_back(std::move(it));
    if (auto t5 = GenType5(clip, vocab, opts.tol)) items.push_back(std::move(*t5));
  }

  std::sort(items.begin(), items.end(), [](const QaItem& a, const QaItem& b) {
    return std::tie(a.qtype, a.subtype) < std::tie(b.qtype, b.subtype);
  });

  for (auto& it : items) {
    try {
      it.variants = VariantsFor(it, vocab, rephraser);
    } catch (const RephraseTransportError&) {
      it.variants = OfflineVariants(it, vocab, rephraser.seed());
      if (variant_fallbacks) ++*variant_fallbacks;
    } catch (const RephraseValidationError&) {
      it.variants = OfflineVariants(it, vocab, rephraser.seed());
      if (variant_fallbacks) ++*variant_fallbacks;
    }
  }
  return items;
}

}  // namespace seldqa
