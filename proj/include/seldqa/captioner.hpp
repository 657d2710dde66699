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

#ifndef SELDQA_CAPTIONER_HPP_
#define SELDQA_CAPTIONER_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seldqa/instances.hpp"
#include "seldqa/scene_model.hpp"

namespace seldqa {

struct InstanceCaption {
  std::string clip_id;
  int source_id = 0;
  int class_idx = 0;
  int instance_idx = 0;
  std::string text_rule;
  std::optional<std::string> text_rephrased;
  std::optional<std::string> rephrase_provider;

  bool operator==(const InstanceCaption&) const = default;
};

/// Rule-based trajectory caption for one instance. Each spatial dimension is
/// rendered independently: one "approximately" sentence when static, an
/// initial/final sentence plus a max/min sentence when moving.
std::string RenderInstanceCaption(const EventInstance& inst,
                                  const ClassVocabulary& vocab);

/// Captions for every instance of a clip in (source, class, onset) order.
/// text_rephrased is left empty; see Rephraser.
std::vector<InstanceCaption> RenderClipCaptions(const Clip& clip,
                                                const StaticTolerances& tol,
                                                const ClassVocabulary& vocab);

// ---------------------------------------------------------------------------
// Paraphrasing
// ---------------------------------------------------------------------------

/// Network or protocol failure talking to a remote paraphrase service.
/// Callers may retry.
class RephraseTransportError : public Error {
 public:
  using Error::Error;
};

/// A paraphrase that broke a content constraint (a numeral changed, a class
/// name disappeared, wrong number of variants).
class RephraseValidationError : public Error {
 public:
  using Error::Error;
};

/// A text-completion backend. Implementations must be safe to call from
/// several threads at once.
class RephraseClient {
 public:
  virtual ~RephraseClient() = default;
  virtual std::string Complete(const std::string& prompt) = 0;
  virtual std::string name() const = 0;
};

/// Speaks the chat-completions request/response shape:
///   POST {endpoint}  {"model": ..., "messages": [{"role": "user", ...}]}
///   -> {"choices": [{"message": {"content": "..."}}]}
/// The API key, when non-empty, goes into an `Authorization: Bearer` header.
class HttpRephraseClient : public RephraseClient {
 public:
  HttpRephraseClient(std::string endpoint, std::string model,
                     std::string api_key,
                     std::chrono::seconds timeout = std::chrono::seconds(60));

  std::string Complete(const std::string& prompt) override;
  std::string name() const override { return model_; }

 private:
  std::string endpoint_;
  std::string model_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

/// Signed integer and decimal literals in `text`, in order of appearance
/// ("-70", "0.2", "97").
std::vector<std::string> ExtractNumerals(std::string_view text);

/// Throws RephraseValidationError unless every numeral of `original`
/// appears in `paraphrase` at least as many times.
void ValidateNumerals(std::string_view original, std::string_view paraphrase);

/// Caption paraphrase prompt sent to remote clients.
std::string CaptionPrompt(std::string_view caption);

/// Deterministic offline paraphrase: each sentence that matches a known
/// caption clause is rewritten with one of several equivalent phrasings,
/// chosen from (seed, sentence). Unknown sentences pass through unchanged.
/// Numerals and the source id are preserved verbatim.
std::string OfflineParaphrase(std::string_view text, std::uint64_t seed);

/// Sends `text` to `client` and validates the reply. Throws
/// RephraseTransportError or RephraseValidationError.
std::string Rephrase(std::string_view text, RephraseClient& client);

/// Dispatches between the offline paraphrase bank and a remote client.
class Rephraser {
 public:
  /// Offline mode.
  explicit Rephraser(std::uint64_t seed) : seed_(seed) {}
  Rephraser(std::uint64_t seed, std::shared_ptr<RephraseClient> remote,
            int max_attempts = 3)
      : seed_(seed), remote_(std::move(remote)), max_attempts_(max_attempts) {}

  bool offline() const { return remote_ == nullptr; }
  std::uint64_t seed() const { return seed_; }
  RephraseClient* remote() const { return remote_.get(); }
  int max_attempts() const { return max_attempts_; }
  std::string provider() const {
    return remote_ ? remote_->name() : std::string("offline");
  }

  /// Offline: OfflineParaphrase. Remote: Rephrase with up to max_attempts
  /// tries on transport errors; validation errors are not retried.
  std::string Paraphrase(std::string_view text) const;

 private:
  std::uint64_t seed_;
  std::shared_ptr<RephraseClient> remote_;
  int max_attempts_ = 3;
};

/// Fills text_rephrased/rephrase_provider on each caption. A caption whose
/// paraphrase fails validation or transport keeps only text_rule. Returns
/// the number of captions left without a paraphrase.
int AttachParaphrases(std::vector<InstanceCaption>& captions,
                      const Rephraser& rephraser);

}  // namespace seldqa

#endif  // SELDQA_CAPTIONER_HPP_
