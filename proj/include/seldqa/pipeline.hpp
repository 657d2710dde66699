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

// End-to-end commands behind the seldqa tool. Each returns an exit code
// (0 success, 1 validation or scoring errors, 2 fatal I/O) plus the lines
// the tool prints.

#ifndef SELDQA_PIPELINE_HPP_
#define SELDQA_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seldqa/captioner.hpp"
#include "seldqa/instances.hpp"
#include "seldqa/loss_ref.hpp"
#include "seldqa/qa_generator.hpp"
#include "seldqa/scene_model.hpp"
#include "seldqa/scoring.hpp"
#include "seldqa/synth_testkit.hpp"

namespace seldqa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitErrors = 1;
inline constexpr int kExitFatal = 2;

/// Environment variable holding the remote paraphrase API key. The key is
/// never read from flags or config files.
inline constexpr const char* kApiKeyEnv = "SELDQA_API_KEY";

struct PipelineConfig {
  ClassVocabulary vocab = ClassVocabulary::Starss23();
  StaticTolerances tol;
  AzimuthConvention convention = AzimuthConvention::kLeftPositive;
  bool offline = true;
  std::string rephrase_endpoint;
  std::string rephrase_model = "gpt-4";
  std::string api_key;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool keep_going = false;
  bool balance_type1 = false;
  /// Notes produced while resolving the configuration (e.g. a remote
  /// paraphraser requested without an endpoint).
  std::vector<std::string> warnings;

  /// Offline rephraser, or a remote one when !offline and an endpoint is set.
  Rephraser MakeRephraser() const;
};

/// Values given on the command line; unset fields fall through to the
/// environment, then the config file, then defaults.
struct ConfigOverrides {
  std::optional<std::filesystem::path> vocab;
  std::optional<double> tol_az, tol_el, tol_dist;
  std::optional<std::string> azimuth_convention;  // "left-positive" | "right-positive"
  std::optional<bool> offline;
  std::optional<std::string> rephrase_endpoint;
  std::optional<std::string> rephrase_model;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool keep_going = false;
  bool balance_type1 = false;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> ProcessEnv(const std::string& name);

/// Resolves flags > environment (SELDQA_VOCAB, SELDQA_TOL_AZ, SELDQA_TOL_EL,
/// SELDQA_TOL_DIST, SELDQA_AZIMUTH_CONVENTION, SELDQA_OFFLINE,
/// SELDQA_REPHRASE_ENDPOINT, SELDQA_REPHRASE_MODEL, SELDQA_OUT, SELDQA_SEED,
/// SELDQA_JOBS) > JSON config file > defaults. A config file that contains
/// an API key is rejected. Throws InputError/RangeError.
PipelineConfig ResolveConfig(const ConfigOverrides& flags, const EnvLookup& env,
                             const std::optional<std::filesystem::path>& config_file);

AzimuthConvention ParseAzimuthConvention(const std::string& s);

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::string> messages;  // summary and diagnostics, in order
  std::vector<std::filesystem::path> outputs;
  std::map<std::string, long long> counts;
};

/// Writes `{out}/{recording_id}.captions.jsonl` for every `*.csv` in
/// `input_dir`. On a parse failure without keep_going, every output of this
/// run is removed.
CommandResult RunCaption(const std::filesystem::path& input_dir,
                         const PipelineConfig& cfg);

/// Writes `{out}/qa.jsonl` with every question for every clip, ordered by
/// (clip_id, type, subtype). counts holds per-type totals ("I".."V").
CommandResult RunQa(const std::filesystem::path& input_dir,
                    const PipelineConfig& cfg);

/// Scores `pred_file` against `gt_file`, writes the JSON report to
/// `report_path` and returns the table in messages.
CommandResult RunScore(const std::filesystem::path& gt_file,
                       const std::filesystem::path& pred_file,
                       const PipelineConfig& cfg, Averaging averaging,
                       const std::filesystem::path& report_path,
                       const std::string& model_name = "submission");

/// Writes a synthetic annotation corpus into cfg.out_dir.
CommandResult RunSynth(const PipelineConfig& cfg, synth::CorpusOptions opts);

/// Runs the loss self-check suite and renders a pass/fail table.
CommandResult RunLossCheck(const loss::SelfCheckOptions& opts);

}  // namespace seldqa

#endif  // SELDQA_PIPELINE_HPP_
