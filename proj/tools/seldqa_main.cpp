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

// seldqa: caption, qa, score, synth and loss-check commands.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "seldqa/pipeline.hpp"

namespace {

void Print(const seldqa::CommandResult& r) {
  for (const auto& m : r.messages) {
    const bool diag = m.rfind("error:", 0) == 0 || m.rfind("warning:", 0) == 0;
    (diag ? std::cerr : std::cout) << m << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial audio caption and QA dataset toolkit"};
  app.require_subcommand(1);

  seldqa::ConfigOverrides flags;
  std::optional<std::string> config_file;
  std::optional<std::string> vocab, convention, out, endpoint, model;
  std::optional<double> tol_az, tol_el, tol_dist;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool offline = false;

  // Shared options live on the app; subcommands fall through to them so
  // they may appear on either side of the command name.
  app.add_option("--config", config_file, "JSON config file (lowest precedence)");
  app.add_option("--vocab", vocab, "class vocabulary file (index,label lines)");
  app.add_option("--tol-az", tol_az, "static azimuth tolerance, degrees")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tol-el", tol_el, "static elevation tolerance, degrees")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tol-dist", tol_dist, "static distance tolerance, cm")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--azimuth-convention", convention,
                 "which azimuth sign points left")
      ->check(CLI::IsMember({"left-positive", "right-positive"}));
  app.add_flag("--offline", offline, "use the offline paraphrase bank");
  app.add_option("--rephrase-endpoint", endpoint,
                 "chat-completions URL for remote paraphrasing");
  app.add_option("--rephrase-model", model, "model name sent to the endpoint");
  app.add_option("--seed", seed, "seed for every random choice");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory");
  app.add_flag("--keep-going", flags.keep_going,
               "keep outputs of valid files when others fail");

  std::string input_dir;
  auto* caption = app.add_subcommand("caption", "caption every *.csv recording");
  caption->add_option("input", input_dir, "directory of annotation CSVs")
      ->required();
  caption->fallthrough();

  auto* qa = app.add_subcommand("qa", "generate the QA dataset");
  qa->add_option("input", input_dir, "directory of annotation CSVs")->required();
  qa->add_flag("--balance-type1", flags.balance_type1,
               "sample presence questions to balance yes and no");
  qa->fallthrough();

  std::string gt_file, pred_file, report_file, model_name = "submission";
  bool macro = false;
  auto* score = app.add_subcommand("score", "score predictions against a QA file");
  score->add_option("gt", gt_file, "QA dataset (JSONL)")->required();
  score->add_option("pred", pred_file, "predictions (JSONL)")->required();
  score->add_option("--report", report_file,
                    "JSON report path (default {out}/score_report.json)");
  score->add_option("--model-name", model_name, "row label in the table");
  score->add_flag("--macro", macro, "macro-average over question types");
  score->fallthrough();

  seldqa::synth::CorpusOptions corpus;
  auto* synth = app.add_subcommand("synth", "write a synthetic annotation corpus");
  synth->add_option("--recordings", corpus.recordings, "number of CSV files")
      ->check(CLI::PositiveNumber);
  synth->add_option("--clips", corpus.clips_per_recording,
                    "10-second clips per recording")
      ->check(CLI::PositiveNumber);
  synth->add_option("--max-sources", corpus.scene.max_sources,
                    "max sources per clip")
      ->check(CLI::NonNegativeNumber);
  synth->fallthrough();

  seldqa::loss::SelfCheckOptions loss_opts;
  auto* loss_check = app.add_subcommand("loss-check", "run the loss self-checks");
  loss_check->add_option("--trials", loss_opts.trials, "points per check")
      ->check(CLI::PositiveNumber);
  loss_check->add_option("--margin", loss_opts.cfg.margin, "ranking margin")
      ->check(CLI::NonNegativeNumber);
  loss_check->add_option("--classes", loss_opts.num_classes, "number of classes")
      ->check(CLI::Range(1, 20));
  loss_check->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (vocab) flags.vocab = *vocab;
    flags.tol_az = tol_az;
    flags.tol_el = tol_el;
    flags.tol_dist = tol_dist;
    flags.azimuth_convention = convention;
    if (offline) flags.offline = true;
    flags.rephrase_endpoint = endpoint;
    flags.rephrase_model = model;
    if (out) flags.out_dir = *out;
    flags.seed = seed;
    flags.jobs = jobs;

    std::optional<std::filesystem::path> cfg_path;
    if (config_file) cfg_path = *config_file;
    const auto cfg = seldqa::ResolveConfig(flags, seldqa::ProcessEnv, cfg_path);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";

    seldqa::CommandResult result;
    if (*caption) {
      result = seldqa::RunCaption(input_dir, cfg);
    } else if (*qa) {
      result = seldqa::RunQa(input_dir, cfg);
    } else if (*score) {
      const std::filesystem::path report =
          report_file.empty() ? cfg.out_dir / "score_report.json"
                              : std::filesystem::path(report_file);
      result = seldqa::RunScore(gt_file, pred_file, cfg,
                                macro ? seldqa::Averaging::kMacro
                                      : seldqa::Averaging::kMicro,
                                report, model_name);
    } else if (*synth) {
      result = seldqa::RunSynth(cfg, corpus);
    } else {
      loss_opts.seed = cfg.seed;
      result = seldqa::RunLossCheck(loss_opts);
    }
    Print(result);
    return result.exit_code;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return seldqa::kExitFatal;
  } catch (const seldqa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return seldqa::kExitErrors;
  }
}
