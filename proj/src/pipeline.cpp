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

#include "seldqa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "seldqa/ingest.hpp"
#include "seldqa/records.hpp"

namespace fs = std::filesystem;

namespace seldqa {

namespace {

// Runs fn(0..n-1) on up to `jobs` threads. Exceptions escaping fn are
// rethrown on the calling thread (first index wins).
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<fs::path> ListCsv(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Checks the input directory and creates the output directory. Returns a
// message on failure.
std::optional<std::string> PrepareDirs(const fs::path& input_dir,
                                       const fs::path& out_dir) {
  std::error_code ec;
  if (!fs::is_directory(input_dir, ec))
    return "input directory not found: " + input_dir.string();
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    return "cannot create output directory " + out_dir.string() + ": " +
           ec.message();
  return std::nullopt;
}

std::string Describe(const fs::path& file, const std::exception& e) {
  if (const auto* pe = dynamic_cast<const ParseError*>(&e); pe && pe->line() > 0)
    return file.string() + ":" + std::to_string(pe->line()) + ": " + e.what();
  return file.string() + ": " + e.what();
}

bool ParseBool(const std::string& what, const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw InputError(what + ": expected a boolean, got '" + s + "'");
}

double ParseDouble(const std::string& what, const std::string& s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw InputError(what + ": expected a number, got '" + s + "'");
  return v;
}

template <typename Int>
Int ParseInt(const std::string& what, const std::string& s) {
  Int v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw InputError(what + ": expected an integer, got '" + s + "'");
  return v;
}

// One layer of configuration values, all as strings.
using Layer = std::map<std::string, std::string>;

Layer ReadConfigFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config file " + path.string() + ": " + e.what(), 0);
  }
  if (!j.is_object())
    throw InputError("config file " + path.string() + " must hold an object");
  Layer layer;
  for (const auto& [key, value] : j.items()) {
    if (key == "api_key" || key == "rephrase_api_key")
      throw InputError("config file " + path.string() +
                       " must not contain an API key; set " + kApiKeyEnv);
    if (value.is_string())
      layer[key] = value.get<std::string>();
    else if (value.is_boolean())
      layer[key] = value.get<bool>() ? "true" : "false";
    else if (value.is_number())
      layer[key] = value.dump();
    else
      throw InputError("config key '" + key + "' must be a scalar");
  }
  return layer;
}

}  // namespace

std::optional<std::string> ProcessEnv(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

AzimuthConvention ParseAzimuthConvention(const std::string& s) {
  if (s == "left-positive") return AzimuthConvention::kLeftPositive;
  if (s == "right-positive") return AzimuthConvention::kRightPositive;
  throw InputError("azimuth convention must be left-positive or "
                   "right-positive, got '" + s + "'");
}

PipelineConfig ResolveConfig(const ConfigOverrides& flags, const EnvLookup& env,
                             const std::optional<fs::path>& config_file) {
  const Layer file = config_file ? ReadConfigFile(*config_file) : Layer{};
  // Looks a key up in environment, then file.
  auto lookup = [&](const std::string& key) -> std::optional<std::string> {
    std::string var = "SELDQA_" + key;
    std::transform(var.begin(), var.end(), var.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (auto v = env(var)) return v;
    if (auto it = file.find(key); it != file.end()) return it->second;
    return std::nullopt;
  };

  PipelineConfig cfg;
  if (flags.vocab) {
    cfg.vocab = ClassVocabulary::ReadFile(*flags.vocab);
  } else if (auto v = lookup("vocab")) {
    cfg.vocab = ClassVocabulary::ReadFile(*v);
  }

  auto number = [&](const std::optional<double>& flag, const char* key,
                    double fallback) {
    if (flag) return *flag;
    if (auto v = lookup(key)) return ParseDouble(key, *v);
    return fallback;
  };
  cfg.tol.azimuth_deg = number(flags.tol_az, "tol_az", cfg.tol.azimuth_deg);
  cfg.tol.elevation_deg = number(flags.tol_el, "tol_el", cfg.tol.elevation_deg);
  cfg.tol.distance_cm = number(flags.tol_dist, "tol_dist", cfg.tol.distance_cm);
  cfg.tol.Validate();

  if (flags.azimuth_convention)
    cfg.convention = ParseAzimuthConvention(*flags.azimuth_convention);
  else if (auto v = lookup("azimuth_convention"))
    cfg.convention = ParseAzimuthConvention(*v);

  if (flags.rephrase_endpoint)
    cfg.rephrase_endpoint = *flags.rephrase_endpoint;
  else if (auto v = lookup("rephrase_endpoint"))
    cfg.rephrase_endpoint = *v;
  if (flags.rephrase_model)
    cfg.rephrase_model = *flags.rephrase_model;
  else if (auto v = lookup("rephrase_model"))
    cfg.rephrase_model = *v;

  std::optional<bool> offline = flags.offline;
  if (!offline)
    if (auto v = lookup("offline")) offline = ParseBool("offline", *v);
  cfg.offline = offline.value_or(cfg.rephrase_endpoint.empty());
  if (!cfg.offline && cfg.rephrase_endpoint.empty()) {
    cfg.warnings.push_back(
        "no rephrase endpoint configured; using offline paraphrases");
    cfg.offline = true;
  }
  if (auto key = env(kApiKeyEnv)) cfg.api_key = *key;

  if (flags.out_dir)
    cfg.out_dir = *flags.out_dir;
  else if (auto v = lookup("out"))
    cfg.out_dir = *v;

  if (flags.seed)
    cfg.seed = *flags.seed;
  else if (auto v = lookup("seed"))
    cfg.seed = ParseInt<std::uint64_t>("seed", *v);

  if (flags.jobs)
    cfg.jobs = *flags.jobs;
  else if (auto v = lookup("jobs"))
    cfg.jobs = ParseInt<int>("jobs", *v);
  if (cfg.jobs < 1) throw RangeError("jobs must be at least 1");

  cfg.keep_going = flags.keep_going;
  cfg.balance_type1 = flags.balance_type1;
  return cfg;
}

Rephraser PipelineConfig::MakeRephraser() const {
  if (offline) return Rephraser(seed);
  return Rephraser(seed, std::make_shared<HttpRephraseClient>(
                             rephrase_endpoint, rephrase_model, api_key));
}

// ---------------------------------------------------------------------------

CommandResult RunCaption(const fs::path& input_dir, const PipelineConfig& cfg) {
  CommandResult res;
  if (auto err = PrepareDirs(input_dir, cfg.out_dir)) {
    res.exit_code = kExitFatal;
    res.messages.push_back("error: " + *err);
    return res;
  }
  const auto files = ListCsv(input_dir);
  if (files.empty()) {
    res.messages.push_back("warning: no *.csv files in " + input_dir.string());
    res.messages.push_back("caption: 0 recordings, 0 clips, 0 instances");
    return res;
  }

  struct FileOutcome {
    bool ok = false;
    bool fatal = false;
    std::string error;
    fs::path output;
    long long clips = 0, instances = 0, unparaphrased = 0;
  };
  std::vector<FileOutcome> outcomes(files.size());
  const Rephraser rephraser = cfg.MakeRephraser();

  ParallelFor(files.size(), cfg.jobs, [&](std::size_t i) {
    FileOutcome& o = outcomes[i];
    std::string content;
    try {
      const auto rec = ParseAnnotationFile(files[i], cfg.vocab);
      for (const Clip& clip : SegmentIntoClips(rec)) {
        auto captions = RenderClipCaptions(clip, cfg.tol, cfg.vocab);
        o.unparaphrased += AttachParaphrases(captions, rephraser);
        for (const auto& c : captions) content += ToJsonLine(CaptionToJson(c, cfg.vocab));
        o.instances += static_cast<long long>(captions.size());
        ++o.clips;
      }
      o.output = cfg.out_dir / (rec.recording_id + ".captions.jsonl");
    } catch (const std::exception& e) {
      o.error = Describe(files[i], e);
      return;
    }
    try {
      WriteFileAtomic(o.output, content);
      o.ok = true;
    } catch (const std::exception& e) {
      o.fatal = true;
      o.error = o.output.string() + ": " + e.what();
    }
  });

  long long clips = 0, instances = 0, unparaphrased = 0, failed = 0;
  bool fatal = false;
  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++failed;
      fatal = fatal || o.fatal;
      res.messages.push_back("error: " + o.error);
      continue;
    }
    clips += o.clips;
    instances += o.instances;
    unparaphrased += o.unparaphrased;
  }
  if (failed > 0 && !cfg.keep_going) {
    for (const auto& o : outcomes)
      if (o.ok) fs::remove(o.output);
    res.messages.push_back("caption: " + std::to_string(failed) +
                           " file(s) failed; no outputs kept");
    res.exit_code = fatal ? kExitFatal : kExitErrors;
    return res;
  }
  for (const auto& o : outcomes)
    if (o.ok) res.outputs.push_back(o.output);
  if (unparaphrased > 0 && !rephraser.offline())
    res.messages.push_back("warning: " + std::to_string(unparaphrased) +
                           " caption(s) kept without a paraphrase");
  res.counts = {{"recordings", static_cast<long long>(res.outputs.size())},
                {"clips", clips},
                {"instances", instances},
                {"failed", failed}};
  std::string summary = "caption: " + std::to_string(res.outputs.size()) +
                        " recordings, " + std::to_string(clips) + " clips, " +
                        std::to_string(instances) + " instances";
  if (failed > 0) summary += ", " + std::to_string(failed) + " failed";
  res.messages.push_back(summary + " -> " + cfg.out_dir.string());
  if (failed > 0) res.exit_code = fatal ? kExitFatal : kExitErrors;
  return res;
}

CommandResult RunQa(const fs::path& input_dir, const PipelineConfig& cfg) {
  CommandResult res;
  if (auto err = PrepareDirs(input_dir, cfg.out_dir)) {
    res.exit_code = kExitFatal;
    res.messages.push_back("error: " + *err);
    return res;
  }
  const auto files = ListCsv(input_dir);
  if (files.empty())
    res.messages.push_back("warning: no *.csv files in " + input_dir.string());

  std::vector<std::vector<Clip>> per_file(files.size());
  std::vector<std::string> file_errors(files.size());
  ParallelFor(files.size(), cfg.jobs, [&](std::size_t i) {
    try {
      per_file[i] = SegmentIntoClips(ParseAnnotationFile(files[i], cfg.vocab));
    } catch (const std::exception& e) {
      file_errors[i] = Describe(files[i], e);
    }
  });
  long long failed = 0;
  for (const auto& e : file_errors)
    if (!e.empty()) {
      ++failed;
      res.messages.push_back("error: " + e);
    }
  if (failed > 0 && !cfg.keep_going) {
    res.messages.push_back("qa: " + std::to_string(failed) +
                           " file(s) failed; no output written");
    res.exit_code = kExitErrors;
    return res;
  }

  std::vector<const Clip*> clips;
  for (const auto& v : per_file)
    for (const auto& c : v) clips.push_back(&c);
  std::sort(clips.begin(), clips.end(),
            [](const Clip* a, const Clip* b) { return a->clip_id < b->clip_id; });

  QaOptions opts;
  opts.tol = cfg.tol;
  opts.convention = cfg.convention;
  opts.balance_type1 = cfg.balance_type1;
  const Rephraser rephraser = cfg.MakeRephraser();

  struct ClipOutcome {
    std::string lines;
    std::map<QuestionType, long long> counts;
    int fallbacks = 0;
  };
  std::vector<ClipOutcome> outcomes(clips.size());
  ParallelFor(clips.size(), cfg.jobs, [&](std::size_t i) {
    auto& o = outcomes[i];
    for (const auto& item : GenerateClipQa(*clips[i], cfg.vocab, opts, rephraser,
                                           &o.fallbacks)) {
      o.lines += ToJsonLine(QaItemToJson(item, cfg.vocab));
      ++o.counts[item.qtype];
    }
  });

  std::string content;
  std::map<QuestionType, long long> counts;
  long long total = 0, fallbacks = 0;
  for (const auto& o : outcomes) {
    content += o.lines;
    for (const auto& [t, n] : o.counts) {
      counts[t] += n;
      total += n;
    }
    fallbacks += o.fallbacks;
  }
  const fs::path out = cfg.out_dir / "qa.jsonl";
  try {
    WriteFileAtomic(out, content);
  } catch (const std::exception& e) {
    res.exit_code = kExitFatal;
    res.messages.push_back("error: " + out.string() + ": " + e.what());
    return res;
  }
  res.outputs.push_back(out);
  if (fallbacks > 0)
    res.messages.push_back("warning: " + std::to_string(fallbacks) +
                           " question(s) fell back to offline variants");

  std::string breakdown;
  for (QuestionType t : {QuestionType::kI, QuestionType::kII, QuestionType::kIII,
                         QuestionType::kIV, QuestionType::kV}) {
    const std::string name(ToString(t));
    res.counts[name] = counts[t];
    if (!breakdown.empty()) breakdown += ", ";
    breakdown += name + ": " + std::to_string(counts[t]);
  }
  res.counts["clips"] = static_cast<long long>(clips.size());
  res.counts["questions"] = total;
  res.counts["failed"] = failed;
  res.messages.push_back("qa: " + std::to_string(clips.size()) + " clips, " +
                         std::to_string(total) + " questions (" + breakdown +
                         ") -> " + out.string());
  if (failed > 0) res.exit_code = kExitErrors;
  return res;
}

CommandResult RunScore(const fs::path& gt_file, const fs::path& pred_file,
                       const PipelineConfig& cfg, Averaging averaging,
                       const fs::path& report_path,
                       const std::string& model_name) {
  CommandResult res;
  ScoreReport report;
  try {
    report = ScoreDataset(gt_file, pred_file, cfg.vocab, averaging);
  } catch (const ParseError& e) {
    res.exit_code = kExitErrors;
    res.messages.push_back(std::string("error: ") + e.what());
    return res;
  } catch (const InputError& e) {
    res.exit_code = kExitFatal;
    res.messages.push_back(std::string("error: ") + e.what());
    return res;
  }
  res.messages.push_back(RenderReportTable(report, model_name));
  if (report.n_missing > 0)
    res.messages.push_back("note: " + std::to_string(report.n_missing) +
                           " question(s) had no prediction and were scored "
                           "as empty answers");
  if (!report.unknown_question_ids.empty()) {
    res.messages.push_back("warning: " +
                           std::to_string(report.unknown_question_ids.size()) +
                           " prediction(s) reference unknown question ids:");
    for (const auto& id : report.unknown_question_ids)
      res.messages.push_back("  " + id);
  }
  if (!report.errors.empty()) {
    res.messages.push_back("error: " + std::to_string(report.errors.size()) +
                           " malformed prediction(s):");
    for (const auto& e : report.errors)
      res.messages.push_back("  " + e.question_id + ": " + e.message);
    res.exit_code = kExitErrors;
  }
  try {
    if (report_path.has_parent_path())
      fs::create_directories(report_path.parent_path());
    WriteFileAtomic(report_path, ReportToJson(report).dump(2) + "\n");
    res.outputs.push_back(report_path);
  } catch (const std::exception& e) {
    res.exit_code = kExitFatal;
    res.messages.push_back("error: " + report_path.string() + ": " + e.what());
  }
  res.counts["missing"] = report.n_missing;
  res.counts["unknown"] = static_cast<long long>(report.unknown_question_ids.size());
  res.counts["errors"] = static_cast<long long>(report.errors.size());
  return res;
}

CommandResult RunSynth(const PipelineConfig& cfg, synth::CorpusOptions opts) {
  CommandResult res;
  opts.seed = cfg.seed;
  opts.scene.num_classes = cfg.vocab.size();
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    res.exit_code = kExitFatal;
    res.messages.push_back("error: cannot create " + cfg.out_dir.string() +
                           ": " + ec.message());
    return res;
  }
  res.outputs = synth::WriteCorpus(cfg.out_dir, opts);
  res.counts["recordings"] = static_cast<long long>(res.outputs.size());
  res.counts["clips"] =
      static_cast<long long>(opts.recordings) * opts.clips_per_recording;
  res.messages.push_back("synth: " + std::to_string(res.outputs.size()) +
                         " recordings x " +
                         std::to_string(opts.clips_per_recording) +
                         " clips (seed " + std::to_string(opts.seed) + ") -> " +
                         cfg.out_dir.string());
  return res;
}

CommandResult RunLossCheck(const loss::SelfCheckOptions& opts) {
  CommandResult res;
  const auto outcomes = loss::RunSelfCheck(opts);
  std::size_t width = 5;
  for (const auto& o : outcomes) width = std::max(width, o.name.size());
  std::ostringstream table;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-6s  %s\n", static_cast<int>(width),
                "check", "result", "detail");
  table << buf;
  int failed = 0;
  for (const auto& o : outcomes) {
    std::snprintf(buf, sizeof buf, "%-*s  %-6s  ", static_cast<int>(width),
                  o.name.c_str(), o.passed ? "PASS" : "FAIL");
    table << buf << o.detail << "\n";
    if (!o.passed) ++failed;
  }
  table << (failed == 0 ? "all " + std::to_string(outcomes.size()) + " checks passed"
                        : std::to_string(failed) + " check(s) FAILED");
  res.messages.push_back(table.str());
  res.counts["checks"] = static_cast<long long>(outcomes.size());
  res.counts["failed"] = failed;
  res.exit_code = failed == 0 ? kExitOk : kExitErrors;
  return res;
}

}  // namespace seldqa
