// tools/rateinv.cc

// Copyright 2026  The rateinv Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line driver for the experiment stages.
//
//   rateinv [--config FILE] [--preset NAME] [--workdir DIR] [--seed N]
//           [--deterministic] [--force] [-v] <stage>
//   stages: synth augment featurize train extract score report run
//   rateinv report --compare DIR...   (one table row per work directory)
//
// Exit status: 0 ok, 1 usage or config error, 2 data error, 3 numerical
// failure.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "rateinv/base/error.h"
#include "rateinv/base/log.h"
#include "rateinv/kernels/kernels.h"
#include "rateinv/pipeline/config.h"
#include "rateinv/pipeline/pipeline.h"

namespace fs = std::filesystem;
using namespace rateinv;

int main(int argc, char **argv) {
  CLI::App app{"Speaking-rate-invariant speaker embedding toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, preset, workdir = "work";
  std::optional<uint64_t> seed;
  bool deterministic = false, force = false;
  int verbose = 1;
  app.add_option("--config", config_path, "experiment config (YAML)");
  app.add_option("--preset", preset, "preset used when no config file is given");
  app.add_option("--workdir", workdir, "work directory");
  app.add_option("--seed", seed, "overrides the config seed");
  app.add_flag("--deterministic", deterministic, "single-threaded, reproducible numerics");
  app.add_flag("--force", force, "rerun stages even when up to date");
  app.add_option("-v,--verbose", verbose, "0 warnings, 1 info, 2 debug");

  static const char *const kStageHelp[kNumStages] = {
      "synthesize or scan the corpus and write manifests",
      "time-stretch copies, evaluation sets and trial lists",
      "MFCC, energy VAD and sliding CMN feature archives",
      "adversarial embedding training",
      "identity embeddings for train and test utterances",
      "backend training, trial scoring and EER per column",
      "EER table and plot"};
  std::vector<std::string> compare;
  for (int s = 0; s < kNumStages; ++s) {
    auto *sub = app.add_subcommand(StageName(static_cast<Stage>(s)), kStageHelp[s]);
    if (static_cast<Stage>(s) == Stage::kReport)
      sub->add_option("--compare", compare, "work directories to tabulate side by side");
  }
  app.add_subcommand("run", "all stages in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    SetVerbosity(verbose);
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = LoadConfig(config_path);
      if (!preset.empty() && preset != cfg.preset)
        Fail(ErrorKind::kArgument, "--preset conflicts with the preset in " + config_path);
    } else {
      cfg = PresetConfig(preset.empty() ? "fd_al" : preset);
    }
    if (seed) cfg.seed = *seed;
    ValidateExperimentConfig(cfg);
    RunOptions opts;
    opts.deterministic = deterministic;
    opts.force = force;
    RATEINV_VLOG("kernels: {}", kernels::ActiveKernels().name);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "run") {
      RunPipeline(cfg, workdir, opts);
      std::fputs(FormatReportTable(BuildReport({workdir})).c_str(), stdout);
      return 0;
    }
    const Stage stage = ParseStage(name);
    if (stage == Stage::kReport && !compare.empty()) {
      std::vector<fs::path> dirs(compare.begin(), compare.end());
      const ReportTable table = BuildReport(dirs);
      std::fputs(FormatReportTable(table).c_str(), stdout);
      return 0;
    }
    RunStage(stage, cfg, workdir, opts);
    if (stage == Stage::kReport)
      std::fputs(FormatReportTable(BuildReport({workdir})).c_str(), stdout);
    return 0;
  } catch (const Error &e) {
    std::fprintf(stderr, "rateinv: %s error: %s\n", ErrorKindName(e.kind()), e.what());
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error &e) {
    std::fprintf(stderr, "rateinv: io error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "rateinv: %s\n", e.what());
    return 1;
  }
}
