// src/pipeline/pipeline.cc

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

#include "rateinv/pipeline/pipeline.h"

#include <fstream>
#include <random>
#include <sstream>

#include "rateinv/backend/embeddings.h"
#include "rateinv/backend/scoring.h"
#include "rateinv/base/error.h"
#include "rateinv/base/hash.h"
#include "rateinv/base/log.h"
#include "rateinv/corpus/audio.h"
#include "rateinv/corpus/manifest.h"
#include "rateinv/corpus/synth.h"
#include "rateinv/corpus/trials.h"
#include "rateinv/feat/archive.h"
#include "rateinv/feat/front-end.h"
#include "rateinv/model/checkpoint.h"
#include "rateinv/trainer/trainer.h"
#include "rateinv/tsm/augment.h"

namespace rateinv {

namespace fs = std::filesystem;

const char *StageName(Stage s) {
  static const char *names[] = {"synth", "augment", "featurize", "train",
                                "extract", "score", "report"};
  return names[static_cast<int>(s)];
}

Stage ParseStage(const std::string &name) {
  for (int i = 0; i < kNumStages; ++i)
    if (name == StageName(static_cast<Stage>(i))) return static_cast<Stage>(i);
  Fail(ErrorKind::kArgument, "unknown stage '" + name + "'");
}

namespace {

std::vector<std::string> StageSections(Stage s) {
  switch (s) {
    case Stage::kSynth: return {"seed", "protocol", "corpus"};
    case Stage::kAugment: return {"augment", "eval"};
    case Stage::kFeaturize: return {"features"};
    case Stage::kTrain: return {"model", "loss", "train", "init_checkpoint"};
    case Stage::kExtract: return {};
    case Stage::kScore: return {"backend"};
    case Stage::kReport: return {"preset"};
  }
  return {};
}

struct Layout {
  fs::path root;
  fs::path Stamp(Stage s) const { return root / "stamps" / (std::string(StageName(s)) + ".stamp"); }
  fs::path Data(const std::string &name) const { return root / "data" / name; }
  fs::path Corpus() const { return root / "corpus"; }
  fs::path Trials() const { return root / "trials"; }
  fs::path Feats(const std::string &name) const { return root / "feats" / name; }
  fs::path Model(const std::string &name) const { return root / "model" / name; }
  fs::path Emb(const std::string &name) const { return root / "emb" / name; }
  fs::path Scores(const std::string &name) const { return root / "scores" / name; }
  fs::path Report(const std::string &name) const { return root / "report" / name; }
};

std::string ReadStamp(const fs::path &p) {
  std::ifstream is(p);
  std::string s;
  if (is) std::getline(is, s);
  return s;
}

void WriteText(const fs::path &p, const std::string &text) {
  fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) Fail(ErrorKind::kIo, "cannot write " + p.string());
  os << text;
  if (!os) Fail(ErrorKind::kIo, "error writing " + p.string());
}

int Threads(const ExperimentConfig &cfg, const RunOptions &opts) {
  return opts.deterministic ? 1 : cfg.threads;
}

// Trial columns: name and the selector pair.
struct Column {
  std::string name;
  RateSelector enroll, test;
};

std::vector<Column> TrialColumns(const ExperimentConfig &cfg) {
  std::vector<Column> cols;
  if (cfg.protocol == Protocol::kVoxceleb) {
    for (double a : cfg.eval_alphas)
      cols.push_back({AlphaColumnName(a), RateSelector::Alpha(1.0), RateSelector::Alpha(a)});
  } else {
    for (double r : cfg.corpus.test_rates) {
      std::string name = RateLabelName(RateLabelFromAlpha(r));
      name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
      for (const auto &c : cols)
        if (c.name == name) name += "_" + AlphaColumnName(r);
      cols.push_back({name, RateSelector::Alpha(r), RateSelector::Alpha(r)});
    }
  }
  return cols;
}

// ---------------------------------------------------------------- synth

std::string RateTag(double r) {
  return std::string(RateLabelName(RateLabelFromAlpha(r))) + (std::abs(r - 1.0) < 1e-9 ? "" : AlphaColumnName(r));
}

std::vector<UtteranceRecord> SynthSplit(const ExperimentConfig &cfg, const fs::path &dir,
                                        const std::string &prefix, int speakers, int utts,
                                        const std::vector<double> &rates) {
  const auto &c = cfg.corpus;
  std::vector<UtteranceRecord> records;
  for (int s = 0; s < speakers; ++s) {
    char spk[32];
    std::snprintf(spk, sizeof(spk), "%s%03d", prefix.c_str(), s);
    const uint64_t spk_seed = Fnv1a64(spk, cfg.seed);
    const SynthSpeakerProfile profile = MakeSpeakerProfile(spk_seed);
    std::mt19937_64 rng(spk_seed ^ 0x5bd1e995ull);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    fs::create_directories(dir / spk);
    for (double rate : rates) {
      for (int u = 0; u < utts; ++u) {
        const double dur = c.min_duration + (c.max_duration - c.min_duration) * unit(rng);
        const double jitter = 0.9 + 0.2 * unit(rng);
        const double syl = std::clamp(c.syllable_rate * rate * jitter, 1.0, 10.0);
        char utt[96];
        if (cfg.protocol == Protocol::kHimia)
          std::snprintf(utt, sizeof(utt), "%s_%s_u%02d", spk, RateTag(rate).c_str(), u);
        else
          std::snprintf(utt, sizeof(utt), "%s_u%02d", spk, u);
        const AudioClip clip = SynthUtterance(profile, dur, syl, Fnv1a64(utt, cfg.seed));
        UtteranceRecord r;
        r.utt_id = utt;
        r.speaker_id = spk;
        r.path = dir / spk / (r.utt_id + ".wav");
        r.alpha = cfg.protocol == Protocol::kHimia ? rate : 1.0;
        r.rate_label = RateLabelFromAlpha(r.alpha);
        SaveWav(r.path, clip);
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

std::vector<UtteranceRecord> ScanSplit(const std::string &dir) {
  ManifestScan scan = BuildManifest(dir);
  for (const auto &w : scan.warnings) RATEINV_WARN("{}", w);
  for (const auto &e : scan.errors) RATEINV_WARN("{}: {}", e.path.string(), e.message);
  if (scan.records.empty()) Fail(ErrorKind::kEmptyTrials, "no usable audio under " + dir);
  return scan.records;
}

void RunSynth(const ExperimentConfig &cfg, const Layout &L) {
  std::vector<UtteranceRecord> train, test;
  if (!cfg.corpus.train_dir.empty()) {
    train = ScanSplit(cfg.corpus.train_dir);
    test = ScanSplit(cfg.corpus.test_dir);
  } else {
    const std::vector<double> vox_rates{1.0};
    const bool himia = cfg.protocol == Protocol::kHimia;
    train = SynthSplit(cfg, L.Corpus() / "train", "tr", cfg.corpus.train_speakers,
                       cfg.corpus.train_utts, himia ? cfg.corpus.train_rates : vox_rates);
    test = SynthSplit(cfg, L.Corpus() / "test", "te", cfg.corpus.test_speakers,
                      cfg.corpus.test_utts, himia ? cfg.corpus.test_rates : vox_rates);
  }
  fs::create_directories(L.Data(""));
  WriteManifest(L.Data("train.tsv"), train);
  WriteManifest(L.Data("test.tsv"), test);
  RATEINV_LOG("synth: {} train and {} test utterances", train.size(), test.size());
}

// -------------------------------------------------------------- augment

void RunAugment(const ExperimentConfig &cfg, const Layout &L) {
  auto train = ReadManifest(L.Data("train.tsv"));
  auto test = ReadManifest(L.Data("test.tsv"));
  std::vector<UtteranceRecord> originals;
  for (const auto &r : train)
    if (r.rate_label == RateLabel::kNormal) originals.push_back(r);

  std::vector<UtteranceRecord> train_all = train;
  if (cfg.augment.plan != "none") {
    if (originals.empty()) Fail(ErrorKind::kConfig, "augmentation needs normal-rate training utterances");
    const AugmentationPlan plan = cfg.augment.plan == "voxceleb"
                                      ? PlanVoxcelebStyle(originals.size())
                                      : PlanUniform(cfg.augment.alphas, cfg.augment.fraction);
    AugmentResult res = AugmentCorpus(originals, plan, cfg.augment.tsm,
                                      Fnv1a64("augment-train", cfg.seed), L.Corpus() / "train_tsm");
    RATEINV_LOG("augment: {} originals -> {} added ({} planned), {} failures", originals.size(),
                res.added.size(), PlannedTotal(plan, originals.size()) - originals.size(),
                res.errors.size());
    train_all.insert(train_all.end(), res.added.begin(), res.added.end());
  }

  std::vector<UtteranceRecord> test_all = test;
  if (cfg.protocol == Protocol::kVoxceleb) {
    std::vector<UtteranceRecord> test_orig;
    for (const auto &r : test)
      if (r.rate_label == RateLabel::kNormal) test_orig.push_back(r);
    AugmentationPlan plan;
    for (double a : cfg.eval_alphas)
      if (std::abs(a - 1.0) > 1e-9) plan.entries.push_back({SnapAlpha(a), 1.0});
    if (!plan.entries.empty()) {
      AugmentResult res = AugmentCorpus(test_orig, plan, cfg.augment.tsm,
                                        Fnv1a64("augment-test", cfg.seed), L.Corpus() / "test_tsm");
      test_all.insert(test_all.end(), res.added.begin(), res.added.end());
    }
  }
  WriteManifest(L.Data("train_all.tsv"), train_all);
  WriteManifest(L.Data("test_all.tsv"), test_all);

  fs::create_directories(L.Trials());
  std::ostringstream cols;
  for (const auto &c : TrialColumns(cfg)) {
    const TrialList trials = MakeTrials(test_all, c.enroll, c.test);
    WriteTrials(L.Trials() / (c.name + ".trials"), trials);
    cols << c.name << '\n';
  }
  WriteText(L.Trials() / "columns.txt", cols.str());
}

// ------------------------------------------------------------ featurize

void FeaturizeList(const std::vector<UtteranceRecord> &records, const FrontEndOptions &opts,
                   const fs::path &ark, const fs::path &idx, std::ostream &skipped) {
  MfccComputer mfcc(opts.mfcc);
  FeatureArchiveWriter writer(ark, idx);
  for (const auto &r : records) {
    try {
      writer.Write(r.utt_id, ExtractFeatures(mfcc, LoadWav(r.path), r.utt_id, opts));
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::kTooShort && e.kind() != ErrorKind::kEmptyAfterVad) throw;
      RATEINV_WARN("featurize {}: {}", r.utt_id, e.what());
      skipped << r.utt_id << '\t' << e.what() << '\n';
    }
  }
  writer.Close();
}

void RunFeaturize(const ExperimentConfig &cfg, const Layout &L) {
  fs::create_directories(L.Feats(""));
  std::ofstream skipped(L.Feats("skipped.txt"));
  FeaturizeList(ReadManifest(L.Data("train_all.tsv")), cfg.features, L.Feats("train.ark"),
                L.Feats("train.idx"), skipped);
  FeaturizeList(ReadManifest(L.Data("test_all.tsv")), cfg.features, L.Feats("test.ark"),
                L.Feats("test.idx"), skipped);
}

// ---------------------------------------------------------------- train

TrainerOptions TrainerFromConfig(const ExperimentConfig &cfg, int threads) {
  TrainerOptions t = cfg.train;
  t.model.input_dim = cfg.features.mfcc.num_ceps;
  t.num_threads = threads;
  return t;
}

void RunTrain(const ExperimentConfig &cfg, const Layout &L, int threads) {
  const auto manifest = ReadManifest(L.Data("train_all.tsv"));
  const auto feats = ReadFeatureArchive(L.Feats("train.ark"), L.Feats("train.idx"));
  const TrainerOptions opts = TrainerFromConfig(cfg, threads);
  ModelConfig probe = opts.model;
  const TrainingSet data = BuildTrainingSet(manifest, feats, probe.ReceptiveField());
  std::optional<Checkpoint> init;
  if (!cfg.init_checkpoint.empty()) init = ReadCheckpoint(cfg.init_checkpoint);
  fs::create_directories(L.Model(""));
  std::ofstream log(L.Model("train.log"));
  log << "# step phase L_id L_rate L_cos total\n";
  const TrainResult res = RunTraining(data, opts, cfg.seed, &log, L.Model("final.ckpt").string(),
                                      init ? &init->params : nullptr);
  std::ostringstream probes;
  probes << "# phase first_step end_step L_cos_start L_cos_end total_start total_end\n";
  char buf[256];
  for (const auto &p : res.probes) {
    std::snprintf(buf, sizeof(buf), "%s\t%ld\t%ld\t%.17g\t%.17g\t%.17g\t%.17g\n", PhaseName(p.phase),
                  p.first_step, p.end_step, p.start.l_cos, p.end.l_cos, p.start.total, p.end.total);
    probes << buf;
  }
  WriteText(L.Model("probes.tsv"), probes.str());
  if (!res.log.empty())
    RATEINV_LOG("train: {} steps, last {}", res.log.size(), FormatMetrics(res.log.back()));
}

// -------------------------------------------------------------- extract

void RunExtract(const Layout &L, int threads) {
  const Checkpoint ckpt = ReadCheckpoint(L.Model("final.ckpt").string());
  fs::create_directories(L.Emb(""));
  std::ofstream skipped(L.Emb("skipped.txt"));
  for (const std::string split : {"train", "test"}) {
    const auto manifest = ReadManifest(L.Data(split + "_all.tsv"));
    const auto feats = ReadFeatureArchive(L.Feats(split + ".ark"), L.Feats(split + ".idx"));
    ExtractReport report;
    const EmbeddingSet set = ExtractEmbeddings(ckpt.params, manifest, feats, &report, threads);
    for (const auto &s : report.skipped) skipped << s << '\n';
    WriteEmbeddings(L.Emb(split + ".emb"), set);
  }
}

// ---------------------------------------------------------------- score

std::vector<std::string> ReadColumns(const Layout &L) {
  std::ifstream is(L.Trials() / "columns.txt");
  if (!is) Fail(ErrorKind::kMissingStage, "trial columns missing; rerun 'augment'");
  std::vector<std::string> cols;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) cols.push_back(line);
  return cols;
}

void RunScore(const ExperimentConfig &cfg, const Layout &L) {
  const auto train_manifest = ReadManifest(L.Data("train_all.tsv"));
  const EmbeddingSet train = ReadEmbeddings(L.Emb("train.emb"));
  const EmbeddingSet test = ReadEmbeddings(L.Emb("test.emb"));
  const TrialScorer scorer(cfg.backend, train, train_manifest);
  std::ostringstream eer;
  eer << "# preset " << cfg.preset << "\n# protocol "
      << (cfg.protocol == Protocol::kHimia ? "himia" : "voxceleb") << "\n";
  char buf[256];
  fs::create_directories(L.Scores(""));
  for (const auto &col : ReadColumns(L)) {
    const TrialList trials = ReadTrials(L.Trials() / (col + ".trials"));
    const auto scores = ScoreTrials(scorer, test, trials);
    WriteScores(L.Scores(col + ".scores"), scores);
    try {
      const EerResult r = EerFromScores(scores);
      std::snprintf(buf, sizeof(buf), "%s\t%.17g\t%.17g\t%zu\n", col.c_str(), r.eer, r.threshold,
                    scores.size());
    } catch (const Error &e) {
      RATEINV_WARN("score {}: {}", col, e.what());
      std::snprintf(buf, sizeof(buf), "%s\tnan\tnan\t%zu\n", col.c_str(), scores.size());
    }
    eer << buf;
  }
  WriteText(L.Scores("eer.tsv"), eer.str());
}

// --------------------------------------------------------------- report

void RunReport(const Layout &L) {
  const ReportTable table = BuildReport({L.root});
  WriteText(L.Report("report.txt"), FormatReportTable(table));
  WriteText(L.Report("report.svg"), RenderReportSvg(table));
}

}  // namespace

std::string ExpectedStamp(const ExperimentConfig &cfg, Stage stage) {
  uint64_t h = Fnv1a64("rateinv-stages-v1");
  for (int s = 0; s <= static_cast<int>(stage); ++s) {
    const Stage st = static_cast<Stage>(s);
    h = Fnv1a64(StageName(st), h);
    const auto names = StageSections(st);
    if (st == Stage::kReport) {
      h = Fnv1a64(cfg.preset, h);
    } else if (!names.empty()) {
      h = Fnv1a64(ConfigSections(cfg, names), h);
    }
  }
  return HexDigest(h);
}

StageOutcome RunStage(Stage stage, const ExperimentConfig &cfg, const fs::path &workdir,
                      const RunOptions &opts) {
  ValidateExperimentConfig(cfg);
  const Layout L{workdir};
  StageOutcome out;
  out.stage = stage;
  out.stamp = ExpectedStamp(cfg, stage);
  if (stage != Stage::kSynth) {
    const Stage prev = static_cast<Stage>(static_cast<int>(stage) - 1);
    const std::string have = ReadStamp(L.Stamp(prev));
    if (have.empty())
      Fail(ErrorKind::kMissingStage, std::string("stage '") + StageName(stage) + "' needs the outputs of '" +
                                         StageName(prev) + "'; run `rateinv " + StageName(prev) + "` first");
    if (have != ExpectedStamp(cfg, prev))
      Fail(ErrorKind::kMissingStage, std::string("outputs of '") + StageName(prev) +
                                         "' were made with a different config; rerun `rateinv " +
                                         StageName(prev) + "`");
  }
  if (!opts.force && ReadStamp(L.Stamp(stage)) == out.stamp) {
    RATEINV_LOG("{}: up to date, nothing to do", StageName(stage));
    out.skipped = true;
    return out;
  }
  fs::create_directories(workdir);
  WriteText(workdir / "config.yaml", DumpConfig(cfg));
  // Invalidate this stage and everything after it before touching outputs.
  for (int s = static_cast<int>(stage); s < kNumStages; ++s)
    fs::remove(L.Stamp(static_cast<Stage>(s)));
  RATEINV_LOG("{}: running", StageName(stage));
  const int threads = Threads(cfg, opts);
  switch (stage) {
    case Stage::kSynth: RunSynth(cfg, L); break;
    case Stage::kAugment: RunAugment(cfg, L); break;
    case Stage::kFeaturize: RunFeaturize(cfg, L); break;
    case Stage::kTrain: RunTrain(cfg, L, threads); break;
    case Stage::kExtract: RunExtract(L, threads); break;
    case Stage::kScore: RunScore(cfg, L); break;
    case Stage::kReport: RunReport(L); break;
  }
  WriteText(L.Stamp(stage), out.stamp + "\n");
  return out;
}

std::vector<StageOutcome> RunPipeline(const ExperimentConfig &cfg, const fs::path &workdir,
                                      const RunOptions &opts, Stage last) {
  std::vector<StageOutcome> outs;
  for (int s = 0; s <= static_cast<int>(last); ++s)
    outs.push_back(RunStage(static_cast<Stage>(s), cfg, workdir, opts));
  return outs;
}

ReportTable BuildReport(const std::vector<fs::path> &workdirs) {
  ReportTable table;
  bool himia = false;
  std::vector<std::map<std::string, std::optional<double>>> rows;
  for (const auto &dir : workdirs) {
    const fs::path file = dir / "scores" / "eer.tsv";
    std::ifstream is(file);
    if (!is)
      Fail(ErrorKind::kMissingStage, "no score outputs in " + dir.string() + "; run `rateinv score` first");
    std::string line, preset = dir.filename().string();
    std::map<std::string, std::optional<double>> row;
    while (std::getline(is, line)) {
      if (line.rfind("# preset ", 0) == 0) {
        preset = line.substr(9);
      } else if (line.rfind("# protocol ", 0) == 0) {
        himia = himia || line.substr(11) == "himia";
      } else if (!line.empty() && line[0] != '#') {
        std::istringstream ss(line);
        std::string col, value;
        ss >> col >> value;
        if (std::find(table.columns.begin(), table.columns.end(), col) == table.columns.end())
          table.columns.push_back(col);
        if (value == "nan") {
          table.errors.push_back(preset + " @ " + col + ": no EER (missing trial class)");
          row[col] = std::nullopt;
        } else {
          row[col] = std::stod(value);
        }
      }
    }
    table.systems.push_back(preset);
    rows.push_back(std::move(row));
  }
  table.title = himia ? "EER[%] per speaking-rate trial set" : "EER[%] per speaking-rate scale alpha";
  for (const auto &row : rows) {
    std::vector<std::optional<double>> cells;
    for (const auto &c : table.columns) {
      auto it = row.find(c);
      cells.push_back(it == row.end() ? std::nullopt : it->second);
    }
    table.eer.push_back(std::move(cells));
  }
  if (himia) AddAverageColumn(&table);
  return table;
}

}  // namespace rateinv
