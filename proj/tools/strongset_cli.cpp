/*
 * Copyright 2026 The strongset Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// strongset: command-line front end.
//
//   strongset ingest        --strong a.tsv --weak b.csv --out store/
//   strongset frame         store/ --out framed/
//   strongset eval          scores.csv framed/framed.tsv --out report/
//   strongset analyze       weak_store/ strong_store/ --out tables/
//   strongset build-subsets weak_store/ strong_store/ --out subsets/
//   strongset mix-manifest  --weak-manifest w.csv --strong-manifest s.tsv --mu 0.8
//
// Exit codes: 0 success, 2 validation error, 3 parse error, 4 I/O error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "strongset/analysis.hpp"
#include "strongset/config.hpp"
#include "strongset/corpus.hpp"
#include "strongset/error.hpp"
#include "strongset/framing.hpp"
#include "strongset/metrics.hpp"
#include "strongset/mixing.hpp"
#include "strongset/ontology.hpp"

namespace fs = std::filesystem;
using namespace strongset;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitParse = 3;
constexpr int kExitIo = 4;

constexpr const char* kWeakFile = "weak.csv";
constexpr const char* kStrongFile = "strong.tsv";
constexpr const char* kStatsFile = "stats.json";

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string out_dir = ".";
  bool no_timestamp = false;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("failed writing " + path.string());
}

// Re-throws parse and validation errors with the file name in front.
template <typename Fn>
auto WithFileContext(const fs::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

Corpus LoadWeak(const fs::path& path) {
  const std::string text = ReadFile(path);
  return WithFileContext(path, [&] { return ParseWeakCsv(text); });
}

Corpus LoadStrong(const fs::path& path) {
  const std::string text = ReadFile(path);
  return WithFileContext(path, [&] { return ParseStrongTsv(text); });
}

void RequireStore(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("corpus store " + dir.string() + " does not exist");
  }
}

std::optional<Corpus> LoadStoreWeak(const fs::path& dir) {
  RequireStore(dir);
  const fs::path p = dir / kWeakFile;
  if (!fs::exists(p)) return std::nullopt;
  return LoadWeak(p);
}

std::optional<Corpus> LoadStoreStrong(const fs::path& dir) {
  RequireStore(dir);
  const fs::path p = dir / kStrongFile;
  if (!fs::exists(p)) return std::nullopt;
  return LoadStrong(p);
}

// A store's labels as one corpus: strong labels when present, weak ones
// otherwise.
Corpus LoadStoreLabels(const fs::path& dir, bool prefer_strong) {
  auto strong = LoadStoreStrong(dir);
  auto weak = LoadStoreWeak(dir);
  if (prefer_strong && strong) return *strong;
  if (weak) return *weak;
  if (strong) return *strong;
  throw IoError("corpus store " + dir.string() + " holds no label files");
}

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json StatsJson(const CorpusStats& s) {
  nlohmann::ordered_json j;
  j["clips"] = s.num_clips;
  j["weak_rows"] = s.num_weak_rows;
  j["segments"] = s.num_segments;
  j["positive_instances"] = s.positive_instances;
  j["negative_instances"] = s.negative_instances;
  j["mean_classes_per_clip"] = s.mean_classes_per_clip;
  j["classes_with_positives"] = s.positive_clips_per_class.size();
  j["mean_positive_clips_per_class"] = s.mean_positive_clips_per_class;
  j["median_positive_clips_per_class"] = s.median_positive_clips_per_class;
  j["classes_with_negatives"] = s.negative_clips_per_class.size();
  j["mean_negative_clips_per_class"] = s.mean_negative_clips_per_class;
  j["median_negative_clips_per_class"] = s.median_negative_clips_per_class;
  j["warnings"] = {{"duplicate_labels", s.counters.duplicate_labels},
                   {"clamped_segments", s.counters.clamped_segments},
                   {"rejected_segments", s.counters.rejected_segments},
                   {"dropped_negatives", s.counters.dropped_negatives}};
  j["positive_clips_per_class"] = s.positive_clips_per_class;
  j["negative_clips_per_class"] = s.negative_clips_per_class;
  return j;
}

// ---------------------------------------------------------------------------

struct IngestOptions {
  std::vector<std::string> weak_files;
  std::vector<std::string> strong_files;
  std::string ontology;
  bool collapse_music = false;
  bool smear = false;
};

int RunIngest(const GlobalOptions& g, const ToolkitConfig& cfg,
              const IngestOptions& o) {
  std::optional<Ontology> ontology;
  if (!o.ontology.empty()) {
    const std::string text = ReadFile(o.ontology);
    ontology = WithFileContext(o.ontology, [&] { return LoadOntology(text); });
  }
  if ((o.collapse_music || o.smear) && !ontology) {
    throw ValidationError("--collapse-music and --smear need --ontology");
  }

  const auto transform = [&](Corpus c) {
    if (o.collapse_music) {
      c = MapLabels(c, [&](const ClassId& id) {
        return ontology->contains(id)
                   ? CollapseMusic({id}, *ontology, cfg.music_id)
                   : ClassSet{id};
      });
    }
    if (o.smear) {
      c = MapLabels(c, [&](const ClassId& id) {
        return ontology->contains(id) ? SmearLabels({id}, *ontology)
                                      : ClassSet{id};
      });
    }
    return c;
  };

  const fs::path out(g.out_dir);
  nlohmann::ordered_json stats;
  stats["schema"] = 1;
  if (!g.no_timestamp) stats["generated_at"] = Timestamp();

  std::size_t total_clips = 0;
  if (!o.weak_files.empty()) {
    std::vector<Corpus> parts;
    for (const auto& f : o.weak_files) parts.push_back(LoadWeak(f));
    const Corpus weak = transform(MergeCorpora(parts));
    WriteFile(out / kWeakFile, WriteWeakCsv(weak));
    stats["weak"] = StatsJson(ComputeStats(weak));
    total_clips += weak.clips.size();
  }
  if (!o.strong_files.empty()) {
    std::vector<Corpus> parts;
    for (const auto& f : o.strong_files) parts.push_back(LoadStrong(f));
    const Corpus strong = transform(MergeCorpora(parts));
    WriteFile(out / kStrongFile, WriteStrongTsv(strong));
    stats["strong"] = StatsJson(ComputeStats(strong));
    total_clips += strong.clips.size();
  }
  if (o.weak_files.empty() && o.strong_files.empty()) {
    throw ValidationError("ingest needs at least one --weak or --strong file");
  }
  WriteFile(out / kStatsFile, stats.dump(2) + "\n");

  if (total_clips == 0) {
    std::cerr << "warning: no clips found in the inputs\n";
  }
  for (const char* side : {"weak", "strong"}) {
    if (!stats.contains(side)) continue;
    std::cerr << side << ": " << stats[side]["clips"].get<std::size_t>()
              << " clips, "
              << stats[side]["positive_instances"].get<std::size_t>()
              << " positive class/clip instances\n";
  }
  return 0;
}

struct FrameOptions {
  std::string store;
  bool no_comp_neg = false;
  bool diffuse = false;
};

int RunFrame(const GlobalOptions& g, const ToolkitConfig& cfg,
             const FrameOptions& o) {
  auto strong = LoadStoreStrong(o.store);
  if (!strong) {
    throw IoError("corpus store " + o.store + " has no " + kStrongFile);
  }
  const auto negatives = LoadStoreWeak(o.store);
  const Corpus labels = o.diffuse ? BuildDiffuse(*strong) : *strong;

  FramingOptions options;
  options.complementary_negatives = !o.no_comp_neg;
  FramingReport report;
  const auto framed = FrameCorpus(labels, negatives ? &*negatives : nullptr,
                                  cfg.framing, options, &report);
  WriteFile(fs::path(g.out_dir) / "framed.tsv", WriteFramedTsv(framed));
  std::cerr << "framed " << report.clips << " clips / " << report.frames
            << " frames: " << report.positive << " POS, "
            << report.complementary_negative << " COMP_NEG, "
            << report.explicit_negative << " EXP_NEG, " << report.conflicts
            << " negative/positive conflicts\n";
  return 0;
}

struct EvalOptions {
  std::string scores;
  std::string labels;
  std::string negatives;
  std::string eval_kind = "strong";
};

int RunEval(const GlobalOptions& g, const ToolkitConfig& cfg,
            const EvalOptions& o) {
  EvalConfig ec;
  ec.kind = ParseEvalKind(o.eval_kind);
  ec.pooling =
      o.negatives.empty() ? cfg.pooling : ParseNegativePooling(o.negatives);
  ec.auc_clamp = cfg.auc_clamp;

  const std::string score_text = ReadFile(o.scores);
  const ScoreTable scores =
      WithFileContext(o.scores, [&] { return ParseScoreCsv(score_text); });
  const std::string label_text = ReadFile(o.labels);
  const LabelTable labels = WithFileContext(o.labels, [&] {
    return ec.kind == EvalKind::kStrong
               ? ParseFramedTsv(label_text)
               : LabelsFromWeak(ParseWeakCsv(label_text));
  });

  const EvalReport report = Evaluate(scores, labels, ec);
  WriteFile(fs::path(g.out_dir) / "report.json",
            ReportToJson(report, g.no_timestamp ? "" : Timestamp()));
  std::cerr << "d' (macro) " << report.dprime_macro << ", lwlrap "
            << (report.lwlrap ? std::to_string(*report.lwlrap) : "n/a")
            << ", " << report.missing_scores << " missing scores, "
            << report.excluded.size() << " excluded classes\n";
  return 0;
}

struct AnalyzeOptions {
  std::string weak_store;
  std::string strong_store;
  std::size_t top_k = 10;
  std::size_t min_count = 1;
  std::string ontology;
  std::vector<std::string> conditions;
};

int RunAnalyze(const GlobalOptions& g, const ToolkitConfig&,
               const AnalyzeOptions& o) {
  const Corpus weak = LoadStoreLabels(o.weak_store, false);
  const Corpus strong = LoadStoreLabels(o.strong_store, true);
  std::optional<Ontology> ontology;
  std::vector<ClassId> all_classes;
  if (!o.ontology.empty()) {
    const std::string text = ReadFile(o.ontology);
    ontology = WithFileContext(o.ontology, [&] { return LoadOntology(text); });
    for (const auto& n : ontology->nodes()) all_classes.push_back(n.id);
  }
  const Ontology* names = ontology ? &*ontology : nullptr;
  const fs::path out(g.out_dir);

  WriteFile(out / "priors_scatter.csv",
            WriteScatterCsv(PriorsScatter(weak, strong, all_classes), names));

  const JoinedPresence joined = JoinCorpora(weak, strong);
  WriteFile(out / "odds_weak_to_strong.csv",
            WriteOddsCsv(TopOddsRatios(joined, LabelSide::kWeak, o.top_k,
                                       o.min_count, o.conditions),
                         names));
  WriteFile(out / "odds_strong_to_weak.csv",
            WriteOddsCsv(TopOddsRatios(joined, LabelSide::kStrong, o.top_k,
                                       o.min_count, o.conditions),
                         names));
  std::size_t weak_pos = 0;
  std::size_t strong_pos = 0;
  for (std::size_t i = 0; i < joined.clips.size(); ++i) {
    weak_pos += joined.weak[i].size();
    strong_pos += joined.strong[i].size();
  }
  std::cerr << joined.clips.size() << " shared clips; positive instances "
            << "weak " << weak_pos << ", strong " << strong_pos << "\n";
  return 0;
}

struct SubsetOptions {
  std::string weak_store;
  std::string strong_store;
  std::size_t select_per_class = 0;
};

int RunBuildSubsets(const GlobalOptions& g, const ToolkitConfig&,
                    const SubsetOptions& o) {
  const auto weak = LoadStoreWeak(o.weak_store);
  const auto strong = LoadStoreStrong(o.strong_store);
  if (!weak) throw IoError(o.weak_store + " has no " + kWeakFile);
  if (!strong) throw IoError(o.strong_store + " has no " + kStrongFile);
  const fs::path out(g.out_dir);

  const std::set<ClipId> strong_clips(strong->clips.begin(),
                                      strong->clips.end());
  const Corpus weak_subset = RestrictToClips(*weak, strong_clips);
  if (weak_subset.clips.empty()) {
    throw ValidationError("weak and strong stores share no clips");
  }
  std::vector<std::string> missing;
  for (const ClipId& c : strong->clips) {
    if (weak->FindClip(c) == nullptr) missing.push_back(c.SegmentId());
  }

  WriteFile(out / "weak_subset.csv", WriteWeakCsv(weak_subset));
  WriteFile(out / "strong_subset.tsv", WriteStrongTsv(*strong));
  WriteFile(out / "diffuse_subset.tsv", WriteStrongTsv(BuildDiffuse(*strong)));

  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  if (!g.no_timestamp) summary["generated_at"] = Timestamp();
  summary["strong_clips"] = strong->clips.size();
  summary["weak_subset_clips"] = weak_subset.clips.size();
  summary["missing_from_weak"] = missing;

  if (o.select_per_class > 0) {
    const auto selected =
        SelectBalancedSubset(*weak, o.select_per_class, g.seed);
    const Corpus sel = RestrictToClips(
        *weak, std::set<ClipId>(selected.begin(), selected.end()));
    WriteFile(out / "selected_clips.csv", WriteWeakCsv(sel));
    summary["selection"] = {{"target_per_class", o.select_per_class},
                            {"seed", g.seed},
                            {"clips", selected.size()}};
  }
  WriteFile(out / "subsets.json", summary.dump(2) + "\n");
  if (!missing.empty()) {
    std::cerr << "warning: " << missing.size()
              << " strong clips have no weak labels and are absent from the "
                 "weak subset\n";
  }
  return 0;
}

struct MixOptions {
  std::string weak_manifest;
  std::string strong_manifest;
  double mu = 0.0;
  std::uint64_t epoch = 0;
  std::optional<std::size_t> rows;
};

int RunMixManifest(const GlobalOptions& g, const ToolkitConfig& cfg,
                   const MixOptions& o) {
  const Corpus weak = LoadWeak(o.weak_manifest);
  const Corpus strong_like = LoadStrong(o.strong_manifest);
  MixSpec spec;
  spec.mu = o.mu;
  spec.seed = g.seed;
  spec.epoch = o.epoch;
  spec.rows = o.rows;
  spec.framing = cfg.framing;
  const Manifest m = MixManifest(weak, strong_like, spec);
  WriteFile(fs::path(g.out_dir) /
                ("manifest_epoch" + std::to_string(o.epoch) + ".tsv"),
            WriteManifestTsv(m, spec));
  std::cerr << m.rows.size() << " rows, realized strong-like fraction "
            << m.realized_fraction << "\n";
  return 0;
}

int ExitCodeFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kParse:
      return kExitParse;
    case ErrorKind::kIo:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong/weak audio event label toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_option("--config", g.config_path,
                 "key = value file: frame_dur, frame_fill_fraction, "
                 "label_fraction, auc_clamp, pooling, music_id");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--no-timestamp", g.no_timestamp,
               "Omit generated_at fields so outputs are byte-reproducible");

  IngestOptions ingest;
  auto* ingest_cmd =
      app.add_subcommand("ingest", "Validate label files into a corpus store");
  ingest_cmd->add_option("--weak", ingest.weak_files, "Weak segments CSV");
  ingest_cmd->add_option("--strong", ingest.strong_files, "Strong labels TSV");
  ingest_cmd->add_option("--ontology", ingest.ontology, "Ontology JSON");
  ingest_cmd->add_flag("--collapse-music", ingest.collapse_music,
                       "Fold music descendants into the music class");
  ingest_cmd->add_flag("--smear", ingest.smear,
                       "Add every ontology ancestor of each positive label");

  FrameOptions frame;
  auto* frame_cmd = app.add_subcommand(
      "frame", "Project a store onto 0.96 s frames (writes framed.tsv)");
  frame_cmd->add_option("store", frame.store, "Corpus store directory")
      ->required();
  frame_cmd->add_flag("--no-comp-neg", frame.no_comp_neg,
                      "Do not emit complementary negatives");
  frame_cmd->add_flag("--diffuse", frame.diffuse,
                      "Expand every strong label to the full clip first");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Score a classifier output file (writes report.json)");
  eval_cmd->add_option("scores", eval.scores, "Score CSV unit_id,class_id,score")
      ->required();
  eval_cmd->add_option("labels", eval.labels,
                       "Framed TSV (strong) or weak CSV (weak)")
      ->required();
  eval_cmd->add_option("--negatives", eval.negatives, "balanced or pooled")
      ->check(CLI::IsMember({"balanced", "pooled"}));
  eval_cmd->add_option("--eval-kind", eval.eval_kind, "weak or strong")
      ->check(CLI::IsMember({"weak", "strong"}))
      ->capture_default_str();

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand(
      "analyze",
      "Priors scatter and odds-ratio tables. Writes priors_scatter.csv "
      "(class_id,name,weak_prior,strong_prior,ratio) and "
      "odds_weak_to_strong.csv / odds_strong_to_weak.csv "
      "(condition_id,condition_name,outcome_id,outcome_name,a,b,c,d,"
      "odds_ratio)");
  analyze_cmd->add_option("weak_store", analyze.weak_store)->required();
  analyze_cmd->add_option("strong_store", analyze.strong_store)->required();
  analyze_cmd->add_option("--top-k", analyze.top_k, "Rows per condition class")
      ->capture_default_str();
  analyze_cmd->add_option("--min-count", analyze.min_count,
                          "Minimum co-occurring clips for an odds-ratio row")
      ->capture_default_str();
  analyze_cmd->add_option("--ontology", analyze.ontology,
                          "Ontology JSON for names and zero-prior rows");
  analyze_cmd->add_option("--condition", analyze.conditions,
                          "Restrict odds tables to these condition classes");

  SubsetOptions subsets;
  auto* subsets_cmd = app.add_subcommand(
      "build-subsets", "Weak/diffuse/strong subsets over the strong clip set");
  subsets_cmd->add_option("weak_store", subsets.weak_store)->required();
  subsets_cmd->add_option("strong_store", subsets.strong_store)->required();
  subsets_cmd->add_option("--select-per-class", subsets.select_per_class,
                          "Also write a class-balanced weak clip selection");

  MixOptions mix;
  std::size_t mix_rows = 0;
  auto* mix_cmd = app.add_subcommand(
      "mix-manifest", "Sample a weak/strong training manifest for one epoch");
  mix_cmd->add_option("--weak-manifest", mix.weak_manifest, "Weak CSV")
      ->required();
  mix_cmd->add_option("--strong-manifest", mix.strong_manifest,
                      "Strong or diffuse TSV")
      ->required();
  mix_cmd->add_option("--mu", mix.mu, "Probability of a strong-like row")
      ->required();
  mix_cmd->add_option("--epoch", mix.epoch)->capture_default_str();
  auto* rows_opt = mix_cmd->add_option("--rows", mix_rows,
                                       "Rows to emit (default: weak clips)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (rows_opt->count() > 0) mix.rows = mix_rows;

  try {
    ToolkitConfig cfg;
    if (!g.config_path.empty()) {
      const std::string text = ReadFile(g.config_path);
      cfg = WithFileContext(g.config_path, [&] { return ParseConfig(text); });
    }
    if (*ingest_cmd) return RunIngest(g, cfg, ingest);
    if (*frame_cmd) return RunFrame(g, cfg, frame);
    if (*eval_cmd) return RunEval(g, cfg, eval);
    if (*analyze_cmd) return RunAnalyze(g, cfg, analyze);
    if (*subsets_cmd) return RunBuildSubsets(g, cfg, subsets);
    if (*mix_cmd) return RunMixManifest(g, cfg, mix);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}
