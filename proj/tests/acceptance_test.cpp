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

// Acceptance suite. Prints one line per criterion:
//   PASS|FAIL|SKIP  <criterion>  <detail>
// and exits non-zero when any criterion fails. Criteria that need released
// label files read their paths from the environment and SKIP otherwise:
//   STRONGSET_STRONG_TRAIN  strong train TSV
//   STRONGSET_STRONG_EVAL   strong eval TSV
//   STRONGSET_WEAK_TRAIN    weak segments CSV(s), ':'-separated

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "oracles.hpp"
#include "strongset/analysis.hpp"
#include "strongset/corpus.hpp"
#include "strongset/framing.hpp"
#include "strongset/metrics.hpp"
#include "strongset/mixing.hpp"

namespace strongset {
namespace {

using clitest::ReadText;
using clitest::RunCli;
using clitest::TempDir;
using clitest::WriteText;
using std::chrono::milliseconds;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

Outcome Pass(std::string detail) { return {Status::kPass, std::move(detail)}; }
Outcome Fail(std::string detail) { return {Status::kFail, std::move(detail)}; }
Outcome Skip(std::string detail) { return {Status::kSkip, std::move(detail)}; }

std::string Fmt(double v, int digits = 6) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

double SecondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome AucOracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> size(1, 50);
  std::uniform_int_distribution<int> level(0, 9);
  std::uniform_real_distribution<double> weight(1e-3, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<WeightedSample> pos;
    std::vector<WeightedSample> neg;
    std::vector<oracle::Sample> opos;
    std::vector<oracle::Sample> oneg;
    for (int i = size(rng); i > 0; --i) {
      const double s = level(rng) / 9.0;
      const double w = weight(rng);
      pos.push_back({s, w});
      opos.push_back({s, w});
    }
    for (int i = size(rng); i > 0; --i) {
      const double s = level(rng) / 9.0 - 0.2;
      const double w = weight(rng);
      neg.push_back({s, w});
      oneg.push_back({s, w});
    }
    worst = std::max(worst, std::abs(RocAuc(pos, neg) - oracle::BruteForceAuc(opos, oneg)));
  }
  const double secs = SecondsSince(t0);
  const std::string detail = "max |diff| " + Fmt(worst) + ", " + Fmt(secs, 3) + " s";
  return worst <= 1e-12 && secs < 5.0 ? Pass(detail) : Fail(detail);
}

Outcome GaussianDPrime() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  for (const double d : {1.13, 1.39}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::mt19937_64 rng(seed * 7919 + static_cast<std::uint64_t>(d * 100));
      std::normal_distribution<double> noise(0.0, 1.0);
      std::vector<WeightedSample> pos(20000);
      std::vector<WeightedSample> neg(20000);
      for (auto& s : pos) s = {d + noise(rng), 1.0};
      for (auto& s : neg) s = {noise(rng), 1.0};
      sum += DPrime(RocAuc(pos, neg));
    }
    const double mean = sum / 5;
    ok = ok && std::abs(mean - d) <= 0.05;
    detail += "d=" + Fmt(d) + " -> " + Fmt(mean, 5) + "; ";
  }
  const double secs = SecondsSince(t0);
  detail += Fmt(secs, 3) + " s";
  return ok && secs < 10.0 ? Pass(detail) : Fail(detail);
}

Outcome LwlrapSuite() {
  const double perfect = Lwlrap(std::vector<double>{0.9, 0.8, 0.1, 0.3, 0.2, 0.7},
                                std::vector<std::uint8_t>{1, 1, 0, 0, 0, 1}, 3)
                             .overall;
  const double fixture = Lwlrap(std::vector<double>{0.9, 0.5, 0.1},
                                std::vector<std::uint8_t>{1, 0, 1}, 3)
                             .overall;
  bool last_ok = true;
  for (std::size_t c = 2; c <= 64; ++c) {
    std::vector<double> scores(c);
    std::vector<std::uint8_t> truth(c, 0);
    for (std::size_t i = 0; i < c; ++i) scores[i] = static_cast<double>(c - i);
    truth[c - 1] = 1;
    last_ok = last_ok && Lwlrap(scores, truth, c).overall == 1.0 / static_cast<double>(c);
  }
  const bool ok = perfect == 1.0 && std::abs(fixture - 5.0 / 6.0) <= 1e-12 && last_ok;
  return (ok ? Pass : Fail)("perfect " + Fmt(perfect, 17) + ", fixture " + Fmt(fixture, 17) +
                            ", last-of-C exact for C=2..64: " + (last_ok ? "yes" : "no"));
}

struct SyntheticClip {
  ClipView view;
  std::map<ClassId, oracle::Timeline> timelines;
};

SyntheticClip RandomClip(std::mt19937& rng) {
  SyntheticClip out;
  const std::int64_t clip_ms = rng() % 5 == 0 ? 300 + rng() % 9700 : 10000;
  out.view.clip = {"syn", Micros{0}, milliseconds(clip_ms)};
  const int classes = 1 + static_cast<int>(rng() % 5);
  for (int c = 0; c < classes; ++c) {
    const ClassId id = "/m/" + std::to_string(c);
    auto& tl = out.timelines.emplace(id, oracle::Timeline(clip_ms)).first->second;
    std::vector<Interval> spans;
    for (int n = 1 + static_cast<int>(rng() % 4); n > 0; --n) {
      const std::int64_t a = rng() % (clip_ms - 1);
      const std::int64_t b = std::min<std::int64_t>(clip_ms, a + 1 + rng() % 3000);
      tl.Mark(a, b);
      spans.push_back({milliseconds(a), milliseconds(b)});
    }
    out.view.segments[id] = MergeIntervals(spans);
  }
  return out;
}

Outcome FramingSuite() {
  std::mt19937 rng(1234);
  std::size_t partition_bad = 0;
  std::size_t oracle_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const SyntheticClip clip = RandomClip(rng);
    const FrameGrid grid = MakeGrid(clip.view.clip.duration());
    const FrameLabelSet set = FrameClip(clip.view);

    std::map<ClassId, std::vector<int>> cover;
    std::map<ClassId, std::vector<bool>> positive;
    for (const auto& e : set.entries) {
      auto& v = cover[e.class_id];
      v.resize(set.num_frames, 0);
      ++v[e.frame];
      auto& p = positive[e.class_id];
      p.resize(set.num_frames, false);
      if (e.polarity == FramePolarity::kPositive) p[e.frame] = true;
    }
    for (const auto& [id, counts] : cover) {
      for (const int n : counts) partition_bad += n == 1 ? 0 : 1;
    }
    for (const auto& [id, tl] : clip.timelines) {
      for (std::size_t k = 0; k < grid.num_frames; ++k) {
        const Interval f = grid.Frame(k);
        const std::int64_t a = f.start.count() / 1000;
        const std::int64_t b = f.end.count() / 1000;
        const bool is_pos = positive.contains(id) && positive[id][k];
        if (Overlap(f, clip.view.segments.at(id)) != milliseconds(tl.Count(a, b)) ||
            is_pos != oracle::TimelineFramePositive(tl, a, b)) {
          ++oracle_bad;
        }
      }
    }
  }

  ClipView short_label;
  short_label.clip = {"short", Micros{0}, SecondsToMicros(10)};
  short_label.segments["/m/x"] = {{SecondsToMicros(0.5), SecondsToMicros(0.9)}};
  const FrameLabelSet s = FrameClip(short_label);
  const bool short_ok = !s.entries.empty() && s.entries.front().frame == 0 &&
                        s.entries.front().polarity == FramePolarity::kPositive;

  ClipView single = short_label;
  single.segments["/m/x"] = {{SecondsToMicros(2.88), SecondsToMicros(3.84)}};
  const FrameLabelSet one = FrameClip(single);
  std::size_t pos = 0;
  std::size_t comp = 0;
  for (const auto& e : one.entries) {
    pos += e.polarity == FramePolarity::kPositive ? 1 : 0;
    comp += e.polarity == FramePolarity::kComplementaryNegative ? 1 : 0;
  }
  const bool comp_ok = pos == 1 && comp == one.num_frames - 1;

  const bool ok = partition_bad == 0 && oracle_bad == 0 && short_ok && comp_ok;
  return (ok ? Pass : Fail)("(a) partition violations " + std::to_string(partition_bad) +
                            "; (b) timeline mismatches " + std::to_string(oracle_bad) +
                            "; (c) short segment frame 0 positive: " + (short_ok ? "yes" : "no") +
                            "; (d) comp-neg " + std::to_string(comp) + " of " +
                            std::to_string(one.num_frames) + " frames");
}

Outcome OddsRatioSuite() {
  const double basic = OddsRatio({10, 5, 2, 20});
  const double corrected = OddsRatio({3, 0, 1, 10});
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::uint64_t> cell(1, 1000);
  std::uniform_int_distribution<std::uint64_t> factor(2, 100);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Contingency2x2 t{cell(rng), cell(rng), cell(rng), cell(rng)};
    const std::uint64_t k = factor(rng);
    const double scaled = OddsRatio({k * t.a, k * t.b, k * t.c, k * t.d});
    worst = std::max(worst, std::abs(scaled / OddsRatio(t) - 1.0));
  }
  const bool ok = basic == 20.0 && corrected == 49.0 && worst <= 1e-12;
  return (ok ? Pass : Fail)("(10,5,2,20) -> " + Fmt(basic, 17) + ", (3,0,1,10) -> " +
                            Fmt(corrected, 17) + ", max relative scale drift " + Fmt(worst));
}

Corpus MixWeak() {
  std::string csv;
  for (int i = 0; i < 200; ++i) {
    csv += "w" + std::to_string(i) + ", 0.000, 10.000, \"/m/" + std::to_string(i % 7) + "\"\n";
  }
  return ParseWeakCsv(csv);
}

Corpus MixStrong() {
  std::string tsv = "segment_id\tstart_time_seconds\tend_time_seconds\tlabel\n";
  for (int i = 0; i < 100; ++i) {
    tsv += "s" + std::to_string(i) + "_0\t" + std::to_string(i % 9) + ".0\t" +
           std::to_string(i % 9 + 1) + ".0\t/m/" + std::to_string(i % 5) + "\n";
  }
  return ParseStrongTsv(tsv);
}

Outcome MuMixing() {
  const Corpus weak = MixWeak();
  const Corpus strong = MixStrong();
  constexpr std::size_t n = 100000;
  bool ok = true;
  std::string detail;
  for (const double mu : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const Manifest m = MixManifest(weak, strong, {.mu = mu, .seed = 2026, .rows = n});
    const double tol = 3.0 * std::sqrt(mu * (1 - mu) / static_cast<double>(n));
    const bool this_ok = (mu == 0.0 || mu == 1.0) ? m.realized_fraction == mu
                                                   : std::abs(m.realized_fraction - mu) <= tol;
    ok = ok && this_ok;
    detail += "mu " + Fmt(mu) + " -> " + Fmt(m.realized_fraction, 5) + "; ";
  }
  return (ok ? Pass : Fail)(detail);
}

Outcome Determinism() {
  TempDir dir("determinism");
  std::string tsv = "segment_id\tstart_time_seconds\tend_time_seconds\tlabel\n";
  std::string weak_csv;
  std::mt19937 rng(5);
  for (int i = 0; i < 25; ++i) {
    const std::string id = "d" + std::to_string(i);
    for (int k = 0; k < 3; ++k) {
      const int a = static_cast<int>(rng() % 9000);
      tsv += id + "_0\t" + Fmt(a / 1000.0) + "\t" + Fmt((a + 200 + rng() % 1500) / 1000.0) +
             "\t/m/" + std::to_string(rng() % 4) + "\n";
    }
    weak_csv += id + ", 0.000, 10.000, \"/m/9\", negative\n";
  }
  WriteText(dir / "strong.tsv", tsv);
  WriteText(dir / "weak.csv", weak_csv);

  // Scores for every framed unit, fixed before either run.
  const Corpus strong = ParseStrongTsv(tsv);
  const Corpus weak = ParseWeakCsv(weak_csv);
  std::string scores;
  std::mt19937_64 srng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& [unit, classes] : LabelsFromFramed(FrameCorpus(strong, &weak))) {
    for (const auto& [c, polarity] : classes) {
      const double bias = polarity == FramePolarity::kPositive ? 0.4 : 0.0;
      scores += unit + "," + c + "," + Fmt(bias + u(srng), 17) + "\n";
    }
  }
  WriteText(dir / "scores.csv", scores);

  const std::vector<std::string> outputs{"framed.tsv", "report.json", "manifest_epoch3.tsv"};
  std::vector<std::string> first;
  for (int run = 0; run < 2; ++run) {
    const std::string out = (dir / ("run" + std::to_string(run))).string();
    const std::string store = out + "/store";
    const std::vector<std::vector<std::string>> steps{
        {"--out", store, "--no-timestamp", "ingest", "--strong", (dir / "strong.tsv").string(),
         "--weak", (dir / "weak.csv").string()},
        {"--out", out, "--no-timestamp", "frame", store},
        {"--out", out, "--no-timestamp", "eval", (dir / "scores.csv").string(), out + "/framed.tsv"},
        {"--out", out, "--no-timestamp", "--seed", "99", "mix-manifest", "--weak-manifest",
         (dir / "weak.csv").string(), "--strong-manifest", (dir / "strong.tsv").string(), "--mu",
         "0.5", "--epoch", "3", "--rows", "2000"}};
    for (const auto& args : steps) {
      const auto r = RunCli(args, dir.path());
      if (r.exit_code != 0) return Fail("run " + std::to_string(run) + " " + args[3] + " exited " +
                                        std::to_string(r.exit_code) + ": " + r.stderr_text);
    }
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      const std::string bytes = ReadText(std::filesystem::path(out) / outputs[i]);
      if (bytes.empty()) return Fail(outputs[i] + " is empty");
      if (run == 0) {
        first.push_back(bytes);
      } else if (bytes != first[i]) {
        return Fail(outputs[i] + " differs between runs");
      }
    }
  }
  return Pass("framed.tsv, report.json and manifest_epoch3.tsv byte-identical across two runs");
}

// ---------------------------------------------------------------------------
// Released-data checks.

std::vector<std::string> EnvPaths(const char* name) {
  std::vector<std::string> out;
  const char* v = std::getenv(name);
  if (v == nullptr) return out;
  std::string s(v);
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(':', pos);
    const std::string part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!part.empty()) out.push_back(part);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

bool AllExist(const std::vector<std::string>& paths) {
  if (paths.empty()) return false;
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) return false;
  }
  return true;
}

Outcome ReleasedClipCounts() {
  const auto train = EnvPaths("STRONGSET_STRONG_TRAIN");
  const auto eval = EnvPaths("STRONGSET_STRONG_EVAL");
  if (!AllExist(train) && !AllExist(eval)) {
    return Skip("set STRONGSET_STRONG_TRAIN / STRONGSET_STRONG_EVAL to run");
  }
  TempDir dir("released_counts");
  std::string detail;
  bool ok = true;
  const auto check = [&](const std::vector<std::string>& files, const std::string& tag,
                         std::size_t expected) {
    if (!AllExist(files)) {
      detail += tag + " not supplied; ";
      return;
    }
    std::vector<std::string> args{"--out", (dir / tag).string(), "--no-timestamp", "ingest"};
    for (const auto& f : files) {
      args.push_back("--strong");
      args.push_back(f);
    }
    const auto r = RunCli(args, dir.path());
    if (r.exit_code != 0) {
      ok = false;
      detail += tag + " ingest failed: " + r.stderr_text;
      return;
    }
    const auto stats = nlohmann::json::parse(ReadText(dir / tag / "stats.json"));
    const std::size_t clips = stats["strong"]["clips"].get<std::size_t>();
    detail += tag + " " + std::to_string(clips) + " clips (expected " + std::to_string(expected) +
              (clips == expected ? ", match" : ", MISMATCH reported, not gated") + "); ";
  };
  check(train, "strong_train", 66924);
  check(eval, "strong_eval", 14470);
  return (ok ? Pass : Fail)(detail);
}

struct ReleasedPair {
  Corpus weak;
  Corpus strong;
};

std::optional<ReleasedPair> LoadReleasedPair() {
  const auto weak = EnvPaths("STRONGSET_WEAK_TRAIN");
  const auto strong = EnvPaths("STRONGSET_STRONG_TRAIN");
  if (!AllExist(weak) || !AllExist(strong)) return std::nullopt;
  std::vector<Corpus> w;
  for (const auto& p : weak) w.push_back(ParseWeakCsv(ReadText(p)));
  std::vector<Corpus> s;
  for (const auto& p : strong) s.push_back(ParseStrongTsv(ReadText(p)));
  return ReleasedPair{MergeCorpora(w), MergeCorpora(s)};
}

Outcome ReleasedInstanceCounts(const std::optional<ReleasedPair>& pair) {
  if (!pair) return Skip("set STRONGSET_WEAK_TRAIN and STRONGSET_STRONG_TRAIN to run");
  const JoinedPresence joined = JoinCorpora(pair->weak, pair->strong);
  std::size_t weak_pos = 0;
  std::size_t strong_pos = 0;
  for (std::size_t i = 0; i < joined.clips.size(); ++i) {
    weak_pos += joined.weak[i].size();
    strong_pos += joined.strong[i].size();
  }
  const bool ok = std::abs(static_cast<double>(strong_pos) / 217000.0 - 1.0) <= 0.02 &&
                  std::abs(static_cast<double>(weak_pos) / 147000.0 - 1.0) <= 0.02;
  return (ok ? Pass : Fail)("over " + std::to_string(joined.clips.size()) +
                            " shared clips: strong " + std::to_string(strong_pos) + ", weak " +
                            std::to_string(weak_pos) + " (targets 217k / 147k, +-2%)");
}

Outcome ReleasedSpeechOdds(const std::optional<ReleasedPair>& pair) {
  if (!pair) return Skip("set STRONGSET_WEAK_TRAIN and STRONGSET_STRONG_TRAIN to run");
  const OddsResult r = CrossLabelOdds(pair->weak, pair->strong, {LabelSide::kWeak, "/m/09x0r"},
                                      {LabelSide::kStrong, "/m/05zppz"});
  const bool ok = std::abs(r.odds_ratio - 12.1) <= 0.5;
  return (ok ? Pass : Fail)("weak Speech -> strong Male speech OR " + Fmt(r.odds_ratio, 4) +
                            " over " + std::to_string(r.shared_clips) +
                            " shared clips (target 12.1 +- 0.5)");
}

}  // namespace
}  // namespace strongset

int main() {
  using namespace strongset;
  std::optional<ReleasedPair> released;
  std::string released_error;
  try {
    released = LoadReleasedPair();
  } catch (const std::exception& e) {
    released_error = e.what();
  }
  const auto released_check = [&](Outcome (*fn)(const std::optional<ReleasedPair>&)) {
    return [&released, &released_error, fn] {
      if (!released_error.empty()) return Fail("loading released files: " + released_error);
      return fn(released);
    };
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"auc_oracle_equivalence", AucOracle},
      {"dprime_gaussian_recovery", GaussianDPrime},
      {"lwlrap_unit_suite", LwlrapSuite},
      {"framing_property_suite", FramingSuite},
      {"odds_ratio", OddsRatioSuite},
      {"mu_mixing", MuMixing},
      {"end_to_end_determinism", Determinism},
      {"released_clip_counts", ReleasedClipCounts},
      {"released_instance_counts", released_check(ReleasedInstanceCounts)},
      {"released_speech_male_speech_odds", released_check(ReleasedSpeechOdds)},
  };

  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = Fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    if (o.status == Status::kFail) ++failures;
    std::cout << tag << "  " << name << "  " << o.detail << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed or skipped" : std::to_string(failures) + " failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
