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

#include "strongset/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "strongset/error.hpp"

namespace strongset {

double RocAuc(std::span<const WeightedSample> positives,
              std::span<const WeightedSample> negatives) {
  if (positives.empty() || negatives.empty()) {
    throw UndefinedError("AUC needs at least one positive and one negative");
  }
  struct Item {
    double score;
    double weight;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(positives.size() + negatives.size());
  double pos_total = 0.0;
  double neg_total = 0.0;
  for (const auto& s : positives) {
    items.push_back({s.score, s.weight, true});
    pos_total += s.weight;
  }
  for (const auto& s : negatives) {
    items.push_back({s.score, s.weight, false});
    neg_total += s.weight;
  }
  if (!(pos_total > 0.0) || !(neg_total > 0.0)) {
    throw UndefinedError("AUC needs positive total weight on both sides");
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.score < b.score; });

  // Walk tie groups in ascending score order. Each positive in a group beats
  // all negative weight seen so far and ties with the group's negatives.
  double neg_below = 0.0;
  double correct = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    double pos_group = 0.0;
    double neg_group = 0.0;
    while (j < items.size() && items[j].score == items[i].score) {
      (items[j].positive ? pos_group : neg_group) += items[j].weight;
      ++j;
    }
    correct += pos_group * (neg_below + 0.5 * neg_group);
    neg_below += neg_group;
    i = j;
  }
  return correct / (pos_total * neg_total);
}

double Probit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("probit is defined on (0, 1), got " + std::to_string(p));
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852854561 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) *
                      r + 0.24178072517745061177) * r +
                  1.27045825245236838258) * r + 3.64784832476320460504) * r +
                5.7694972214606914055) * r + 4.6303378461565452959) * r +
             1.42343711074968357734) /
            (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) *
                      r + 0.0151986665636164571966) * r +
                  0.14810397642748007459) * r + 0.68976733498510000455) * r +
                1.6763848301838038494) * r + 2.05319162663775882187) * r +
             1.0);
  } else {
    r -= 5.0;
    value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) *
                      r + 0.0012426609473880784386) * r +
                  0.026532189526576123093) * r + 0.29656057182850489123) * r +
                1.7848265399172913358) * r + 5.4637849111641143699) * r +
             6.6579046435011037772) /
            (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) *
                      r + 1.8463183175100546818e-5) * r +
                  7.868691311456132591e-4) * r + 0.0148753612908506148525) *
                    r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double DPrime(double auc, double clamp_eps) {
  if (std::isnan(auc) || auc < 0.0 || auc > 1.0) {
    throw DomainError("d' needs an AUC in [0, 1]");
  }
  const double clamped = std::clamp(auc, clamp_eps, 1.0 - clamp_eps);
  return std::sqrt(2.0) * Probit(clamped);
}

std::string_view ToString(NegativePooling mode) {
  return mode == NegativePooling::kBalanced ? "balanced" : "pooled";
}

NegativePooling ParseNegativePooling(std::string_view text) {
  if (text == "balanced") return NegativePooling::kBalanced;
  if (text == "pooled") return NegativePooling::kPooled;
  throw ValidationError("negative pooling must be 'balanced' or 'pooled', got '" +
                        std::string(text) + "'");
}

std::vector<WeightedSample> PoolNegatives(
    std::span<const WeightedSample> explicit_negatives,
    std::span<const WeightedSample> complementary_negatives,
    NegativePooling mode) {
  if (explicit_negatives.empty() && complementary_negatives.empty()) {
    throw UndefinedError("no negatives to pool");
  }
  std::vector<WeightedSample> out;
  out.reserve(explicit_negatives.size() + complementary_negatives.size());
  if (mode == NegativePooling::kPooled) {
    for (const auto& s : explicit_negatives) out.push_back({s.score, 1.0});
    for (const auto& s : complementary_negatives) out.push_back({s.score, 1.0});
    return out;
  }
  const bool both =
      !explicit_negatives.empty() && !complementary_negatives.empty();
  const double mass = both ? 0.5 : 1.0;
  for (const auto source : {explicit_negatives, complementary_negatives}) {
    const double w = mass / static_cast<double>(source.size());
    for (const auto& s : source) out.push_back({s.score, w});
  }
  return out;
}

LwlrapResult Lwlrap(std::span<const double> scores,
                    std::span<const std::uint8_t> truth,
                    std::size_t num_classes) {
  if (num_classes == 0 || scores.size() != truth.size() ||
      scores.size() % num_classes != 0) {
    throw ValidationError("lwlrap needs matching units x classes matrices");
  }
  const std::size_t num_units = scores.size() / num_classes;
  std::vector<double> precision_sum(num_classes, 0.0);
  std::vector<std::size_t> occurrences(num_classes, 0);

  for (std::size_t u = 0; u < num_units; ++u) {
    const auto row = scores.subspan(u * num_classes, num_classes);
    const auto hit = truth.subspan(u * num_classes, num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (!hit[c] || std::isnan(row[c])) continue;
      std::size_t above = 0;
      std::size_t positives_at_or_above = 0;
      for (std::size_t j = 0; j < num_classes; ++j) {
        if (std::isnan(row[j])) continue;
        if (row[j] > row[c]) ++above;
        if (hit[j] && row[j] >= row[c]) ++positives_at_or_above;
      }
      precision_sum[c] += static_cast<double>(positives_at_or_above) /
                          static_cast<double>(above + 1);
      ++occurrences[c];
    }
  }

  const std::size_t total =
      std::accumulate(occurrences.begin(), occurrences.end(), std::size_t{0});
  if (total == 0) {
    throw UndefinedError("lwlrap needs at least one scored positive label");
  }
  LwlrapResult out;
  out.occurrences = occurrences;
  out.per_class.assign(num_classes, std::numeric_limits<double>::quiet_NaN());
  out.class_weights.assign(num_classes, 0.0);
  double sum = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    sum += precision_sum[c];
    if (occurrences[c] == 0) continue;
    out.per_class[c] = precision_sum[c] / static_cast<double>(occurrences[c]);
    out.class_weights[c] =
        static_cast<double>(occurrences[c]) / static_cast<double>(total);
  }
  out.overall = sum / static_cast<double>(total);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string_view TrimField(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> Split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(TrimField(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    fn(TrimField(text.substr(0, nl)), ++line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string FrameUnitId(const ClipId& clip, std::size_t frame) {
  return clip.SegmentId() + ":" + std::to_string(frame);
}

ScoreTable ParseScoreCsv(std::string_view text) {
  ScoreTable table;
  bool first = true;
  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    const auto fields = Split(line, ',');
    if (first) {
      first = false;
      if (!fields.empty() && fields[0] == "unit_id") return;
    }
    if (fields.size() != 3) {
      throw ParseError("expected unit_id,class_id,score", line_no);
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError("empty unit or class id", line_no);
    }
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(
        fields[2].data(), fields[2].data() + fields[2].size(), score);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size() ||
        !std::isfinite(score)) {
      throw ParseError("score must be a finite number", line_no);
    }
    auto& row = table[std::string(fields[0])];
    if (!row.emplace(std::string(fields[1]), score).second) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": duplicate score for " + std::string(fields[0]) +
                            " / " + std::string(fields[1]));
    }
  });
  return table;
}

std::string WriteScoreCsv(const ScoreTable& scores) {
  std::ostringstream out;
  out << "unit_id,class_id,score\n";
  for (const auto& [unit, row] : scores) {
    for (const auto& [c, s] : row) {
      out << unit << ',' << c << ',' << FormatDouble(s) << '\n';
    }
  }
  return out.str();
}

LabelTable ParseFramedTsv(std::string_view text) {
  LabelTable table;
  bool header_seen = false;
  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    if (line.empty()) return;
    const auto fields = Split(line, '\t');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 4 && fields[0] == "segment_id" &&
          fields[1] == "frame_index" && fields[2] == "label" &&
          fields[3] == "polarity") {
        return;
      }
      throw ParseError("missing framed label header", line_no);
    }
    if (fields.size() != 4) {
      throw ParseError("expected 4 tab-separated fields", line_no);
    }
    std::size_t frame = 0;
    const auto [ptr, ec] = std::from_chars(
        fields[1].data(), fields[1].data() + fields[1].size(), frame);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
      throw ParseError("frame index must be a non-negative integer", line_no);
    }
    FramePolarity polarity;
    try {
      polarity = ParseFramePolarity(fields[3]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    const std::string unit =
        std::string(fields[0]) + ":" + std::to_string(frame);
    auto [it, inserted] =
        table[unit].emplace(std::string(fields[2]), polarity);
    if (!inserted && it->second != polarity) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": two polarities for " + unit + " / " +
                            std::string(fields[2]));
    }
  });
  return table;
}

LabelTable LabelsFromFramed(const std::vector<FrameLabelSet>& framed) {
  LabelTable table;
  for (const FrameLabelSet& set : framed) {
    for (const FrameLabel& e : set.entries) {
      table[FrameUnitId(set.clip, e.frame)][e.class_id] = e.polarity;
    }
  }
  return table;
}

LabelTable LabelsFromWeak(const Corpus& corpus) {
  LabelTable table;
  for (const WeakAnnotation& w : corpus.weak) {
    table[w.clip.SegmentId()][w.class_id] =
        w.polarity == Polarity::kPresent ? FramePolarity::kPositive
                                         : FramePolarity::kExplicitNegative;
  }
  for (const LabeledSegment& s : corpus.strong) {
    table[s.clip.SegmentId()][s.class_id] = FramePolarity::kPositive;
  }
  return table;
}

std::string_view ToString(EvalKind kind) {
  return kind == EvalKind::kWeak ? "weak" : "strong";
}

EvalKind ParseEvalKind(std::string_view text) {
  if (text == "weak") return EvalKind::kWeak;
  if (text == "strong") return EvalKind::kStrong;
  throw ValidationError("eval kind must be 'weak' or 'strong', got '" +
                        std::string(text) + "'");
}

EvalReport Evaluate(const ScoreTable& scores, const LabelTable& labels,
                    const EvalConfig& config) {
  EvalReport report;
  report.config = config;
  report.labeled_units = labels.size();

  struct Pools {
    std::vector<WeightedSample> pos, exp, comp;
  };
  std::map<ClassId, Pools> pools;

  for (const auto& [unit, classes] : labels) {
    const auto srow = scores.find(unit);
    if (srow != scores.end()) ++report.scored_units;
    for (const auto& [class_id, polarity] : classes) {
      ClassReport& cr = report.per_class[class_id];
      switch (polarity) {
        case FramePolarity::kPositive:
          ++cr.n_pos;
          break;
        case FramePolarity::kExplicitNegative:
          ++cr.n_exp_neg;
          break;
        case FramePolarity::kComplementaryNegative:
          ++cr.n_comp_neg;
          break;
      }
      const double* score = nullptr;
      if (srow != scores.end()) {
        const auto it = srow->second.find(class_id);
        if (it != srow->second.end()) score = &it->second;
      }
      if (score == nullptr) {
        ++cr.missing;
        ++report.missing_scores;
        continue;
      }
      Pools& p = pools[class_id];
      switch (polarity) {
        case FramePolarity::kPositive:
          p.pos.push_back({*score, 1.0});
          break;
        case FramePolarity::kExplicitNegative:
          p.exp.push_back({*score, 1.0});
          break;
        case FramePolarity::kComplementaryNegative:
          p.comp.push_back({*score, 1.0});
          break;
      }
    }
  }
  for (const auto& [unit, row] : scores) {
    if (!labels.contains(unit)) ++report.unresolved_scores;
  }
  if (report.scored_units == 0) {
    throw UndefinedError("no labeled unit has a score");
  }

  double dprime_sum = 0.0;
  double auc_sum = 0.0;
  std::size_t evaluable = 0;
  for (auto& [class_id, cr] : report.per_class) {
    const auto it = pools.find(class_id);
    if (it == pools.end() || it->second.pos.empty() ||
        (it->second.exp.empty() && it->second.comp.empty())) {
      report.excluded.push_back(class_id);
      continue;
    }
    const auto negatives =
        PoolNegatives(it->second.exp, it->second.comp, config.pooling);
    cr.auc = RocAuc(it->second.pos, negatives);
    cr.dprime = DPrime(cr.auc, config.auc_clamp);
    cr.evaluable = true;
    dprime_sum += cr.dprime;
    auc_sum += cr.auc;
    ++evaluable;
  }
  if (evaluable == 0) {
    throw UndefinedError("no class has both scored positives and negatives");
  }
  report.dprime_macro = dprime_sum / static_cast<double>(evaluable);
  report.auc_macro = auc_sum / static_cast<double>(evaluable);

  // lwlrap over units with a positive label, ranking every class that
  // appears in the score file.
  std::vector<ClassId> universe;
  {
    std::set<ClassId> all;
    for (const auto& [unit, row] : scores) {
      for (const auto& [c, s] : row) all.insert(c);
    }
    universe.assign(all.begin(), all.end());
  }
  std::map<ClassId, std::size_t> column;
  for (std::size_t i = 0; i < universe.size(); ++i) column[universe[i]] = i;
  std::vector<double> dense;
  std::vector<std::uint8_t> truth;
  for (const auto& [unit, classes] : labels) {
    const bool has_positive =
        std::any_of(classes.begin(), classes.end(), [](const auto& kv) {
          return kv.second == FramePolarity::kPositive;
        });
    const auto srow = scores.find(unit);
    if (!has_positive || srow == scores.end()) continue;
    const std::size_t base = dense.size();
    dense.resize(base + universe.size(),
                 std::numeric_limits<double>::quiet_NaN());
    truth.resize(base + universe.size(), 0);
    for (const auto& [c, s] : srow->second) dense[base + column[c]] = s;
    for (const auto& [c, polarity] : classes) {
      const auto col = column.find(c);
      if (polarity == FramePolarity::kPositive && col != column.end()) {
        truth[base + col->second] = 1;
      }
    }
  }
  if (!universe.empty() && !dense.empty()) {
    try {
      const LwlrapResult lw = Lwlrap(dense, truth, universe.size());
      report.lwlrap = lw.overall;
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if (lw.occurrences[i] == 0) continue;
        ClassReport& cr = report.per_class[universe[i]];
        cr.lwlrap = lw.per_class[i];
        cr.lwlrap_weight = lw.class_weights[i];
      }
    } catch (const UndefinedError&) {
      // No scored positives: leave lwlrap unset.
    }
  }
  return report;
}

std::string ReportToJson(const EvalReport& report,
                         const std::string& generated_at) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  if (!generated_at.empty()) j["generated_at"] = generated_at;
  j["eval_kind"] = ToString(report.config.kind);
  j["negatives"] = ToString(report.config.pooling);
  j["auc_clamp"] = report.config.auc_clamp;
  j["aggregation"] = "unweighted_macro";

  nlohmann::ordered_json macro;
  macro["dprime"] = report.dprime_macro;
  macro["auc"] = report.auc_macro;
  macro["lwlrap"] = report.lwlrap ? nlohmann::ordered_json(*report.lwlrap)
                                  : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  std::size_t evaluable = 0;
  for (const auto& [c, cr] : report.per_class) {
    if (cr.lwlrap) weights[c] = cr.lwlrap_weight;
    if (cr.evaluable) ++evaluable;
  }
  macro["lwlrap_class_weights"] = std::move(weights);
  macro["evaluable_classes"] = evaluable;
  j["macro"] = std::move(macro);

  nlohmann::ordered_json counts;
  counts["labeled_units"] = report.labeled_units;
  counts["scored_units"] = report.scored_units;
  counts["missing_scores"] = report.missing_scores;
  counts["unresolved_scores"] = report.unresolved_scores;
  j["counts"] = std::move(counts);

  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (const auto& [c, cr] : report.per_class) {
    nlohmann::ordered_json e;
    e["n_pos"] = cr.n_pos;
    e["n_exp_neg"] = cr.n_exp_neg;
    e["n_comp_neg"] = cr.n_comp_neg;
    e["missing"] = cr.missing;
    e["evaluable"] = cr.evaluable;
    if (cr.evaluable) {
      e["auc"] = cr.auc;
      e["dprime"] = cr.dprime;
    }
    if (cr.lwlrap) e["lwlrap"] = *cr.lwlrap;
    per_class[c] = std::move(e);
  }
  j["per_class"] = std::move(per_class);
  j["excluded"] = report.excluded;
  return j.dump(2) + "\n";
}

}  // namespace strongset
