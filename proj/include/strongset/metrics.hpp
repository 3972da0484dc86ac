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

#ifndef STRONGSET_METRICS_HPP_
#define STRONGSET_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "strongset/corpus.hpp"
#include "strongset/framing.hpp"

namespace strongset {

struct WeightedSample {
  double score = 0.0;
  double weight = 1.0;
};

// Weighted Mann-Whitney statistic: the weighted fraction of (positive,
// negative) pairs ranked correctly, ties counting one half. Computed from a
// single sort with tie groups, O(n log n).
// Throws UndefinedError if either side is empty or carries zero weight.
double RocAuc(std::span<const WeightedSample> positives,
              std::span<const WeightedSample> negatives);

// Inverse standard normal CDF (Wichura's AS 241, about 1e-16 relative).
// Throws DomainError unless 0 < p < 1.
double Probit(double p);

inline constexpr double kDefaultAucClamp = 1e-6;

// sqrt(2) * Probit(clamp(auc, eps, 1 - eps)). With the default clamp the
// result saturates at about +-6.72. Throws DomainError for NaN or auc outside
// [0, 1].
double DPrime(double auc, double clamp_eps = kDefaultAucClamp);

enum class NegativePooling {
  kBalanced,  // each non-empty source carries total weight 0.5 (1 if alone)
  kPooled,    // unit weights
};

std::string_view ToString(NegativePooling mode);
// "balanced" or "pooled"; throws ValidationError otherwise.
NegativePooling ParseNegativePooling(std::string_view text);

// Throws UndefinedError when both sources are empty.
std::vector<WeightedSample> PoolNegatives(
    std::span<const WeightedSample> explicit_negatives,
    std::span<const WeightedSample> complementary_negatives,
    NegativePooling mode);

// Label-weighted label-ranking average precision over a dense
// units x classes score matrix (row-major). NaN marks a missing score: that
// cell takes no part in the ranking, and a positive without a score is not an
// occurrence.
struct LwlrapResult {
  double overall = 0.0;
  std::vector<double> per_class;       // NaN for classes with no occurrence
  std::vector<double> class_weights;   // occurrences / total occurrences
  std::vector<std::size_t> occurrences;
};

// rank(c) = 1 + #{scores strictly greater than score(c)};
// precision = #{positives with score >= score(c)} / rank(c).
// Throws UndefinedError when no positive has a score.
LwlrapResult Lwlrap(std::span<const double> scores,
                    std::span<const std::uint8_t> truth,
                    std::size_t num_classes);

// ---------------------------------------------------------------------------
// Evaluation over score and label files.

// unit_id -> class -> value. Unit ids are "<segment_id>:<frame>" for frame
// level evaluation and "<segment_id>" for clip level evaluation.
using ScoreTable = std::map<std::string, std::map<ClassId, double>>;
using LabelTable = std::map<std::string, std::map<ClassId, FramePolarity>>;

std::string FrameUnitId(const ClipId& clip, std::size_t frame);

// CSV "unit_id,class_id,score"; an optional header row starting with
// "unit_id" is skipped. Throws ParseError (bad rows, non-finite scores) or
// ValidationError (duplicate unit/class).
ScoreTable ParseScoreCsv(std::string_view text);
std::string WriteScoreCsv(const ScoreTable& scores);

// Framed TSV (segment_id, frame_index, label, polarity) -> frame units.
LabelTable ParseFramedTsv(std::string_view text);
LabelTable LabelsFromFramed(const std::vector<FrameLabelSet>& framed);
// Clip-level units: Present -> kPositive, ExplicitNegative -> kExplicitNegative.
LabelTable LabelsFromWeak(const Corpus& corpus);

enum class EvalKind { kWeak, kStrong };
std::string_view ToString(EvalKind kind);
EvalKind ParseEvalKind(std::string_view text);

struct EvalConfig {
  NegativePooling pooling = NegativePooling::kBalanced;
  double auc_clamp = kDefaultAucClamp;
  EvalKind kind = EvalKind::kStrong;
};

struct ClassReport {
  std::size_t n_pos = 0;
  std::size_t n_exp_neg = 0;
  std::size_t n_comp_neg = 0;
  std::size_t missing = 0;  // labeled units of this class without a score
  bool evaluable = false;
  double auc = 0.0;
  double dprime = 0.0;
  std::optional<double> lwlrap;  // absent when the class has no occurrence
  double lwlrap_weight = 0.0;
};

struct EvalReport {
  EvalConfig config;
  std::map<ClassId, ClassReport> per_class;
  std::vector<ClassId> excluded;  // classes without positives or negatives
  double dprime_macro = 0.0;      // unweighted mean over evaluable classes
  double auc_macro = 0.0;
  std::optional<double> lwlrap;
  std::size_t labeled_units = 0;
  std::size_t scored_units = 0;        // labeled units with at least one score
  std::size_t missing_scores = 0;      // labeled (unit, class) without score
  std::size_t unresolved_scores = 0;   // score rows whose unit has no labels
};

// Positives are POS units; negatives pool EXP_NEG and COMP_NEG units.
// Unlabeled (implicit) negatives are never used. Throws UndefinedError when
// no labeled unit has a score or no class is evaluable.
EvalReport Evaluate(const ScoreTable& scores, const LabelTable& labels,
                    const EvalConfig& config = {});

// JSON report, `"schema": 1`. `generated_at` is written only when non-empty.
std::string ReportToJson(const EvalReport& report,
                         const std::string& generated_at = {});

}  // namespace strongset

#endif  // STRONGSET_METRICS_HPP_
