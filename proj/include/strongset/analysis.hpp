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

#ifndef STRONGSET_ANALYSIS_HPP_
#define STRONGSET_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strongset/corpus.hpp"
#include "strongset/ontology.hpp"

namespace strongset {

// Counts over clips: a = condition & outcome, b = condition & !outcome,
// c = !condition & outcome, d = neither.
struct Contingency2x2 {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  std::uint64_t d = 0;

  std::uint64_t total() const { return a + b + c + d; }
  friend bool operator==(const Contingency2x2&, const Contingency2x2&) = default;
};

// (a*d)/(b*c); when any cell is zero, 0.5 is added to every cell first
// (Haldane-Anscombe), so the result is always finite.
double OddsRatio(const Contingency2x2& t);

enum class LabelSide { kWeak, kStrong };
std::string_view ToString(LabelSide side);

struct ClassRef {
  LabelSide side = LabelSide::kWeak;
  ClassId class_id;
};

// Per-clip presence in both label sets, over the clips the corpora share.
struct JoinedPresence {
  std::vector<ClipId> clips;
  std::vector<ClassSet> weak;
  std::vector<ClassSet> strong;

  const std::vector<ClassSet>& side(LabelSide s) const {
    return s == LabelSide::kWeak ? weak : strong;
  }
};

// Joins on exact clip identity. Throws UndefinedError on an empty
// intersection.
JoinedPresence JoinCorpora(const Corpus& weak, const Corpus& strong);

Contingency2x2 Tabulate(const JoinedPresence& joined, const ClassRef& condition,
                        const ClassRef& outcome);

struct OddsResult {
  double odds_ratio = 1.0;
  Contingency2x2 table;
  std::size_t shared_clips = 0;
};

OddsResult CrossLabelOdds(const Corpus& weak, const Corpus& strong,
                          const ClassRef& condition, const ClassRef& outcome);

struct ScatterRow {
  ClassId class_id;
  double weak_prior = 0.0;
  double strong_prior = 0.0;
  std::optional<double> ratio;  // strong / weak; absent when weak_prior == 0
};

// One row per class in the union of both corpora's classes plus
// `extra_classes` (e.g. every ontology node), sorted by class id. Each prior
// is taken over its own corpus's clips; an empty corpus contributes zeros.
std::vector<ScatterRow> PriorsScatter(
    const Corpus& weak, const Corpus& strong,
    const std::vector<ClassId>& extra_classes = {});

struct OddsRow {
  ClassId condition;
  ClassId outcome;
  Contingency2x2 table;
  double odds_ratio = 1.0;
};

// For every condition class on `condition_side` (optionally only those in
// `only_conditions`), the `top_k` outcome classes on the other side with the
// largest odds ratio. Outcomes co-occurring with the condition on fewer than
// `min_cooccurrence` clips are skipped. Ordered by condition id, then
// descending odds ratio, then outcome id.
std::vector<OddsRow> TopOddsRatios(const JoinedPresence& joined,
                                   LabelSide condition_side, std::size_t top_k,
                                   std::size_t min_cooccurrence = 1,
                                   const std::vector<ClassId>& only_conditions = {});

// CSV exports. Names are looked up in `ontology` when given.
std::string WriteScatterCsv(const std::vector<ScatterRow>& rows,
                            const Ontology* ontology = nullptr);
std::string WriteOddsCsv(const std::vector<OddsRow>& rows,
                         const Ontology* ontology = nullptr);

}  // namespace strongset

#endif  // STRONGSET_ANALYSIS_HPP_
