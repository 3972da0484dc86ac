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

#ifndef STRONGSET_CORPUS_HPP_
#define STRONGSET_CORPUS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strongset/ontology.hpp"
#include "strongset/time.hpp"

namespace strongset {

// One excerpt of a source video. Identity (equality and ordering) is
// (ytid, start); `end` is carried along but does not take part in joins.
struct ClipId {
  std::string ytid;
  Micros start{0};
  Micros end{kClipDuration};

  Micros duration() const { return end - start; }

  // "<ytid>_<start in integer milliseconds>", the key used by the strong
  // label files and by every unit id this toolkit emits.
  std::string SegmentId() const;

  friend bool operator==(const ClipId& a, const ClipId& b) {
    return a.start == b.start && a.ytid == b.ytid;
  }
  friend bool operator<(const ClipId& a, const ClipId& b) {
    return a.ytid != b.ytid ? a.ytid < b.ytid : a.start < b.start;
  }
};

enum class Polarity { kPresent, kExplicitNegative };

struct WeakAnnotation {
  ClipId clip;
  ClassId class_id;
  Polarity polarity = Polarity::kPresent;
};

// Half-open time span [start, end) relative to the clip start.
struct Interval {
  Micros start{0};
  Micros end{0};

  Micros length() const { return end - start; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct LabeledSegment {
  ClipId clip;
  ClassId class_id;
  Interval span;
};

enum class CorpusKind { kWeak, kStrong, kDiffuse };

std::string_view ToString(CorpusKind kind);

// Non-fatal irregularities seen while loading.
struct LoadCounters {
  std::size_t duplicate_labels = 0;   // repeated (clip, class) rows, dropped
  std::size_t clamped_segments = 0;   // strong times pulled into the clip
  std::size_t rejected_segments = 0;  // strong segments entirely outside
  std::size_t dropped_negatives = 0;  // negatives contradicted by a mapped positive

  friend bool operator==(const LoadCounters&, const LoadCounters&) = default;
};

// A label collection over a registry of clips. `clips` is sorted and unique;
// every annotation refers to a registered clip. Raw strong segments are kept
// as given (overlaps are resolved only by MergeIntervals).
struct Corpus {
  CorpusKind kind = CorpusKind::kWeak;
  std::vector<ClipId> clips;
  std::vector<WeakAnnotation> weak;
  std::vector<LabeledSegment> strong;
  LoadCounters counters;

  bool empty() const { return clips.empty(); }
  // Returns nullptr when the clip is not registered.
  const ClipId* FindClip(const ClipId& key) const;
};

// Splits "<ytid>_<milliseconds>" at the last underscore.
// Throws ParseError when there is no underscore or the suffix is not an
// unsigned integer.
std::pair<std::string, Micros> DecodeSegmentId(std::string_view segment_id);

// Weak segments CSV. '#' lines are comments. Rows are
//   YTID, start_seconds, end_seconds, "mid1,mid2,..."[, present|negative]
// Throws ParseError with the 1-based line number.
Corpus ParseWeakCsv(std::string_view text);

// Strong labels TSV with header
//   segment_id  start_time_seconds  end_time_seconds  label
// Clip ends default to start + clip_duration.
Corpus ParseStrongTsv(std::string_view text,
                      Micros clip_duration = kClipDuration);

std::string WriteWeakCsv(const Corpus& corpus);
std::string WriteStrongTsv(const Corpus& corpus);

// Sorted, pairwise disjoint union. Touching spans are joined.
std::vector<Interval> MergeIntervals(std::vector<Interval> spans);
// Same, for the segments of one (clip, class).
std::vector<LabeledSegment> MergeClassSegments(
    const std::vector<LabeledSegment>& segments);

// One full-clip segment per (clip, class) of a Strong corpus.
Corpus BuildDiffuse(const Corpus& strong);

// Union of several corpora of the same kind (e.g. one per input file).
// Repeated (clip, class) weak labels are deduplicated; contradictory
// polarities or clip end times throw ValidationError.
Corpus MergeCorpora(const std::vector<Corpus>& parts);

// Keeps only clips in `keep` (and their annotations).
Corpus RestrictToClips(const Corpus& corpus, const std::set<ClipId>& keep);

// Clip -> classes present (weak Present annotations plus strong segments).
std::map<ClipId, ClassSet> PresenceByClip(const Corpus& corpus);
// Clip -> classes explicitly marked absent.
std::map<ClipId, ClassSet> NegativesByClip(const Corpus& corpus);

// Fraction of clips with at least one positive label of each class.
// Throws UndefinedError on an empty corpus.
std::map<ClassId, double> ClassPriors(const Corpus& corpus);
// Prior lookup; classes missing from the map have prior 0.
double PriorOf(const std::map<ClassId, double>& priors, std::string_view id);

// Greedy class-balanced clip selection. Classes are visited in ascending
// order of availability; each is topped up with uniformly drawn clips until
// `target_per_class` selected clips carry it or none remain.
std::vector<ClipId> SelectBalancedSubset(const Corpus& corpus,
                                         std::size_t target_per_class,
                                         std::uint64_t seed);

struct CorpusStats {
  std::size_t num_clips = 0;
  std::size_t num_weak_rows = 0;
  std::size_t num_segments = 0;
  // Distinct (clip, class) pairs labeled present.
  std::size_t positive_instances = 0;
  std::size_t negative_instances = 0;
  double mean_classes_per_clip = 0.0;
  std::map<ClassId, std::size_t> positive_clips_per_class;
  std::map<ClassId, std::size_t> negative_clips_per_class;
  double mean_positive_clips_per_class = 0.0;
  double median_positive_clips_per_class = 0.0;
  double mean_negative_clips_per_class = 0.0;
  double median_negative_clips_per_class = 0.0;
  LoadCounters counters;
};

CorpusStats ComputeStats(const Corpus& corpus);

// Applies a class mapping to every positive label, e.g. smearing or music
// collapse. Strong segments are duplicated for each mapped class. Explicit
// negatives are left as they are (absence of a child says nothing about its
// parent) unless a mapped positive now contradicts them, in which case they
// are dropped and counted.
Corpus MapLabels(const Corpus& corpus,
                 const std::function<ClassSet(const ClassId&)>& mapping);

}  // namespace strongset

#endif  // STRONGSET_CORPUS_HPP_
