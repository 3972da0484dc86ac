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

#ifndef STRONGSET_FRAMING_HPP_
#define STRONGSET_FRAMING_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "strongset/corpus.hpp"
#include "strongset/random.hpp"
#include "strongset/time.hpp"

namespace strongset {

struct FramingConfig {
  Micros frame_duration = kFrameDuration;
  // A frame is positive when the class fills at least this fraction of it...
  double frame_fill_fraction = 0.5;
  // ...or when it holds at least this fraction of the class's total duration.
  double label_fraction = 0.5;
};

// Contiguous, non-overlapping frames starting at 0. A trailing remainder
// shorter than one frame is not framed; a clip shorter than one frame gets a
// single frame covering the whole clip.
struct FrameGrid {
  Micros frame_duration = kFrameDuration;
  Micros clip_duration = kClipDuration;
  std::size_t num_frames = 0;

  // Length of each frame: frame_duration, or the clip length for clips
  // shorter than one frame.
  Micros frame_length() const {
    return std::min(frame_duration, clip_duration);
  }
  Interval Frame(std::size_t k) const;
};

// Throws ValidationError when clip_duration <= 0.
FrameGrid MakeGrid(Micros clip_duration,
                   Micros frame_duration = kFrameDuration);

// Total overlap of `window` with disjoint spans.
Micros Overlap(const Interval& window, std::span<const Interval> merged);

// Both comparisons are inclusive:
//   overlap >= frame_fill_fraction * |window|  or
//   overlap >= label_fraction * total_class_duration.
bool IsFramePositive(const Interval& window, std::span<const Interval> merged,
                     Micros total_class_duration,
                     const FramingConfig& config = {});

enum class FramePolarity { kPositive, kComplementaryNegative, kExplicitNegative };

// "POS", "COMP_NEG", "EXP_NEG".
std::string_view ToString(FramePolarity polarity);
// Throws ParseError on anything else.
FramePolarity ParseFramePolarity(std::string_view text);

struct FrameLabel {
  std::size_t frame = 0;
  ClassId class_id;
  FramePolarity polarity = FramePolarity::kPositive;

  friend bool operator==(const FrameLabel&, const FrameLabel&) = default;
};

// Entries sorted by (frame, class); at most one polarity per (frame, class).
struct FrameLabelSet {
  ClipId clip;
  std::size_t num_frames = 0;
  std::vector<FrameLabel> entries;
};

// Everything known about one clip: merged strong spans per class and the
// clip-level explicit negatives.
struct ClipView {
  ClipId clip;
  std::map<ClassId, std::vector<Interval>> segments;  // merged per class
  ClassSet negatives;

  Micros ClassDuration(const ClassId& class_id) const;
};

// One view per clip registered in either corpus, in clip order. Negatives
// are taken from `negatives` (may be null); strong spans are merged.
std::vector<ClipView> GroupClips(const Corpus& strong,
                                 const Corpus* negatives = nullptr);

// Positive entries only.
FrameLabelSet ProjectPositives(const ClipView& clip, const FrameGrid& grid,
                               const FramingConfig& config = {});

// For every class with at least one positive frame, each remaining frame of
// the clip becomes a complementary negative.
std::vector<FrameLabel> ComplementaryNegatives(const FrameLabelSet& positives);

struct ExplicitNegativeProjection {
  std::vector<FrameLabel> additions;
  // Classes that are both clip-level negatives and positive on some frame.
  std::vector<ClassId> conflicts;
};

// Spreads each clip-level negative over every frame not already positive for
// that class.
ExplicitNegativeProjection ProjectExplicitNegatives(
    const ClassSet& negatives, const FrameLabelSet& positives);

struct FramingOptions {
  bool complementary_negatives = true;
};

struct FramingReport {
  std::size_t clips = 0;
  std::size_t frames = 0;
  std::size_t positive = 0;
  std::size_t complementary_negative = 0;
  std::size_t explicit_negative = 0;
  // (clip, class) pairs where a clip-level negative met strong positives.
  std::size_t conflicts = 0;
};

// Positives, then complementary negatives, then explicit negatives. Where a
// conflicting clip would give a frame both negative kinds, the explicit
// negative is kept.
FrameLabelSet FrameClip(const ClipView& clip, const FramingConfig& config = {},
                        const FramingOptions& options = {},
                        FramingReport* report = nullptr);

std::vector<FrameLabelSet> FrameCorpus(const Corpus& strong,
                                       const Corpus* negatives = nullptr,
                                       const FramingConfig& config = {},
                                       const FramingOptions& options = {},
                                       FramingReport* report = nullptr);

// TSV: segment_id  frame_index  label  polarity
std::string WriteFramedTsv(const std::vector<FrameLabelSet>& framed);

// One randomly placed training window and the classes it carries.
struct CropLabel {
  ClipId clip;
  Micros crop_start{0};
  ClassSet classes;
};

// Labels the window [crop_start, crop_start + frame) with the frame rule.
CropLabel LabelCrop(const ClipView& clip, Micros crop_start,
                    const FramingConfig& config = {});

// crop_start uniform over the whole microseconds in
// [0, clip_duration - frame_duration]. Throws ValidationError for clips
// shorter than one frame.
CropLabel SampleCrop(const ClipView& clip, CounterRng& rng,
                     const FramingConfig& config = {});
CropLabel SampleCrop(const ClipView& clip, std::uint64_t seed,
                     const FramingConfig& config = {});

}  // namespace strongset

#endif  // STRONGSET_FRAMING_HPP_
