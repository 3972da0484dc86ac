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

#include "strongset/framing.hpp"

#include <algorithm>
#include <sstream>

#include "strongset/error.hpp"

namespace strongset {

Interval FrameGrid::Frame(std::size_t k) const {
  const Micros len = frame_length();
  const Micros start = len * static_cast<std::int64_t>(k);
  return {start, start + len};
}

FrameGrid MakeGrid(Micros clip_duration, Micros frame_duration) {
  if (clip_duration <= Micros{0}) {
    throw ValidationError("clip duration must be positive");
  }
  if (frame_duration <= Micros{0}) {
    throw ValidationError("frame duration must be positive");
  }
  FrameGrid grid;
  grid.frame_duration = frame_duration;
  grid.clip_duration = clip_duration;
  grid.num_frames = std::max<std::size_t>(
      1, static_cast<std::size_t>(clip_duration / frame_duration));
  return grid;
}

Micros Overlap(const Interval& window, std::span<const Interval> merged) {
  Micros total{0};
  for (const Interval& s : merged) {
    if (s.start >= window.end) break;
    const Micros lo = std::max(s.start, window.start);
    const Micros hi = std::min(s.end, window.end);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

bool IsFramePositive(const Interval& window, std::span<const Interval> merged,
                     Micros total_class_duration,
                     const FramingConfig& config) {
  const auto overlap = static_cast<double>(Overlap(window, merged).count());
  if (overlap <= 0.0) return false;
  const auto window_len = static_cast<double>(window.length().count());
  const auto total = static_cast<double>(total_class_duration.count());
  return overlap >= config.frame_fill_fraction * window_len ||
         overlap >= config.label_fraction * total;
}

std::string_view ToString(FramePolarity polarity) {
  switch (polarity) {
    case FramePolarity::kPositive:
      return "POS";
    case FramePolarity::kComplementaryNegative:
      return "COMP_NEG";
    case FramePolarity::kExplicitNegative:
      return "EXP_NEG";
  }
  return "?";
}

FramePolarity ParseFramePolarity(std::string_view text) {
  if (text == "POS") return FramePolarity::kPositive;
  if (text == "COMP_NEG") return FramePolarity::kComplementaryNegative;
  if (text == "EXP_NEG") return FramePolarity::kExplicitNegative;
  throw ParseError("unknown frame polarity '" + std::string(text) + "'");
}

Micros ClipView::ClassDuration(const ClassId& class_id) const {
  const auto it = segments.find(class_id);
  if (it == segments.end()) return Micros{0};
  Micros total{0};
  for (const Interval& s : it->second) total += s.length();
  return total;
}

std::vector<ClipView> GroupClips(const Corpus& strong,
                                 const Corpus* negatives) {
  std::map<ClipId, ClipView> views;
  for (const ClipId& c : strong.clips) views[c].clip = c;
  for (const LabeledSegment& s : strong.strong) {
    views[s.clip].segments[s.class_id].push_back(s.span);
  }
  if (negatives != nullptr) {
    for (const WeakAnnotation& w : negatives->weak) {
      if (w.polarity != Polarity::kExplicitNegative) continue;
      auto [it, inserted] = views.try_emplace(w.clip);
      if (inserted) it->second.clip = w.clip;
      it->second.negatives.insert(w.class_id);
    }
  }
  std::vector<ClipView> out;
  out.reserve(views.size());
  for (auto& [clip, view] : views) {
    for (auto& [c, spans] : view.segments) {
      spans = MergeIntervals(std::move(spans));
    }
    out.push_back(std::move(view));
  }
  return out;
}

FrameLabelSet ProjectPositives(const ClipView& clip, const FrameGrid& grid,
                               const FramingConfig& config) {
  FrameLabelSet out;
  out.clip = clip.clip;
  out.num_frames = grid.num_frames;
  for (std::size_t k = 0; k < grid.num_frames; ++k) {
    const Interval frame = grid.Frame(k);
    for (const auto& [class_id, spans] : clip.segments) {
      Micros total{0};
      for (const Interval& s : spans) total += s.length();
      if (IsFramePositive(frame, spans, total, config)) {
        out.entries.push_back({k, class_id, FramePolarity::kPositive});
      }
    }
  }
  return out;
}

namespace {

// class -> per-frame positive flags.
std::map<ClassId, std::vector<bool>> PositiveMask(const FrameLabelSet& set) {
  std::map<ClassId, std::vector<bool>> mask;
  for (const FrameLabel& e : set.entries) {
    if (e.polarity != FramePolarity::kPositive) continue;
    auto& flags = mask[e.class_id];
    flags.resize(set.num_frames, false);
    flags[e.frame] = true;
  }
  return mask;
}

void SortEntries(std::vector<FrameLabel>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const FrameLabel& a, const FrameLabel& b) {
              return a.frame != b.frame ? a.frame < b.frame
                                        : a.class_id < b.class_id;
            });
}

}  // namespace

std::vector<FrameLabel> ComplementaryNegatives(const FrameLabelSet& positives) {
  std::vector<FrameLabel> out;
  for (const auto& [class_id, flags] : PositiveMask(positives)) {
    for (std::size_t k = 0; k < positives.num_frames; ++k) {
      if (!flags[k]) {
        out.push_back({k, class_id, FramePolarity::kComplementaryNegative});
      }
    }
  }
  SortEntries(out);
  return out;
}

ExplicitNegativeProjection ProjectExplicitNegatives(
    const ClassSet& negatives, const FrameLabelSet& positives) {
  ExplicitNegativeProjection out;
  const auto mask = PositiveMask(positives);
  for (const ClassId& class_id : negatives) {
    const auto it = mask.find(class_id);
    if (it != mask.end()) out.conflicts.push_back(class_id);
    for (std::size_t k = 0; k < positives.num_frames; ++k) {
      if (it != mask.end() && it->second[k]) continue;
      out.additions.push_back({k, class_id, FramePolarity::kExplicitNegative});
    }
  }
  SortEntries(out.additions);
  return out;
}

FrameLabelSet FrameClip(const ClipView& clip, const FramingConfig& config,
                        const FramingOptions& options, FramingReport* report) {
  const FrameGrid grid =
      MakeGrid(clip.clip.duration(), config.frame_duration);
  FrameLabelSet out = ProjectPositives(clip, grid, config);

  std::vector<FrameLabel> comp;
  if (options.complementary_negatives) comp = ComplementaryNegatives(out);
  ExplicitNegativeProjection exp = ProjectExplicitNegatives(clip.negatives, out);

  std::set<std::pair<std::size_t, ClassId>> explicit_cells;
  for (const FrameLabel& e : exp.additions) {
    explicit_cells.emplace(e.frame, e.class_id);
  }
  std::size_t n_comp = 0;
  for (FrameLabel& e : comp) {
    if (explicit_cells.contains({e.frame, e.class_id})) continue;
    out.entries.push_back(std::move(e));
    ++n_comp;
  }
  const std::size_t n_pos = out.entries.size() - n_comp;
  const std::size_t n_exp = exp.additions.size();
  for (FrameLabel& e : exp.additions) out.entries.push_back(std::move(e));
  SortEntries(out.entries);

  if (report != nullptr) {
    ++report->clips;
    report->frames += grid.num_frames;
    report->positive += n_pos;
    report->complementary_negative += n_comp;
    report->explicit_negative += n_exp;
    report->conflicts += exp.conflicts.size();
  }
  return out;
}

std::vector<FrameLabelSet> FrameCorpus(const Corpus& strong,
                                       const Corpus* negatives,
                                       const FramingConfig& config,
                                       const FramingOptions& options,
                                       FramingReport* report) {
  std::vector<FrameLabelSet> out;
  for (const ClipView& view : GroupClips(strong, negatives)) {
    out.push_back(FrameClip(view, config, options, report));
  }
  return out;
}

std::string WriteFramedTsv(const std::vector<FrameLabelSet>& framed) {
  std::ostringstream out;
  out << "segment_id\tframe_index\tlabel\tpolarity\n";
  for (const FrameLabelSet& set : framed) {
    const std::string seg = set.clip.SegmentId();
    for (const FrameLabel& e : set.entries) {
      out << seg << '\t' << e.frame << '\t' << e.class_id << '\t'
          << ToString(e.polarity) << '\n';
    }
  }
  return out.str();
}

CropLabel LabelCrop(const ClipView& clip, Micros crop_start,
                    const FramingConfig& config) {
  const Micros len = std::min(config.frame_duration, clip.clip.duration());
  const Interval window{crop_start, crop_start + len};
  CropLabel out{clip.clip, crop_start, {}};
  for (const auto& [class_id, spans] : clip.segments) {
    Micros total{0};
    for (const Interval& s : spans) total += s.length();
    if (IsFramePositive(window, spans, total, config)) {
      out.classes.insert(class_id);
    }
  }
  return out;
}

CropLabel SampleCrop(const ClipView& clip, CounterRng& rng,
                     const FramingConfig& config) {
  const Micros slack = clip.clip.duration() - config.frame_duration;
  if (slack < Micros{0}) {
    throw ValidationError("clip " + clip.clip.SegmentId() +
                          " is shorter than one frame");
  }
  const Micros start{static_cast<std::int64_t>(
      rng.Below(static_cast<std::uint64_t>(slack.count()) + 1))};
  return LabelCrop(clip, start, config);
}

CropLabel SampleCrop(const ClipView& clip, std::uint64_t seed,
                     const FramingConfig& config) {
  CounterRng rng(seed, {HashString(clip.clip.SegmentId())});
  return SampleCrop(clip, rng, config);
}

}  // namespace strongset
