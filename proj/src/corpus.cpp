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

#include "strongset/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <tuple>

#include "strongset/error.hpp"
#include "strongset/random.hpp"

namespace strongset {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Calls fn(line, line_number) for every line; strips a trailing '\r'.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

// Comma-separated fields; a double-quoted field may contain commas.
std::vector<std::string> SplitCsvRow(std::string_view line,
                                     std::size_t line_no) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string field;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        field.push_back(line[i++]);
      }
      if (!closed) throw ParseError("unterminated quoted field", line_no);
      while (i < line.size() && line[i] != ',') {
        if (line[i] != ' ' && line[i] != '\t') {
          throw ParseError("unexpected text after quoted field", line_no);
        }
        ++i;
      }
    } else {
      const std::size_t comma = line.find(',', i);
      field = std::string(Trim(line.substr(i, comma - i)));
      i = comma == std::string_view::npos ? line.size() : comma;
    }
    fields.push_back(std::move(field));
    if (i >= line.size()) break;
    ++i;  // skip ','
  }
  return fields;
}

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.emplace_back(Trim(line.substr(start, tab - start)));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

// Registers clips while checking that repeated keys agree on the end time.
class ClipRegistry {
 public:
  const ClipId& Add(const ClipId& clip, std::size_t line_no) {
    auto [it, inserted] = clips_.insert(clip);
    if (!inserted && it->end != clip.end) {
      throw ValidationError("line " + std::to_string(line_no) + ": clip " +
                            clip.SegmentId() +
                            " appears with two different end times");
    }
    return *it;
  }
  std::vector<ClipId> Take() { return {clips_.begin(), clips_.end()}; }

 private:
  std::set<ClipId> clips_;
};

void SortWeak(std::vector<WeakAnnotation>& weak) {
  std::stable_sort(weak.begin(), weak.end(),
                   [](const WeakAnnotation& a, const WeakAnnotation& b) {
                     if (!(a.clip == b.clip)) return a.clip < b.clip;
                     if (a.polarity != b.polarity) {
                       return a.polarity < b.polarity;
                     }
                     return a.class_id < b.class_id;
                   });
}

}  // namespace

std::string ClipId::SegmentId() const {
  return ytid + "_" + std::to_string((start.count() + 500) / 1000);
}

std::string_view ToString(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kWeak:
      return "weak";
    case CorpusKind::kStrong:
      return "strong";
    case CorpusKind::kDiffuse:
      return "diffuse";
  }
  return "unknown";
}

const ClipId* Corpus::FindClip(const ClipId& key) const {
  const auto it = std::lower_bound(clips.begin(), clips.end(), key);
  return it != clips.end() && *it == key ? &*it : nullptr;
}

std::pair<std::string, Micros> DecodeSegmentId(std::string_view segment_id) {
  const std::size_t us = segment_id.rfind('_');
  if (us == std::string_view::npos || us == 0) {
    throw ParseError("segment id '" + std::string(segment_id) +
                     "' has no <ytid>_<milliseconds> form");
  }
  const std::string_view digits = segment_id.substr(us + 1);
  std::uint64_t ms = 0;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), ms);
  if (digits.empty() || ec != std::errc() ||
      ptr != digits.data() + digits.size()) {
    throw ParseError("segment id '" + std::string(segment_id) +
                     "' has a non-integer millisecond suffix");
  }
  return {std::string(segment_id.substr(0, us)),
          Micros{static_cast<std::int64_t>(ms) * 1000}};
}

Corpus ParseWeakCsv(std::string_view text) {
  Corpus corpus;
  corpus.kind = CorpusKind::kWeak;
  ClipRegistry registry;
  std::map<std::pair<ClipId, ClassId>, Polarity> seen;

  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    if (Trim(line).empty() || Trim(line).front() == '#') return;
    const auto fields = SplitCsvRow(line, line_no);
    if (fields.size() != 4 && fields.size() != 5) {
      throw ParseError("expected 4 or 5 fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    ClipId clip;
    clip.ytid = fields[0];
    if (clip.ytid.empty()) throw ParseError("empty YTID", line_no);
    if (!ParseSeconds(fields[1], clip.start) ||
        !ParseSeconds(fields[2], clip.end)) {
      throw ParseError("non-numeric start or end time", line_no);
    }
    if (clip.start < Micros{0} || clip.end <= clip.start ||
        clip.duration() > kClipDuration) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": clip must satisfy 0 <= start < end <= "
                            "start + 10 s");
    }
    Polarity polarity = Polarity::kPresent;
    if (fields.size() == 5) {
      if (fields[4] == "present") {
        polarity = Polarity::kPresent;
      } else if (fields[4] == "negative") {
        polarity = Polarity::kExplicitNegative;
      } else {
        throw ParseError("polarity must be 'present' or 'negative', got '" +
                             fields[4] + "'",
                         line_no);
      }
    }
    const ClipId& registered = registry.Add(clip, line_no);

    std::size_t labels = 0;
    std::string_view rest = fields[3];
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view mid = Trim(rest.substr(0, comma));
      if (!mid.empty()) {
        ++labels;
        auto [it, inserted] =
            seen.emplace(std::make_pair(registered, ClassId(mid)), polarity);
        if (!inserted) {
          if (it->second != polarity) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": class " + std::string(mid) +
                                  " is both present and negative on " +
                                  registered.SegmentId());
          }
          ++corpus.counters.duplicate_labels;
        } else {
          corpus.weak.push_back({registered, ClassId(mid), polarity});
        }
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (labels == 0) throw ParseError("empty label list", line_no);
  });

  corpus.clips = registry.Take();
  SortWeak(corpus.weak);
  return corpus;
}

Corpus ParseStrongTsv(std::string_view text, Micros clip_duration) {
  Corpus corpus;
  corpus.kind = CorpusKind::kStrong;
  ClipRegistry registry;
  bool header_seen = false;

  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    if (Trim(line).empty()) return;
    const auto fields = SplitTabs(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() >= 4 && fields[0] == "segment_id") {
        if (fields[1] != "start_time_seconds" ||
            fields[2] != "end_time_seconds" || fields[3] != "label") {
          throw ParseError("unexpected strong label header", line_no);
        }
        return;
      }
      throw ParseError(
          "missing header 'segment_id<TAB>start_time_seconds<TAB>"
          "end_time_seconds<TAB>label'",
          line_no);
    }
    if (fields.size() != 4) {
      throw ParseError(
          "expected 4 tab-separated fields, found " +
              std::to_string(fields.size()),
          line_no);
    }
    ClipId clip;
    try {
      std::tie(clip.ytid, clip.start) = DecodeSegmentId(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    clip.end = clip.start + clip_duration;
    Interval span;
    if (!ParseSeconds(fields[1], span.start) ||
        !ParseSeconds(fields[2], span.end)) {
      throw ParseError("non-numeric segment time", line_no);
    }
    if (span.end <= span.start) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": segment end must exceed its start");
    }
    if (fields[3].empty()) throw ParseError("empty label", line_no);
    const ClipId& registered = registry.Add(clip, line_no);
    const Micros dur = registered.duration();
    if (span.end <= Micros{0} || span.start >= dur) {
      ++corpus.counters.rejected_segments;
      return;
    }
    if (span.start < Micros{0} || span.end > dur) {
      span.start = std::max(span.start, Micros{0});
      span.end = std::min(span.end, dur);
      ++corpus.counters.clamped_segments;
    }
    corpus.strong.push_back({registered, fields[3], span});
  });

  corpus.clips = registry.Take();
  std::stable_sort(corpus.strong.begin(), corpus.strong.end(),
                   [](const LabeledSegment& a, const LabeledSegment& b) {
                     return a.clip < b.clip;
                   });
  return corpus;
}

std::string WriteWeakCsv(const Corpus& corpus) {
  const bool has_negatives =
      std::any_of(corpus.weak.begin(), corpus.weak.end(), [](const auto& w) {
        return w.polarity == Polarity::kExplicitNegative;
      });
  std::vector<WeakAnnotation> rows = corpus.weak;
  SortWeak(rows);

  std::ostringstream out;
  out << "# YTID, start_seconds, end_seconds, positive_labels"
      << (has_negatives ? ", polarity" : "") << "\n";
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    std::string labels;
    while (j < rows.size() && rows[j].clip == rows[i].clip &&
           rows[j].polarity == rows[i].polarity) {
      if (!labels.empty()) labels += ',';
      labels += rows[j].class_id;
      ++j;
    }
    const ClipId& clip = rows[i].clip;
    out << clip.ytid << ", " << FormatSeconds(clip.start) << ", "
        << FormatSeconds(clip.end) << ", \"" << labels << "\"";
    if (has_negatives) {
      out << ", "
          << (rows[i].polarity == Polarity::kPresent ? "present" : "negative");
    }
    out << "\n";
    i = j;
  }
  return out.str();
}

std::string WriteStrongTsv(const Corpus& corpus) {
  std::ostringstream out;
  out << "segment_id\tstart_time_seconds\tend_time_seconds\tlabel\n";
  for (const LabeledSegment& s : corpus.strong) {
    out << s.clip.SegmentId() << '\t' << FormatSeconds(s.span.start) << '\t'
        << FormatSeconds(s.span.end) << '\t' << s.class_id << '\n';
  }
  return out.str();
}

std::vector<Interval> MergeIntervals(std::vector<Interval> spans) {
  std::sort(spans.begin(), spans.end(),
            [](const Interval& a, const Interval& b) {
              return a.start != b.start ? a.start < b.start : a.end < b.end;
            });
  std::vector<Interval> merged;
  for (const Interval& s : spans) {
    if (s.end <= s.start) continue;
    if (!merged.empty() && s.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, s.end);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

std::vector<LabeledSegment> MergeClassSegments(
    const std::vector<LabeledSegment>& segments) {
  if (segments.empty()) return {};
  std::vector<Interval> spans;
  spans.reserve(segments.size());
  for (const auto& s : segments) spans.push_back(s.span);
  std::vector<LabeledSegment> out;
  for (const Interval& m : MergeIntervals(std::move(spans))) {
    out.push_back({segments.front().clip, segments.front().class_id, m});
  }
  return out;
}

Corpus BuildDiffuse(const Corpus& strong) {
  if (strong.kind != CorpusKind::kStrong) {
    throw ValidationError("BuildDiffuse expects a strong corpus, got " +
                          std::string(ToString(strong.kind)));
  }
  Corpus out;
  out.kind = CorpusKind::kDiffuse;
  out.clips = strong.clips;
  out.weak = strong.weak;
  out.counters = strong.counters;
  for (const auto& [clip, classes] : PresenceByClip(strong)) {
    for (const ClassId& c : classes) {
      out.strong.push_back({clip, c, {Micros{0}, clip.duration()}});
    }
  }
  return out;
}

Corpus MergeCorpora(const std::vector<Corpus>& parts) {
  Corpus out;
  if (parts.empty()) return out;
  out.kind = parts.front().kind;
  std::map<ClipId, Micros> ends;
  std::map<std::pair<ClipId, ClassId>, Polarity> seen;
  for (const Corpus& part : parts) {
    if (part.kind != out.kind) {
      throw ValidationError("cannot merge a " + std::string(ToString(part.kind)) +
                            " corpus into a " +
                            std::string(ToString(out.kind)) + " corpus");
    }
    for (const ClipId& c : part.clips) {
      auto [it, inserted] = ends.emplace(c, c.end);
      if (!inserted && it->second != c.end) {
        throw ValidationError("clip " + c.SegmentId() +
                              " appears with two different end times");
      }
    }
    for (const WeakAnnotation& w : part.weak) {
      auto [it, inserted] =
          seen.emplace(std::make_pair(w.clip, w.class_id), w.polarity);
      if (!inserted) {
        if (it->second != w.polarity) {
          throw ValidationError("class " + w.class_id +
                                " is both present and negative on " +
                                w.clip.SegmentId());
        }
        ++out.counters.duplicate_labels;
        continue;
      }
      out.weak.push_back(w);
    }
    out.strong.insert(out.strong.end(), part.strong.begin(), part.strong.end());
    out.counters.duplicate_labels += part.counters.duplicate_labels;
    out.counters.clamped_segments += part.counters.clamped_segments;
    out.counters.rejected_segments += part.counters.rejected_segments;
    out.counters.dropped_negatives += part.counters.dropped_negatives;
  }
  for (const auto& [clip, end] : ends) out.clips.push_back(clip);
  SortWeak(out.weak);
  std::stable_sort(out.strong.begin(), out.strong.end(),
                   [](const LabeledSegment& a, const LabeledSegment& b) {
                     return a.clip < b.clip;
                   });
  return out;
}

Corpus RestrictToClips(const Corpus& corpus, const std::set<ClipId>& keep) {
  Corpus out;
  out.kind = corpus.kind;
  out.counters = corpus.counters;
  for (const ClipId& c : corpus.clips) {
    if (keep.contains(c)) out.clips.push_back(c);
  }
  for (const auto& w : corpus.weak) {
    if (keep.contains(w.clip)) out.weak.push_back(w);
  }
  for (const auto& s : corpus.strong) {
    if (keep.contains(s.clip)) out.strong.push_back(s);
  }
  return out;
}

std::map<ClipId, ClassSet> PresenceByClip(const Corpus& corpus) {
  std::map<ClipId, ClassSet> out;
  for (const auto& w : corpus.weak) {
    if (w.polarity == Polarity::kPresent) out[w.clip].insert(w.class_id);
  }
  for (const auto& s : corpus.strong) out[s.clip].insert(s.class_id);
  return out;
}

std::map<ClipId, ClassSet> NegativesByClip(const Corpus& corpus) {
  std::map<ClipId, ClassSet> out;
  for (const auto& w : corpus.weak) {
    if (w.polarity == Polarity::kExplicitNegative) {
      out[w.clip].insert(w.class_id);
    }
  }
  return out;
}

std::map<ClassId, double> ClassPriors(const Corpus& corpus) {
  if (corpus.clips.empty()) {
    throw UndefinedError("class priors are undefined for an empty corpus");
  }
  std::map<ClassId, std::size_t> counts;
  for (const auto& [clip, classes] : PresenceByClip(corpus)) {
    for (const ClassId& c : classes) ++counts[c];
  }
  std::map<ClassId, double> priors;
  const auto n = static_cast<double>(corpus.clips.size());
  for (const auto& [c, k] : counts) priors[c] = static_cast<double>(k) / n;
  return priors;
}

double PriorOf(const std::map<ClassId, double>& priors, std::string_view id) {
  const auto it = priors.find(std::string(id));
  return it == priors.end() ? 0.0 : it->second;
}

std::vector<ClipId> SelectBalancedSubset(const Corpus& corpus,
                                         std::size_t target_per_class,
                                         std::uint64_t seed) {
  if (target_per_class == 0) {
    throw ValidationError("target_per_class must be at least 1");
  }
  const auto presence = PresenceByClip(corpus);
  std::vector<const ClipId*> clip_of;
  std::vector<const ClassSet*> classes_of;
  std::map<ClassId, std::vector<std::size_t>> bearers;
  for (const auto& [clip, classes] : presence) {
    const std::size_t idx = clip_of.size();
    clip_of.push_back(&clip);
    classes_of.push_back(&classes);
    for (const ClassId& c : classes) bearers[c].push_back(idx);
  }

  std::vector<std::pair<std::size_t, const ClassId*>> order;
  for (const auto& [c, clips] : bearers) order.emplace_back(clips.size(), &c);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : *a.second < *b.second;
  });

  std::vector<bool> selected(clip_of.size(), false);
  std::map<ClassId, std::size_t> selected_count;
  for (const auto& [available, class_id] : order) {
    std::size_t& have = selected_count[*class_id];
    if (have >= target_per_class) continue;
    std::vector<std::size_t> candidates;
    for (const std::size_t idx : bearers.at(*class_id)) {
      if (!selected[idx]) candidates.push_back(idx);
    }
    CounterRng rng(seed, {HashString(*class_id)});
    Shuffle(candidates, rng);
    for (const std::size_t idx : candidates) {
      if (have >= target_per_class) break;
      selected[idx] = true;
      for (const ClassId& c : *classes_of[idx]) ++selected_count[c];
    }
  }

  std::vector<ClipId> out;
  for (std::size_t i = 0; i < clip_of.size(); ++i) {
    if (selected[i]) out.push_back(*clip_of[i]);
  }
  return out;
}

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  stats.num_clips = corpus.clips.size();
  stats.num_weak_rows = corpus.weak.size();
  stats.num_segments = corpus.strong.size();
  stats.counters = corpus.counters;

  const auto presence = PresenceByClip(corpus);
  for (const auto& [clip, classes] : presence) {
    stats.positive_instances += classes.size();
    for (const ClassId& c : classes) ++stats.positive_clips_per_class[c];
  }
  for (const auto& [clip, classes] : NegativesByClip(corpus)) {
    stats.negative_instances += classes.size();
    for (const ClassId& c : classes) ++stats.negative_clips_per_class[c];
  }
  if (stats.num_clips > 0) {
    stats.mean_classes_per_clip = static_cast<double>(stats.positive_instances) /
                                  static_cast<double>(stats.num_clips);
  }

  const auto summarize = [](const std::map<ClassId, std::size_t>& counts,
                            double& mean, double& median) {
    if (counts.empty()) return;
    std::vector<double> v;
    for (const auto& [c, k] : counts) v.push_back(static_cast<double>(k));
    std::sort(v.begin(), v.end());
    mean = std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
    const std::size_t mid = v.size() / 2;
    median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  };
  summarize(stats.positive_clips_per_class, stats.mean_positive_clips_per_class,
            stats.median_positive_clips_per_class);
  summarize(stats.negative_clips_per_class, stats.mean_negative_clips_per_class,
            stats.median_negative_clips_per_class);
  return stats;
}

Corpus MapLabels(const Corpus& corpus,
                 const std::function<ClassSet(const ClassId&)>& mapping) {
  Corpus out;
  out.kind = corpus.kind;
  out.clips = corpus.clips;
  out.counters = corpus.counters;

  std::set<std::pair<ClipId, ClassId>> positives;
  std::set<std::pair<ClipId, ClassId>> weak_seen;
  for (const auto& w : corpus.weak) {
    if (w.polarity != Polarity::kPresent) continue;
    for (const ClassId& c : mapping(w.class_id)) {
      positives.emplace(w.clip, c);
      if (weak_seen.emplace(w.clip, c).second) {
        out.weak.push_back({w.clip, c, Polarity::kPresent});
      }
    }
  }
  std::set<std::tuple<ClipId, ClassId, std::int64_t, std::int64_t>> seg_seen;
  for (const auto& s : corpus.strong) {
    for (const ClassId& c : mapping(s.class_id)) {
      positives.emplace(s.clip, c);
      if (seg_seen
              .emplace(s.clip, c, s.span.start.count(), s.span.end.count())
              .second) {
        out.strong.push_back({s.clip, c, s.span});
      }
    }
  }
  for (const auto& w : corpus.weak) {
    if (w.polarity != Polarity::kExplicitNegative) continue;
    if (positives.contains({w.clip, w.class_id})) {
      ++out.counters.dropped_negatives;
    } else {
      out.weak.push_back(w);
    }
  }
  SortWeak(out.weak);
  std::stable_sort(out.strong.begin(), out.strong.end(),
                   [](const LabeledSegment& a, const LabeledSegment& b) {
                     return a.clip < b.clip;
                   });
  return out;
}

}  // namespace strongset
