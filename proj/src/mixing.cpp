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

#include "strongset/mixing.hpp"

#include <cmath>
#include <sstream>

#include "strongset/error.hpp"
#include "strongset/random.hpp"

namespace strongset {

namespace {

// Stream tag separating manifest draws from any other use of the seed.
constexpr std::uint64_t kManifestStream = 0x6D6978;  // "mix"

std::string JoinClasses(const ClassSet& classes) {
  std::string out;
  for (const ClassId& c : classes) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

}  // namespace

std::string_view ToString(ManifestSource source) {
  return source == ManifestSource::kWeak ? "weak" : "strong_like";
}

Manifest MixManifest(const Corpus& weak, const Corpus& strong_like,
                     const MixSpec& spec) {
  if (!(spec.mu >= 0.0 && spec.mu <= 1.0)) {
    throw ValidationError("mu must lie in [0, 1]");
  }
  const auto weak_presence = PresenceByClip(weak);
  std::vector<std::pair<const ClipId*, const ClassSet*>> weak_rows;
  static const ClassSet kNoClasses;
  for (const ClipId& c : weak.clips) {
    const auto it = weak_presence.find(c);
    weak_rows.emplace_back(&c,
                           it == weak_presence.end() ? &kNoClasses : &it->second);
  }
  const std::vector<ClipView> strong_rows = GroupClips(strong_like);

  const std::size_t n = spec.rows.value_or(
      weak_rows.empty() ? strong_rows.size() : weak_rows.size());
  if (n > 0 && spec.mu > 0.0 && strong_rows.empty()) {
    throw ValidationError("mu > 0 but the strong-like manifest is empty");
  }
  if (n > 0 && spec.mu < 1.0 && weak_rows.empty()) {
    throw ValidationError("mu < 1 but the weak manifest is empty");
  }

  Manifest manifest;
  manifest.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(spec.seed, {kManifestStream, spec.epoch, i});
    ManifestRow row;
    if (rng.Bernoulli(spec.mu)) {
      row.source = ManifestSource::kStrongLike;
      const ClipView& view = strong_rows[rng.Below(strong_rows.size())];
      CropLabel crop = SampleCrop(view, rng, spec.framing);
      row.clip = crop.clip;
      row.crop_start = crop.crop_start;
      row.classes = std::move(crop.classes);
      ++manifest.strong_like_rows;
    } else {
      row.source = ManifestSource::kWeak;
      const auto& [clip, classes] = weak_rows[rng.Below(weak_rows.size())];
      const Micros slack = clip->duration() - spec.framing.frame_duration;
      row.clip = *clip;
      row.crop_start =
          slack > Micros{0}
              ? Micros{static_cast<std::int64_t>(
                    rng.Below(static_cast<std::uint64_t>(slack.count()) + 1))}
              : Micros{0};
      row.classes = *classes;
    }
    manifest.rows.push_back(std::move(row));
  }
  manifest.realized_fraction =
      n == 0 ? 0.0
             : static_cast<double>(manifest.strong_like_rows) /
                   static_cast<double>(n);
  return manifest;
}

std::string WriteManifestTsv(const Manifest& manifest, const MixSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "# mu=" << spec.mu << " seed=" << spec.seed << " epoch=" << spec.epoch
      << " rows=" << manifest.rows.size()
      << " strong_like_rows=" << manifest.strong_like_rows
      << " realized_strong_fraction=" << manifest.realized_fraction << "\n";
  out << "row\tsegment_id\tsource\tcrop_start_seconds\tlabels\n";
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    const ManifestRow& r = manifest.rows[i];
    out << i << '\t' << r.clip.SegmentId() << '\t' << ToString(r.source)
        << '\t' << FormatSeconds(r.crop_start) << '\t' << JoinClasses(r.classes)
        << '\n';
  }
  return out.str();
}

}  // namespace strongset
