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

#ifndef STRONGSET_MIXING_HPP_
#define STRONGSET_MIXING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strongset/corpus.hpp"
#include "strongset/framing.hpp"

namespace strongset {

enum class ManifestSource { kWeak, kStrongLike };
std::string_view ToString(ManifestSource source);

struct MixSpec {
  // Probability of drawing a row from the strong-like (strong or diffuse)
  // source. 0 selects only weak rows, 1 only strong-like rows.
  double mu = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  // Defaults to the number of weak clips.
  std::optional<std::size_t> rows;
  FramingConfig framing;
};

struct ManifestRow {
  ClipId clip;
  ManifestSource source = ManifestSource::kWeak;
  Micros crop_start{0};
  ClassSet classes;
};

struct Manifest {
  std::vector<ManifestRow> rows;
  std::size_t strong_like_rows = 0;
  double realized_fraction = 0.0;  // strong_like_rows / rows
};

// Row i draws from its own counter stream keyed by (seed, epoch, i): a
// Bernoulli(mu) source choice, a uniform clip of that source, then a uniform
// crop start. Weak rows carry the clip's weak labels; strong-like rows are
// labeled by the frame rule on the crop window. Throws ValidationError for mu outside [0, 1] or
// when a source that can be drawn is empty.
Manifest MixManifest(const Corpus& weak, const Corpus& strong_like,
                     const MixSpec& spec);

// TSV with a '#' provenance line, then
//   row  segment_id  source  crop_start_seconds  labels
std::string WriteManifestTsv(const Manifest& manifest, const MixSpec& spec);

}  // namespace strongset

#endif  // STRONGSET_MIXING_HPP_
