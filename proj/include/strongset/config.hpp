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

#ifndef STRONGSET_CONFIG_HPP_
#define STRONGSET_CONFIG_HPP_

#include <string>
#include <string_view>

#include "strongset/framing.hpp"
#include "strongset/metrics.hpp"
#include "strongset/ontology.hpp"

namespace strongset {

// Tunables shared by the command-line tools. Defaults reproduce the standard
// evaluation setup: 0.96 s frames, inclusive 50% rules, AUC clamp 1e-6,
// balanced negatives.
struct ToolkitConfig {
  FramingConfig framing;
  NegativePooling pooling = NegativePooling::kBalanced;
  double auc_clamp = kDefaultAucClamp;
  std::string music_id{kDefaultMusicId};
};

// "key = value" lines; '#' starts a comment. Recognized keys: frame_dur
// (seconds), frame_fill_fraction, label_fraction, auc_clamp, pooling,
// music_id. Unknown keys and bad values throw ParseError with the line.
ToolkitConfig ParseConfig(std::string_view text, ToolkitConfig base = {});

}  // namespace strongset

#endif  // STRONGSET_CONFIG_HPP_
