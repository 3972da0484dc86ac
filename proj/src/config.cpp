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

#include "strongset/config.hpp"

#include <charconv>
#include <cmath>

#include "strongset/error.hpp"

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

double ParseFraction(std::string_view value, std::size_t line_no,
                     bool allow_half_open) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() ||
      !std::isfinite(v)) {
    throw ParseError("expected a number, got '" + std::string(value) + "'",
                     line_no);
  }
  const bool ok = allow_half_open ? (v > 0.0 && v < 0.5) : (v > 0.0 && v <= 1.0);
  if (!ok) throw ParseError("value out of range", line_no);
  return v;
}

}  // namespace

ToolkitConfig ParseConfig(std::string_view text, ToolkitConfig config) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key = value", line_no);
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));

    if (key == "frame_dur") {
      Micros d{0};
      if (!ParseSeconds(value, d) || d <= Micros{0}) {
        throw ParseError("frame_dur must be a positive number of seconds",
                         line_no);
      }
      config.framing.frame_duration = d;
    } else if (key == "frame_fill_fraction") {
      config.framing.frame_fill_fraction = ParseFraction(value, line_no, false);
    } else if (key == "label_fraction") {
      config.framing.label_fraction = ParseFraction(value, line_no, false);
    } else if (key == "auc_clamp") {
      config.auc_clamp = ParseFraction(value, line_no, true);
    } else if (key == "pooling") {
      try {
        config.pooling = ParseNegativePooling(value);
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (key == "music_id") {
      if (value.empty()) throw ParseError("music_id is empty", line_no);
      config.music_id = std::string(value);
    } else {
      throw ParseError("unknown config key '" + std::string(key) + "'",
                       line_no);
    }
  }
  return config;
}

}  // namespace strongset
