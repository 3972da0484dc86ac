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

#include "strongset/time.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace strongset {

bool ParseSeconds(std::string_view text, Micros& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return false;
  if (!std::isfinite(value)) return false;
  out = SecondsToMicros(value);
  return true;
}

Micros SecondsToMicros(double seconds) {
  return Micros{std::llround(seconds * 1e6)};
}

double ToSeconds(Micros t) { return static_cast<double>(t.count()) / 1e6; }

std::string FormatSeconds(Micros t) {
  const long long us = t.count();
  const bool negative = us < 0;
  const unsigned long long mag =
      negative ? static_cast<unsigned long long>(-us)
               : static_cast<unsigned long long>(us);
  char buf[48];
  if (mag % 1000 == 0) {
    std::snprintf(buf, sizeof(buf), "%s%llu.%03llu", negative ? "-" : "",
                  mag / 1'000'000, (mag % 1'000'000) / 1000);
  } else {
    std::snprintf(buf, sizeof(buf), "%s%llu.%06llu", negative ? "-" : "",
                  mag / 1'000'000, mag % 1'000'000);
  }
  return buf;
}

}  // namespace strongset
