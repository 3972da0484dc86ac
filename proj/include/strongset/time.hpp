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

#ifndef STRONGSET_TIME_HPP_
#define STRONGSET_TIME_HPP_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace strongset {

// Every time in the toolkit is an integer count of microseconds. Label files
// carry at most millisecond resolution, so comparisons against the 50%
// thresholds are exact.
using Micros = std::chrono::microseconds;

constexpr Micros kFrameDuration{960'000};
constexpr Micros kClipDuration{10'000'000};

// Parses a decimal seconds value ("1.25", "30.000", "1e-3") and rounds to the
// nearest microsecond. Returns false on malformed or non-finite input.
bool ParseSeconds(std::string_view text, Micros& out);

Micros SecondsToMicros(double seconds);
double ToSeconds(Micros t);

// Fixed-point seconds: three decimals when the value is a whole number of
// milliseconds, six otherwise.
std::string FormatSeconds(Micros t);

}  // namespace strongset

#endif  // STRONGSET_TIME_HPP_
