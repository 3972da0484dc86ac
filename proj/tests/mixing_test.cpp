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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "strongset/config.hpp"
#include "strongset/error.hpp"
#include "strongset/random.hpp"

namespace strongset {
namespace {

Corpus WeakFixture(int clips) {
  std::string csv;
  for (int i = 0; i < clips; ++i) {
    csv += "w" + std::to_string(i) + ", 0.000, 10.000, \"/m/" + std::to_string(i % 3) + "\"\n";
  }
  return ParseWeakCsv(csv);
}

Corpus StrongFixture(int clips) {
  std::string tsv = "segment_id\tstart_time_seconds\tend_time_seconds\tlabel\n";
  for (int i = 0; i < clips; ++i) {
    tsv += "s" + std::to_string(i) + "_0\t0.0\t10.0\t/m/s\n";
  }
  return ParseStrongTsv(tsv);
}

std::size_t StrongLikeCount(const Manifest& m) {
  std::size_t n = 0;
  for (const auto& r : m.rows) n += r.source == ManifestSource::kStrongLike ? 1 : 0;
  return n;
}

TEST(MixManifestTest, EndpointsAreExact) {
  const Corpus weak = WeakFixture(50);
  const Corpus strong = StrongFixture(20);
  const Manifest zero = MixManifest(weak, strong, {.mu = 0.0, .seed = 3, .rows = 5000});
  EXPECT_EQ(StrongLikeCount(zero), 0u);
  const Manifest one = MixManifest(weak, strong, {.mu = 1.0, .seed = 3, .rows = 5000});
  EXPECT_EQ(StrongLikeCount(one), 5000u);
  EXPECT_EQ(one.realized_fraction, 1.0);

  // Only the drawn source needs rows.
  EXPECT_NO_THROW(MixManifest(weak, Corpus{}, {.mu = 0.0}));
  EXPECT_NO_THROW(MixManifest(Corpus{}, strong, {.mu = 1.0}));
}

TEST(MixManifestTest, FractionNearMu) {
  const Manifest m =
      MixManifest(WeakFixture(50), StrongFixture(20), {.mu = 0.8, .seed = 1, .rows = 10000});
  EXPECT_NEAR(m.realized_fraction, 0.8, 0.02);
  EXPECT_EQ(m.strong_like_rows, StrongLikeCount(m));
}

TEST(MixManifestTest, LawOfLargeNumbers) {
  const Corpus weak = WeakFixture(10);
  const Corpus strong = StrongFixture(10);
  constexpr double n = 1e5;
  for (const double mu : {0.2, 0.5, 0.8}) {
    const Manifest m =
        MixManifest(weak, strong, {.mu = mu, .seed = 77, .rows = static_cast<std::size_t>(n)});
    EXPECT_LE(std::abs(m.realized_fraction - mu), 3 * std::sqrt(mu * (1 - mu) / n)) << mu;
  }
}

TEST(MixManifestTest, Validation) {
  const Corpus weak = WeakFixture(3);
  const Corpus strong = StrongFixture(3);
  EXPECT_THROW(MixManifest(weak, strong, {.mu = -0.1}), ValidationError);
  EXPECT_THROW(MixManifest(weak, strong, {.mu = 1.5}), ValidationError);
  EXPECT_THROW(MixManifest(weak, strong, {.mu = std::nan("")}), ValidationError);
  EXPECT_THROW(MixManifest(weak, Corpus{}, {.mu = 0.5}), ValidationError);
}

TEST(MixManifestTest, RowsDefaultAndLabels) {
  const Corpus weak = WeakFixture(40);
  const Manifest m = MixManifest(weak, StrongFixture(5), {.mu = 0.5, .seed = 9});
  ASSERT_EQ(m.rows.size(), 40u);
  for (const auto& r : m.rows) {
    EXPECT_GE(r.crop_start, Micros{0});
    EXPECT_LE(r.crop_start, SecondsToMicros(10 - 0.96));
    if (r.source == ManifestSource::kStrongLike) {
      EXPECT_EQ(r.classes, ClassSet{"/m/s"});
    } else {
      ASSERT_EQ(r.classes.size(), 1u);
      EXPECT_EQ(r.clip.ytid[0], 'w');
    }
  }
}

TEST(MixManifestTest, DeterministicPerSeedAndEpoch) {
  const Corpus weak = WeakFixture(30);
  const Corpus strong = StrongFixture(30);
  const MixSpec spec{.mu = 0.5, .seed = 42, .epoch = 0, .rows = 500};
  const std::string a = WriteManifestTsv(MixManifest(weak, strong, spec), spec);
  EXPECT_EQ(a, WriteManifestTsv(MixManifest(weak, strong, spec), spec));

  MixSpec next = spec;
  next.epoch = 1;
  EXPECT_NE(a, WriteManifestTsv(MixManifest(weak, strong, next), next));
  MixSpec reseeded = spec;
  reseeded.seed = 43;
  EXPECT_NE(a, WriteManifestTsv(MixManifest(weak, strong, reseeded), reseeded));
  EXPECT_EQ(a.substr(0, 6), "# mu=0");
  EXPECT_NE(a.find("row\tsegment_id\tsource\tcrop_start_seconds\tlabels\n"), std::string::npos);
}

TEST(CounterRngTest, StableAndUniform) {
  // Pinned outputs: the generator is part of the manifest format.
  CounterRng a(DeriveKey(1, {2, 3}));
  CounterRng b(1, {2, 3});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
  // Reference SplitMix64 stream from state 0.
  CounterRng zero(std::uint64_t{0});
  EXPECT_EQ(zero.NextU64(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(zero.NextU64(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(HashString(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(HashString("a"), 0xaf63dc4c8601ec8cULL);

  CounterRng rng(5, {});
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.Below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (const int c : counts) EXPECT_NEAR(c, 10000, 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.Uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_FALSE(rng.Bernoulli(0.0));
  EXPECT_TRUE(rng.Bernoulli(1.0));
}

TEST(ConfigTest, OverridesAndErrors) {
  const ToolkitConfig c = ParseConfig(
      "# tuned\nframe_dur = 1.0\npooling = pooled  # ablation\nauc_clamp=0.001\nmusic_id = /m/x\n");
  EXPECT_EQ(c.framing.frame_duration, SecondsToMicros(1.0));
  EXPECT_EQ(c.pooling, NegativePooling::kPooled);
  EXPECT_EQ(c.auc_clamp, 0.001);
  EXPECT_EQ(c.music_id, "/m/x");
  EXPECT_EQ(ParseConfig("").framing.frame_duration, kFrameDuration);

  try {
    ParseConfig("frame_dur = 1\nbogus = 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(ParseConfig("auc_clamp = 0.5\n"), ParseError);
  EXPECT_THROW(ParseConfig("frame_dur = -1\n"), ParseError);
  EXPECT_THROW(ParseConfig("pooling = sometimes\n"), ParseError);
  EXPECT_THROW(ParseConfig("frame_dur\n"), ParseError);
}

}  // namespace
}  // namespace strongset
