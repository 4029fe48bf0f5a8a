// Copyright 2026 The pnf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pnf/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace pnf {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(RngTest, StreamsDiffer) {
  Rng a(42, 0), b(42, 1), c(43, 0);
  EXPECT_NE(a.next(), b.next());
  EXPECT_NE(Rng(42, 0).next(), c.next());
}

TEST(RngTest, UniformRanges) {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = rng.uniform_open();
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(RngTest, IndexIsUnbiased) {
  Rng rng(11);
  std::vector<int> counts(3, 0);
  const int draws = 300000;
  for (int i = 0; i < draws; ++i) ++counts[rng.index(3)];
  for (const int c : counts) {
    EXPECT_NEAR(c / static_cast<double>(draws), 1.0 / 3.0, 0.005);
  }
  EXPECT_EQ(Rng(1).index(1), 0u);
}

TEST(RngTest, LaplaceMoments) {
  Rng rng(3);
  const double scale = 2.0;
  const int draws = 400000;
  double sum = 0.0, abs_sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.laplace(scale);
    sum += x;
    abs_sum += std::abs(x);
  }
  // E|X| = b; sd of |X| is b, of X is b sqrt 2.
  EXPECT_NEAR(sum / draws, 0.0, 5 * scale * std::sqrt(2.0 / draws));
  EXPECT_NEAR(abs_sum / draws, scale, 5 * scale / std::sqrt(draws));
}

TEST(RngTest, PinnedSequence) {
  // mt19937_64 and seed_seq are fully specified, so these hold on every
  // conforming standard library. Documented sampler outputs rely on it.
  Rng rng(kDefaultSeed);
  EXPECT_EQ(rng.next(), 15973504671567154546ull);
  EXPECT_EQ(rng.next(), 70133661096392717ull);
  EXPECT_EQ(Rng(1, 2).next(), 960524919686204622ull);
  EXPECT_EQ(Rng(kDefaultSeed, 5).index(1000), 765u);
}

}  // namespace
}  // namespace pnf
