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

#include "pnf/mechanisms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "pnf/analysis.hpp"
#include "pnf/error.hpp"
#include "pnf/exact.hpp"

namespace pnf {
namespace {

constexpr std::size_t kDraws = 1'000'000;

TEST(SamplerTest, SingleCandidateAlwaysWins) {
  const PrivacyParams params(0.3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(sample_permute_and_flip({0.0}, params, seed).index, 0);
    EXPECT_EQ(sample_exponential({0.0}, params, seed).index, 0);
    EXPECT_EQ(sample_exponential_rejection({0.0}, params, seed).index, 0);
    EXPECT_EQ(sample_report_noisy_max({0.0}, params, seed).index, 0);
  }
}

TEST(SamplerTest, RejectionAcceptsFirstDrawWhenOnlyCandidate) {
  SamplerOptions options;
  options.record_trace = true;
  const SamplerResult result =
      sample_exponential_rejection({5.0}, PrivacyParams(1.0), 3, options);
  ASSERT_TRUE(result.trace.has_value());
  EXPECT_EQ(result.trace->visited.size(), 1u);
  EXPECT_TRUE(result.trace->heads[0]);
}

TEST(SamplerTest, DeterministicGivenSeed) {
  const QualityScores q{-1.0, 0.0, -0.5, -3.0, 0.0};
  const PrivacyParams params(1.0);
  SamplerOptions options;
  options.record_trace = true;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = sample_permute_and_flip(q, params, seed, options);
    const auto b = sample_permute_and_flip(q, params, seed, options);
    EXPECT_EQ(a.index, b.index);
    EXPECT_EQ(a.trace->visited, b.trace->visited);
    EXPECT_EQ(a.trace->heads, b.trace->heads);
    const auto c = sample_report_noisy_max(q, params, seed, options);
    const auto d = sample_report_noisy_max(q, params, seed, options);
    EXPECT_EQ(c.index, d.index);
    EXPECT_EQ(c.trace->noisy_scores, d.trace->noisy_scores);
  }
  EXPECT_EQ(sample_many(SamplerKind::kExponential, q, params, 100, 9),
            sample_many(SamplerKind::kExponential, q, params, 100, 9));
}

TEST(SamplerTest, PermuteAndFlipTraceIsConsistent) {
  const QualityScores q{-1.0, 0.0, -0.5, -3.0};
  SamplerOptions options;
  options.record_trace = true;
  for (const PfOrder order : {PfOrder::kShuffleFirst, PfOrder::kWithoutReplacement}) {
    options.pf_order = order;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto result =
          sample_permute_and_flip(q, PrivacyParams(1.0), seed, options);
      const SamplerTrace& trace = *result.trace;
      ASSERT_FALSE(trace.visited.empty());
      EXPECT_EQ(trace.visited.back(), result.index);
      EXPECT_TRUE(trace.heads.back());
      for (std::size_t i = 0; i + 1 < trace.heads.size(); ++i) {
        EXPECT_FALSE(trace.heads[i]);
        // The maximum always flips heads, so it can only be last.
        EXPECT_NE(trace.visited[i], 1);
      }
    }
  }
}

TEST(SamplerTest, NoTraceUnlessRequested) {
  EXPECT_FALSE(
      sample_permute_and_flip({0.0, -1.0}, PrivacyParams(1.0), 1).trace);
}

TEST(SamplerTest, RejectionCapThrows) {
  Vector scores = Vector::Constant(1000, -1e6);
  scores[0] = 0.0;
  SamplerOptions options;
  options.max_iterations = 1;
  // Only the first of 1000 candidates can be accepted.
  int throws = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    try {
      sample_exponential_rejection(QualityScores(scores), PrivacyParams(1.0),
                                   seed, options);
    } catch (const std::runtime_error&) {
      ++throws;
    }
  }
  EXPECT_GE(throws, 15);
}

TEST(SamplerTest, ParseNames) {
  EXPECT_EQ(parse_mechanism("pf"), Mechanism::kPermuteAndFlip);
  EXPECT_EQ(parse_mechanism("exponential"), Mechanism::kExponential);
  EXPECT_EQ(parse_mechanism("rnm"), Mechanism::kReportNoisyMax);
  EXPECT_THROW(parse_mechanism("laplace"), InvalidArgument);
  EXPECT_EQ(parse_sampler("pf-wr"),
            SamplerKind::kPermuteAndFlipWithoutReplacement);
  EXPECT_EQ(target_mechanism(SamplerKind::kExponentialRejection),
            Mechanism::kExponential);
  EXPECT_THROW(parse_sampler("gumbel"), InvalidArgument);
}

TEST(SamplerTest, TotalVariation) {
  const Vector a = (Vector(3) << 0.5, 0.5, 0.0).finished();
  const Vector b = (Vector(3) << 0.25, 0.25, 0.5).finished();
  EXPECT_DOUBLE_EQ(total_variation(a, b), 0.5);
  EXPECT_THROW(total_variation(a, Vector::Zero(2)), InvalidArgument);
  EXPECT_EQ(empirical_pmf({0, 2, 2, 2}, 3),
            (Vector(3) << 0.25, 0.0, 0.75).finished());
}

TEST(SamplerFidelityTest, SymmetricScoresAreUniform) {
  const PrivacyParams params(1.0);
  for (const SamplerKind kind :
       {SamplerKind::kPermuteAndFlip, SamplerKind::kExponential,
        SamplerKind::kExponentialRejection, SamplerKind::kReportNoisyMax}) {
    const Vector freq =
        empirical_pmf(sample_many(kind, {0.0, 0.0, 0.0}, params, 100000, 1), 3);
    EXPECT_LT(total_variation(freq, Vector::Constant(3, 1.0 / 3)), 0.01)
        << to_string(kind);
  }
}

TEST(SamplerFidelityTest, TwoCandidateClosedForms) {
  const QualityScores q{-2.0, 0.0};
  const PrivacyParams params(1.0);
  const double pf = empirical_pmf(
      sample_many(SamplerKind::kPermuteAndFlip, q, params, kDraws, 11), 2)[0];
  EXPECT_NEAR(pf, std::exp(-1.0) / 2, 0.002);
  const double em = empirical_pmf(
      sample_many(SamplerKind::kExponential, q, params, kDraws, 12), 2)[0];
  EXPECT_NEAR(em, std::exp(-1.0) / (1 + std::exp(-1.0)), 0.002);
  const double rnm = empirical_pmf(
      sample_many(SamplerKind::kReportNoisyMax, q, params, kDraws, 13), 2)[0];
  EXPECT_NEAR(rnm, std::exp(-1.0) * 0.75, 0.002);
}

TEST(SamplerFidelityTest, RejectionMatchesInverseCdf) {
  const QualityScores q{-2.0, 0.0};
  const PrivacyParams params(1.0);
  const Vector a = empirical_pmf(
      sample_many(SamplerKind::kExponential, q, params, kDraws, 21), 2);
  const Vector b = empirical_pmf(
      sample_many(SamplerKind::kExponentialRejection, q, params, kDraws, 22),
      2);
  EXPECT_LT(total_variation(a, b), 0.005);
}

TEST(SamplerFidelityTest, ShuffleAndPoolOrdersAgree) {
  Rng rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const auto n = static_cast<Index>(2 + rng.index(7));
    const QualityScores q = random_scores(rng, n, 4.0);
    const PrivacyParams params(1.0);
    const Vector a = empirical_pmf(
        sample_many(SamplerKind::kPermuteAndFlip, q, params, kDraws, 40 + trial),
        n);
    const Vector b = empirical_pmf(
        sample_many(SamplerKind::kPermuteAndFlipWithoutReplacement, q, params,
                    kDraws, 50 + trial),
        n);
    EXPECT_LT(total_variation(a, b), 0.005);
  }
}

TEST(SamplerFidelityTest, EmpiricalMatchesExactPmf) {
  Rng rng(77);
  const QualityScores q = random_scores(rng, 12, 6.0);
  const PrivacyParams params(0.8);
  for (const SamplerKind kind :
       {SamplerKind::kPermuteAndFlip,
        SamplerKind::kPermuteAndFlipWithoutReplacement,
        SamplerKind::kExponential, SamplerKind::kExponentialRejection,
        SamplerKind::kReportNoisyMax}) {
    const Vector freq =
        empirical_pmf(sample_many(kind, q, params, kDraws, 5), q.size());
    const Vector exact = exact_pmf(target_mechanism(kind), q, params).probs;
    EXPECT_LT(total_variation(freq, exact), 0.005) << to_string(kind);
  }
}

}  // namespace
}  // namespace pnf
