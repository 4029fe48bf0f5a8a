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

#include "pnf/exact.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "pnf/analysis.hpp"
#include "pnf/error.hpp"
#include "pnf/lattice.hpp"
#include "pnf/rng.hpp"

namespace pnf {
namespace {

// Reference values below come from tests/oracles/frozen.py (mpmath,
// 50 digits; brute-force permutation sums and direct quadrature).
const QualityScores kSix{0.0, -0.5, -1.25, -2.0, -2.0, -4.125};
const Vector kSixPf = (Vector(6) << 0.41776615911771168, 0.25513746689847882,
                       0.14173289653553244, 0.082807833193445155,
                       0.082807833193445155, 0.019747811061386757)
                          .finished();
const Vector kSixEm = (Vector(6) << 0.35973607197692381, 0.25991915209508076,
                       0.15963191427889367, 0.098039516714883656,
                       0.098039516714883656, 0.024633828219334447)
                          .finished();

void ExpectPmf(const Vector& actual, const Vector& expected, double tol) {
  ASSERT_EQ(actual.size(), expected.size());
  for (Index i = 0; i < actual.size(); ++i) {
    EXPECT_NEAR(actual[i], expected[i], tol) << "entry " << i;
  }
}

TEST(ExponentialPmfTest, FrozenValues) {
  const PrivacyParams params(1.3);
  ExpectPmf(pmf_exponential(kSix, params).probs, kSixEm, 1e-15);
  const Vector two = pmf_exponential({-2.0, 0.0}, PrivacyParams(1.0)).probs;
  EXPECT_NEAR(two[0], std::exp(-1.0) / (1.0 + std::exp(-1.0)), 1e-16);
  EXPECT_NEAR(two[0], 0.268941, 1e-6);
}

TEST(ExponentialPmfTest, Trivial) {
  const PrivacyParams params(2.0);
  EXPECT_EQ(pmf_exponential({3.0}, params).probs, Vector::Ones(1));
  ExpectPmf(pmf_exponential({1.0, 1.0}, params).probs,
            Vector::Constant(2, 0.5), 0.0);
}

TEST(PermuteAndFlipPmfTest, AllRoutesMatchFrozenValues) {
  const PrivacyParams params(1.3);
  ExpectPmf(pmf_pf_permutation(kSix, params).probs, kSixPf, 1e-14);
  ExpectPmf(pmf_pf_inclusion_exclusion(kSix, params).probs, kSixPf, 1e-14);
  ExpectPmf(pmf_pf_dp(kSix, params).probs, kSixPf, 1e-14);
  EXPECT_EQ(pmf_pf_dp(kSix, params).method, PmfMethod::kPfDynamicProgram);
}

TEST(PermuteAndFlipPmfTest, TwoCandidates) {
  // Pr[low] = p / 2 for two candidates.
  const Vector at1 = pmf_pf_dp({-2.0, 0.0}, PrivacyParams(1.0)).probs;
  EXPECT_NEAR(at1[0], 0.18393972058572116, 1e-16);
  EXPECT_NEAR(at1[1], 0.81606027941427884, 1e-16);
  const Vector at2 = pmf_pf_dp({-2.0, 0.0}, PrivacyParams(2.0)).probs;
  EXPECT_NEAR(at2[0], 0.067667641618306346, 1e-16);
}

TEST(PermuteAndFlipPmfTest, MonotonicFlagSharpensCoins) {
  // Under the flag, eps = 1 behaves like eps = 2 without it.
  const QualityScores q{-2.0, 0.0, -2.0, -6.0};
  const Vector expected =
      (Vector(4) << 0.064562908026347104, 0.86974284540745991,
       0.064562908026347104, 0.0011313385398458823)
          .finished();
  ExpectPmf(pmf_pf_dp(q, PrivacyParams(1.0, 1.0, true)).probs, expected,
            1e-15);
  ExpectPmf(pmf_pf_permutation(q, PrivacyParams(1.0, 1.0, true)).probs,
            expected, 1e-15);
}

TEST(PermuteAndFlipPmfTest, Trivial) {
  const PrivacyParams params(0.5);
  using Pmf = SelectionDistribution (*)(const QualityScores&,
                                       const PrivacyParams&);
  for (const Pmf pmf : {static_cast<Pmf>(pmf_pf_dp), Pmf{pmf_pf_permutation},
                        Pmf{pmf_pf_inclusion_exclusion}}) {
    EXPECT_EQ(pmf({-4.0}, params).probs, Vector::Ones(1));
    ExpectPmf(pmf({0.0, 0.0, 0.0}, params).probs, Vector::Constant(3, 1.0 / 3),
              1e-15);
  }
}

TEST(PermuteAndFlipPmfTest, OracleCapsAreEnforced) {
  const PrivacyParams params(1.0);
  const QualityScores eleven(Vector::LinSpaced(11, -5.0, 0.0));
  const QualityScores twentyone(Vector::LinSpaced(21, -5.0, 0.0));
  EXPECT_THROW(pmf_pf_permutation(eleven, params), SizeError);
  EXPECT_NO_THROW(pmf_pf_inclusion_exclusion(eleven, params));
  EXPECT_THROW(pmf_pf_inclusion_exclusion(twentyone, params), SizeError);
  EXPECT_NO_THROW(pmf_pf_dp(twentyone, params));
}

TEST(PermuteAndFlipPmfTest, RandomInstanceMatchesPermutationOracle) {
  Rng rng(7);
  const QualityScores q = random_scores(rng, 9);
  const PrivacyParams params(1.0);
  ExpectPmf(pmf_pf_dp(q, params).probs, pmf_pf_permutation(q, params).probs,
            1e-10);
}

TEST(PermuteAndFlipPmfTest, OracleEquivalenceSweep) {
  const OracleReport report = verify_oracles(500, 2024);
  EXPECT_EQ(report.instances, 500u);
  EXPECT_LE(report.max_permutation_diff, 1e-10);
  EXPECT_LE(report.max_subset_diff, 1e-10);
}

TEST(PermuteAndFlipPmfTest, PmfInvariants) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Index>(1 + rng.index(12));
    const QualityScores q = random_scores(rng, n);
    const PrivacyParams params(0.1 + 4.0 * rng.uniform());
    const Vector p = pmf_pf_dp(q, params).probs;
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    EXPECT_GE(p.minCoeff(), 0.0);
    // Raising one score never lowers its probability.
    const Index r = static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
    Vector raised = q.values();
    raised[r] += 0.75;
    EXPECT_GE(pmf_pf_dp(QualityScores(raised), params).probs[r], p[r] - 1e-13);
  }
}

TEST(PermuteAndFlipPmfTest, PermutationFactorIsMonotone) {
  // g_r = probs_r / p_r is nondecreasing in q_r.
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<Index>(2 + rng.index(7));
    const QualityScores q = random_scores(rng, n);
    const PrivacyParams params(0.2 + 3.0 * rng.uniform());
    const Vector probs = pmf_pf_permutation(q, params).probs;
    const Vector p = coin_probabilities(q, params).p;
    for (Index r = 0; r < n; ++r) {
      for (Index s = 0; s < n; ++s) {
        if (q[r] <= q[s] && p[r] > 0) {
          EXPECT_LE(probs[r] / p[r], probs[s] / p[s] + 1e-12);
        }
      }
    }
  }
}

TEST(PermuteAndFlipPmfTest, PermutationInvariantBitForBit) {
  const PrivacyParams params(0.9);
  const QualityScores q{-0.1, 0.0, -3.0, -0.1, -7.5};
  const QualityScores permuted{-7.5, -0.1, -0.1, 0.0, -3.0};
  const Vector a = pmf_pf_dp(q, params).probs;
  const Vector b = pmf_pf_dp(permuted, params).probs;
  EXPECT_EQ(a[4], b[0]);
  EXPECT_EQ(a[0], b[1]);
  EXPECT_EQ(a[3], b[2]);
  EXPECT_EQ(a[1], b[3]);
  EXPECT_EQ(a[2], b[4]);
}

TEST(DpTablesTest, TablesMatchDefinition) {
  const Vector p = (Vector(4) << 0.5, 1.0, 0.25, 0.125).finished();
  const DpTables t = dp_tables(p);
  // S(k, r): elementary symmetric sums of the first r coins.
  EXPECT_DOUBLE_EQ(t.S(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.S(1, 4), 1.875);
  EXPECT_DOUBLE_EQ(t.S(2, 2), 0.5);
  EXPECT_DOUBLE_EQ(t.S(4, 4), 0.5 * 0.25 * 0.125);
  // T(k, r): the same sums with candidate r left out.
  EXPECT_DOUBLE_EQ(t.T(1, 1), 0.875);
  EXPECT_DOUBLE_EQ(t.T(3, 0), 0.25 * 0.125);
  const Vector pmf = pmf_from_tables(t, p);
  const QualityScores q{-2.0 * std::log(2.0), 0.0, -4.0 * std::log(2.0),
                        -6.0 * std::log(2.0)};
  ExpectPmf(pmf, pmf_pf_permutation(q, PrivacyParams(1.0)).probs, 1e-15);
}

TEST(DpPrecisionTest, DoubleLosesLargeInstancesMpfrDoesNot) {
  // 1024 coins close to 1: the alternating sum cancels ~1000 bits.
  const Index n = 1024;
  const QualityScores q(Vector::LinSpaced(n, -1.0, 0.0));
  const PrivacyParams params(1.0);
  EXPECT_GT(pf_dp_precision_bits(coin_probabilities(q, params).p), 53);
  const Vector accurate = pmf_pf_dp(q, params).probs;
  const Vector reference = pmf_pf_dp(q, params, 2048).probs;
  EXPECT_LE((accurate - reference).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(accurate.sum(), 1.0, 1e-12);
  const Vector naive = pmf_pf_dp(q, params, 53).probs;
  EXPECT_GT((naive - reference).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(DpPrecisionTest, SmallInstancesStayInDouble) {
  EXPECT_EQ(pf_dp_precision_bits(Vector::Constant(1, 1.0)), 53);
  EXPECT_EQ(pf_dp_precision_bits((Vector(3) << 1.0, 0.1, 0.01).finished()),
            53);
}

TEST(DpPrecisionTest, LargeRandomInstanceIsFastAndNormalized) {
  Rng rng(1);
  const QualityScores q = random_scores(rng, 2000, 50.0);
  const auto start = std::chrono::steady_clock::now();
  const Vector p = pmf_pf_dp(q, PrivacyParams(1.0)).probs;
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_GE(p.minCoeff(), 0.0);
  EXPECT_LT(seconds, 30.0);
}

TEST(NoisyMaxPmfTest, TwoCandidatesClosedForm) {
  // Laplace difference tail: e^{-x/b}(1/2 + x/(4b)) at x = 2, b = 2.
  const SelectionDistribution d =
      pmf_noisy_max({-2.0, 0.0}, PrivacyParams(1.0));
  EXPECT_NEAR(d.probs[0], std::exp(-1.0) * 0.75, 1e-8);
  EXPECT_NEAR(d.probs[0], 0.275908, 1e-5);
  EXPECT_LT(d.normalization_defect, 1e-8);
  EXPECT_EQ(d.method, PmfMethod::kNoisyMaxQuadrature);
}

TEST(NoisyMaxPmfTest, FrozenThreeCandidateValues) {
  ExpectPmf(pmf_noisy_max({0.0, -1.0, -2.5}, PrivacyParams(1.0)).probs,
            (Vector(3) << 0.54044994664521169, 0.32033501421730911,
             0.13921503913747921)
                .finished(),
            1e-8);
  ExpectPmf(pmf_noisy_max({0.0, 0.0, -3.0}, PrivacyParams(0.7, 2.0)).probs,
            (Vector(3) << 0.39134003863654499, 0.39134003863654499,
             0.21731992272691001)
                .finished(),
            1e-8);
}

TEST(NoisyMaxPmfTest, SymmetryAndTrivial) {
  ExpectPmf(pmf_noisy_max({0.0, 0.0}, PrivacyParams(1.0)).probs,
            Vector::Constant(2, 0.5), 1e-8);
  EXPECT_EQ(pmf_noisy_max({1.0}, PrivacyParams(1.0)).probs, Vector::Ones(1));
}

TEST(NoisyMaxPmfTest, ReportsNonConvergence) {
  QuadratureConfig config;
  config.abs_tolerance = 1e-30;
  config.max_depth = 3;
  try {
    pmf_noisy_max({0.0, -1.0, -2.0}, PrivacyParams(1.0), config);
    FAIL() << "expected AccuracyError";
  } catch (const AccuracyError& e) {
    EXPECT_GT(e.estimate(), 0.0);
    EXPECT_LT(e.estimate(), 1.0);
  }
}

TEST(RecurrenceTest, Examples) {
  const RecurrenceReport all_max = verify_recurrence({0.0, 0.0, 0.0},
                                                     PrivacyParams(1.0));
  EXPECT_EQ(all_max.case2_max_violation, 0.0);
  EXPECT_LE(verify_recurrence({-2.0, 0.0}, PrivacyParams(1.0)).max_violation(),
            1e-16);
}

TEST(RecurrenceTest, RandomLatticeVectors) {
  Rng rng(17);
  const PrivacyParams params(1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector q(5);
    for (Index i = 0; i < 5; ++i) {
      q[i] = -2.0 * static_cast<double>(rng.index(4));
    }
    EXPECT_LT(verify_recurrence(QualityScores(q), params).max_violation(),
              1e-12);
  }
}

}  // namespace
}  // namespace pnf
