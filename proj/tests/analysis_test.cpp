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

#include "pnf/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pnf/error.hpp"

namespace pnf {
namespace {

// Reference values are from tests/oracles/frozen.py unless noted.

TEST(ExpectedErrorTest, Examples) {
  const QualityScores q{-2.0, 0.0};
  const PrivacyParams params(1.0);
  EXPECT_NEAR(expected_error(pmf_pf_dp(q, params), q), 2 * 0.18393972058572116,
              1e-15);
  EXPECT_NEAR(expected_error(pmf_exponential(q, params), q), 0.537883, 1e-6);
  const QualityScores flat{3.0, 3.0, 3.0};
  EXPECT_EQ(expected_error(pmf_pf_dp(flat, params), flat), 0.0);
  EXPECT_THROW(expected_error(pmf_pf_dp(q, params), flat), InvalidArgument);
}

TEST(ErrorCcdfTest, ClosedAtThreshold) {
  const QualityScores q{-2.0, 0.0};
  const SelectionDistribution pf = pmf_pf_dp(q, PrivacyParams(1.0));
  EXPECT_EQ(error_ccdf(pf, q, 0.0), 1.0);
  EXPECT_NEAR(error_ccdf(pf, q, 2.0), 0.18393972058572116, 1e-15);
  EXPECT_NEAR(error_ccdf(pf, q, 1.0), 0.18393972058572116, 1e-15);
  EXPECT_EQ(error_ccdf(pf, q, 2.5), 0.0);
}

TEST(ErrorProfileTest, CcdfAtDistinctGaps) {
  const QualityScores q{-1.0, 0.0, -3.0, -1.0};
  const SelectionDistribution pf = pmf_pf_dp(q, PrivacyParams(1.0));
  const ErrorProfile profile = error_profile(pf, q);
  ASSERT_EQ(profile.ccdf.size(), 3u);
  EXPECT_EQ(profile.ccdf[0].first, 0.0);
  EXPECT_EQ(profile.ccdf[0].second, 1.0);
  EXPECT_EQ(profile.ccdf[1].first, 1.0);
  EXPECT_EQ(profile.ccdf[2].first, 3.0);
  EXPECT_GE(profile.ccdf[1].second, profile.ccdf[2].second);
  // E = sum over gaps of (t_i - t_{i-1}) CCDF(t_i).
  EXPECT_NEAR(profile.expected_error,
              1.0 * profile.ccdf[1].second + 2.0 * profile.ccdf[2].second,
              1e-15);
}

TEST(DominanceTest, Examples) {
  const DominanceReport flat = check_dominance({0.0, 0.0, 0.0}, PrivacyParams(1.0));
  EXPECT_EQ(flat.ratio, 1.0);
  EXPECT_TRUE(flat.holds());

  const DominanceReport two = check_dominance({-2.0, 0.0}, PrivacyParams(1.0));
  EXPECT_TRUE(two.holds());
  EXPECT_NEAR(two.ratio, 2.0 / (1.0 + std::exp(-1.0)), 1e-14);
  EXPECT_NEAR(two.ratio, 1.46211, 1e-5);
  ASSERT_EQ(two.table.size(), 2u);
  EXPECT_NEAR(two.table[1][1], 0.18393972058572116, 1e-15);
  EXPECT_NEAR(two.table[1][2], 0.268941, 1e-6);
}

TEST(DominanceTest, RandomInstances) {
  const DominanceSweep sweep = verify_dominance(1000, 8);
  EXPECT_EQ(sweep.instances, 1000u);
  EXPECT_EQ(sweep.violations, 0u);
  EXPECT_LE(sweep.max_ccdf_violation, 1e-10);
  EXPECT_LE(sweep.max_error_violation, 1e-10);
}

TEST(ErrorRatioTest, Conventions) {
  EXPECT_EQ(error_ratio(0.0, 0.0), 1.0);
  EXPECT_EQ(error_ratio(1.0, 0.0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(error_ratio(3.0, 2.0), 1.5);
}

TEST(WorstCaseTest, FrozenClosedForms) {
  const PrivacyParams params(2.0);
  EXPECT_NEAR(worst_case_value(Mechanism::kExponential, 0.5, 3, params),
              0.34657359027997265, 1e-15);
  EXPECT_NEAR(worst_case_value(Mechanism::kPermuteAndFlip, 0.5, 3, params),
              0.28881132523331055, 1e-15);
  for (const Mechanism m : {Mechanism::kExponential, Mechanism::kPermuteAndFlip}) {
    EXPECT_EQ(worst_case_value(m, 1.0, 5, params), 0.0);
  }
}

TEST(WorstCaseTest, RejectsBadInput) {
  const PrivacyParams params(1.0);
  EXPECT_THROW(worst_case_value(Mechanism::kExponential, 0.0, 3, params),
               InvalidArgument);
  EXPECT_THROW(worst_case_value(Mechanism::kExponential, 1.5, 3, params),
               InvalidArgument);
  EXPECT_THROW(worst_case_value(Mechanism::kReportNoisyMax, 0.5, 3, params),
               InvalidArgument);
}

TEST(WorstCaseTest, ClosedFormsMatchExactPmfs) {
  for (const double eps : {0.3, 1.0, 4.0}) {
    const PrivacyParams params(eps);
    for (const Index n : {2, 3, 7, 50, 1024}) {
      for (const double p : {1e-6, 0.01, 0.3, 0.9}) {
        const QualityScores q = worst_case_scores(p, n, params);
        for (const Mechanism m :
             {Mechanism::kExponential, Mechanism::kPermuteAndFlip}) {
          EXPECT_NEAR(worst_case_value(m, p, n, params),
                      expected_error(exact_pmf(m, q, params), q), 1e-10)
              << to_string(m) << " n=" << n << " p=" << p << " eps=" << eps;
        }
      }
    }
  }
}

TEST(WorstCaseTest, TwoCandidateRatioApproachesTwo) {
  const PrivacyParams params(1.0);
  for (const double p : {1e-6, 1e-3, 0.1, 0.5, 0.99, 1.0 - 1e-9}) {
    const double em = worst_case_value(Mechanism::kExponential, p, 2, params);
    const double pf = worst_case_value(Mechanism::kPermuteAndFlip, p, 2, params);
    EXPECT_NEAR(em / pf, 2.0 / (1.0 + p), 1e-10);
  }
}

TEST(WorstCaseTest, Maximizers) {
  const PrivacyParams params(1.0);
  struct Case {
    Mechanism mechanism;
    Index n;
    double p;
    double value;
  };
  const Case cases[] = {
      {Mechanism::kExponential, 2, 0.2784645427610738, 0.55692908552214759},
      {Mechanism::kPermuteAndFlip, 2, 0.36787944117144232, 0.36787944117144232},
      {Mechanism::kExponential, 10, 0.12233366636410807, 2.2020059945539453},
      {Mechanism::kPermuteAndFlip, 10, 0.18412319487290825, 1.7864557641811595},
      {Mechanism::kExponential, 1024, 0.0043400486119480573, 8.8797394600457253},
      {Mechanism::kPermuteAndFlip, 1024, 0.0059036125075663569,
       8.5704212683929828},
  };
  for (const Case& c : cases) {
    const WorstCasePoint best = worst_case_maximize(c.mechanism, c.n, params);
    EXPECT_NEAR(best.value, c.value, 1e-12) << to_string(c.mechanism) << c.n;
    EXPECT_NEAR(best.p, c.p, 1e-5 * c.p) << to_string(c.mechanism) << c.n;
  }
}

TEST(WorstCaseTest, CurveEndsAtZero) {
  const WorstCaseCurve curve = worst_case_curve(
      Mechanism::kPermuteAndFlip, 4, PrivacyParams(1.0), {1e-3, 0.5, 1.0});
  ASSERT_EQ(curve.points.size(), 3u);
  EXPECT_EQ(curve.points.back().value, 0.0);
  for (const auto& point : curve.points) EXPECT_GE(point.value, 0.0);
  EXPECT_GE(curve.maximizer.value, curve.points[0].value);
}

TEST(BoundsTest, UtilityBound) {
  const UtilityBounds b = utility_bounds(1024, PrivacyParams(1.0), 3.0);
  EXPECT_NEAR(b.expected, 2 * std::log(1024.0), 1e-12);
  EXPECT_NEAR(b.expected, 13.8629, 1e-4);
  EXPECT_NEAR(b.tail, std::exp(-3.0), 1e-16);
  EXPECT_THROW(utility_bounds(0, PrivacyParams(1.0), 1.0), InvalidArgument);
}

TEST(BoundsTest, LowerBoundFrozen) {
  const LowerBound lb = lower_bound(4, PrivacyParams(1.0));
  EXPECT_NEAR(lb.bound, 0.69314718055994531, 1e-15);
  EXPECT_NEAR(lb.exact_pf, 0.87726440039618078, 1e-14);
  EXPECT_TRUE(lb.holds());
}

TEST(BoundsTest, LowerBoundMatchesExactPmf) {
  const PrivacyParams params(1.0);
  for (const Index n : {2, 4, 16, 64, 256, 1024}) {
    const LowerBound lb = lower_bound(n, params);
    const QualityScores q =
        worst_case_scores(1.0 / static_cast<double>(n), n, params);
    EXPECT_NEAR(lb.exact_pf, expected_error(pmf_pf_dp(q, params), q), 1e-10);
    EXPECT_GE(lb.exact_pf, lb.bound);
    EXPECT_GE(lb.exact_pf / lb.upper, 0.25);
  }
}

TEST(PrivacyTest, LatticeHoldsAndIsTight) {
  for (const double eps : {0.5, 1.0, 2.0}) {
    const PrivacyReport r = verify_privacy_on_lattice(3, 3, PrivacyParams(eps));
    EXPECT_TRUE(r.holds()) << eps;
    EXPECT_LE(r.max_tightness_gap, 1e-10);
    EXPECT_EQ(r.vectors, 64u - 27u);
    EXPECT_GT(r.tight_pairs, 0u);
  }
}

TEST(PrivacyTest, MonotonicFlag) {
  const PrivacyReport r =
      verify_privacy_on_lattice(2, 6, PrivacyParams(1.0, 1.0, true));
  EXPECT_TRUE(r.holds());
  EXPECT_LE(r.max_tightness_gap, 1e-10);
}

TEST(PrivacyTest, SizeCap) {
  EXPECT_THROW(verify_privacy_on_lattice(30, 3, PrivacyParams(1.0)), SizeError);
}

TEST(RegularityTest, Holds) {
  for (const double eps : {0.1, 1.0, 5.0}) {
    const RegularityReport r = verify_regularity(PrivacyParams(eps), 200, 3);
    EXPECT_TRUE(r.holds()) << eps;
  }
}

TEST(NoisyMaxErrorTest, MatchesPmf) {
  const PrivacyParams params(1.0);
  EXPECT_NEAR(noisy_max_expected_error(-2.0, 2, params),
              2 * std::exp(-1.0) * 0.75, 1e-8);
  EXPECT_EQ(noisy_max_expected_error(0.0, 3, params), 0.0);
}

}  // namespace
}  // namespace pnf
