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

#ifndef PNF_ANALYSIS_HPP_
#define PNF_ANALYSIS_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "pnf/exact.hpp"
#include "pnf/mechanisms.hpp"
#include "pnf/rng.hpp"
#include "pnf/scores.hpp"

namespace pnf {

/// E[q_* - q_M(q)] under `dist`. Throws InvalidArgument on length mismatch.
double expected_error(const SelectionDistribution& dist,
                      const QualityScores& q);

/// Pr[q_* - q_M(q) >= t]. Closed at t: gaps equal to t are included.
double error_ccdf(const SelectionDistribution& dist, const QualityScores& q,
                  double t);

/// Expected error plus the error CCDF at every distinct gap.
struct ErrorProfile {
  double expected_error = 0.0;
  /// (t, Pr[E >= t]) for each distinct gap t, increasing in t.
  std::vector<std::pair<double, double>> ccdf;
};

ErrorProfile error_profile(const SelectionDistribution& dist,
                           const QualityScores& q);

/// Exact pmf of a mechanism. PF uses the dynamic program, RNM quadrature.
SelectionDistribution exact_pmf(Mechanism mechanism, const QualityScores& q,
                                const PrivacyParams& params,
                                const QuadratureConfig& quadrature = {});

/// EM / PF expected-error ratio with 0/0 reported as 1.
double error_ratio(double numerator, double denominator);

struct DominanceReport {
  double pf_expected_error = 0.0;
  double em_expected_error = 0.0;
  /// EM / PF expected error (1 when both are 0).
  double ratio = 1.0;
  /// max_t (CCDF_PF(t) - CCDF_EM(t)), clipped below at 0.
  double max_ccdf_violation = 0.0;
  /// (t, CCDF_PF(t), CCDF_EM(t)) at every distinct gap.
  std::vector<std::array<double, 3>> table;

  bool holds(double tolerance = 1e-10) const {
    return max_ccdf_violation <= tolerance &&
           pf_expected_error <= em_expected_error + tolerance;
  }
};

/// Compares the exact PF and EM error distributions on q.
DominanceReport check_dominance(const QualityScores& q,
                                const PrivacyParams& params);

/// Closed-form expected error on q = (c, ..., c, 0) with p = exp(coin_scale
/// * c). Only PF and EM have closed forms. Throws InvalidArgument for p
/// outside (0, 1], n < 1 or RNM.
double worst_case_value(Mechanism mechanism, double p, Index n,
                        const PrivacyParams& params);

/// The scores (c, ..., c, 0) whose coin for the first n-1 entries is p.
QualityScores worst_case_scores(double p, Index n,
                                const PrivacyParams& params);

struct WorstCasePoint {
  double p = 1.0;
  double value = 0.0;
};

/// Maximizes worst_case_value over p in (0, 1]: 1024-point log grid on
/// [1e-12, 1] followed by golden-section refinement around the best cell.
WorstCasePoint worst_case_maximize(Mechanism mechanism, Index n,
                                   const PrivacyParams& params);

struct WorstCaseCurve {
  Mechanism mechanism;
  std::vector<WorstCasePoint> points;
  WorstCasePoint maximizer;
};

WorstCaseCurve worst_case_curve(Mechanism mechanism, Index n,
                                const PrivacyParams& params,
                                const std::vector<double>& p_grid);

struct UtilityBounds {
  /// (2 delta / epsilon) log n
  double expected;
  /// Pr[E >= (2 delta / epsilon)(log n + t)] <= exp(-t)
  double tail;
};

UtilityBounds utility_bounds(Index n, const PrivacyParams& params, double t);

struct LowerBound {
  /// (delta / 2 epsilon) log n
  double bound;
  /// PF expected error at c = -(2 delta / epsilon) log n, i.e. p = 1/n:
  /// (2 delta / epsilon) log(n) (1 - 1/n)^n
  double exact_pf;
  /// (2 delta / epsilon) log n
  double upper;

  bool holds(double tolerance = 0.0) const {
    return exact_pf + tolerance >= bound;
  }
};

LowerBound lower_bound(Index n, const PrivacyParams& params);

struct PrivacyReport {
  /// Bound the log-ratios are compared against (epsilon).
  double bound = 0.0;
  /// max over (q, r) of log(Pr[M(q + step e_r) = r] / Pr[M(q) = r]).
  double max_log_ratio = 0.0;
  /// max |log-ratio - epsilon| over pairs where the constraint must be tight.
  double max_tightness_gap = 0.0;
  std::size_t vectors = 0;
  std::size_t pairs = 0;
  std::size_t tight_pairs = 0;

  bool holds(double tolerance = 1e-9) const {
    return max_log_ratio <= bound + tolerance;
  }
};

/// Cap on raw lattice vectors for verify_privacy_on_lattice.
inline constexpr std::size_t kPrivacyLatticeCap = 2'000'000;

/// Checks Pr[M(q)=r] >= exp(-epsilon) Pr[M(q + step e_r)=r] for the PF pmf
/// on every raw vector of the bounded lattice {0, -2d, ..., -2dk}^n with
/// q_* = 0 and every r. `step` is 2 delta, or delta under the monotonic
/// flag. Pairs with q_r <= q_* - step must be tight. Throws SizeError when
/// the lattice exceeds kPrivacyLatticeCap.
PrivacyReport verify_privacy_on_lattice(Index n, int k,
                                        const PrivacyParams& params);

struct RegularityReport {
  std::size_t trials = 0;
  /// max |pmf(pi q) - pi pmf(q)|; exactly 0 for both mechanisms.
  double symmetry_max_diff = 0.0;
  /// max |pmf(q + c) - pmf(q)| for shifts that are exact in floating point.
  double exact_shift_max_diff = 0.0;
  /// same for arbitrary real shifts (rounding in q_r - q_* allowed).
  double real_shift_max_diff = 0.0;
  /// max decrease of probs_r after raising q_r and lowering the others.
  double monotonicity_max_drop = 0.0;

  bool holds(double tolerance = 1e-12) const {
    return symmetry_max_diff == 0.0 && exact_shift_max_diff == 0.0 &&
           real_shift_max_diff <= tolerance &&
           monotonicity_max_drop <= tolerance;
  }
};

/// Randomized symmetry / shift-invariance / monotonicity checks of the PF
/// and EM exact pmfs.
RegularityReport verify_regularity(const PrivacyParams& params, int trials,
                                   std::uint64_t seed);

/// Random scores in [-spread, 0] with deliberate ties (about a quarter of
/// entries repeat an earlier one) and at least one entry at 0.
QualityScores random_scores(Rng& rng, Index n, double spread = 10.0);

struct OracleReport {
  std::size_t instances = 0;
  /// Entrywise max |DP - permutation oracle|.
  double max_permutation_diff = 0.0;
  /// Entrywise max |DP - inclusion-exclusion oracle|.
  double max_subset_diff = 0.0;

  double max_residual() const {
    return std::max(max_permutation_diff, max_subset_diff);
  }
  bool holds(double tolerance = 1e-10) const {
    return max_residual() <= tolerance;
  }
};

/// Compares the DP against both oracles on `trials` random instances with
/// n uniform in [1, max_n] and epsilon cycling through {0.1, 1, 5}.
OracleReport verify_oracles(int trials, std::uint64_t seed, Index max_n = 9);

struct DominanceSweep {
  std::size_t instances = 0;
  /// Instances where the CCDF or expected-error check exceeded tolerance.
  std::size_t violations = 0;
  double max_ccdf_violation = 0.0;
  /// max (E_PF - E_EM), clipped below at 0.
  double max_error_violation = 0.0;
};

/// check_dominance on `trials` random instances with n in [1, max_n] and
/// epsilon log-uniform in [0.05, 10].
DominanceSweep verify_dominance(int trials, std::uint64_t seed,
                                Index max_n = 8, double tolerance = 1e-10);

/// Expected error of report-noisy-max on (c, ..., c, 0), c <= 0:
/// -c (1 - Pr[M(q) = last]).
double noisy_max_expected_error(double c, Index n, const PrivacyParams& params,
                                const QuadratureConfig& quadrature = {});

}  // namespace pnf

#endif  // PNF_ANALYSIS_HPP_
