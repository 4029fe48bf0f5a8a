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

#ifndef PNF_EXACT_HPP_
#define PNF_EXACT_HPP_

#include <Eigen/Core>
#include <string>

#include "pnf/scores.hpp"

namespace pnf {

enum class PmfMethod {
  kExponential,
  kPfPermutation,
  kPfInclusionExclusion,
  kPfDynamicProgram,
  kNoisyMaxQuadrature,
};

std::string to_string(PmfMethod method);

/// An exact probability mass function over candidate indices.
struct SelectionDistribution {
  Vector probs;
  PmfMethod method;
  /// |1 - sum| before renormalization. Only quadrature sets this.
  double normalization_defect = 0.0;

  Index size() const { return probs.size(); }
  double operator[](Index r) const { return probs[r]; }
};

/// Hard caps for the brute-force oracles.
inline constexpr Index kPermutationOracleMaxN = 10;
inline constexpr Index kSubsetOracleMaxN = 20;

/// probs_r proportional to p_r.
SelectionDistribution pmf_exponential(const QualityScores& q,
                                      const PrivacyParams& params);

/// Permute-and-flip pmf by enumerating all n! visiting orders:
///   Pr[r] = p_r / n! * sum_pi prod_{s before r in pi} (1 - p_s).
/// Throws SizeError for n > kPermutationOracleMaxN.
SelectionDistribution pmf_pf_permutation(const QualityScores& q,
                                         const PrivacyParams& params);

/// Permute-and-flip pmf by the alternating subset sum
///   Pr[r] = p_r * sum_{S not containing r} (-1)^|S| / (|S|+1) prod_S p_s.
/// Throws SizeError for n > kSubsetOracleMaxN.
SelectionDistribution pmf_pf_inclusion_exclusion(const QualityScores& q,
                                                 const PrivacyParams& params);

/// Permute-and-flip pmf in O(n^2) time and O(n) memory from the
/// elementary symmetric sums of the coin probabilities.
///
/// The alternating sum cancels badly once sum_k S(k, n) is large (many
/// coins near 1), so the working precision is picked from that magnitude:
/// plain double when it is small, MPFR with enough extra bits otherwise.
/// The result is therefore accurate to ~1e-15 absolute for any n.
SelectionDistribution pmf_pf_dp(const QualityScores& q,
                                const PrivacyParams& params);

/// As above with a forced working precision; 53 bits selects double.
SelectionDistribution pmf_pf_dp(const QualityScores& q,
                                const PrivacyParams& params,
                                int precision_bits);

/// Full dynamic-programming tables, for inspection and testing.
///
/// `S(k, r)` for k, r in [0, n] is the sum over size-k subsets of the first
/// r candidates of prod p_s (column 0 is the empty prefix). `T(k, r)` for
/// k in [0, n], r in [0, n) is the sum over size-k subsets excluding
/// candidate r.
struct DpTables {
  Eigen::MatrixXd S;
  Eigen::MatrixXd T;
};

/// Builds the tables in double precision. Memory is O(n^2).
DpTables dp_tables(const Vector& coin_probs);

/// Reads the pmf off precomputed tables: p_r sum_k (-1)^k/(k+1) T(k, r).
Vector pmf_from_tables(const DpTables& tables, const Vector& coin_probs);

/// Bits of working precision pmf_pf_dp would use for these coins
/// (53 means plain double).
int pf_dp_precision_bits(const Vector& coin_probs);

/// Report-noisy-max quadrature settings.
struct QuadratureConfig {
  /// Absolute tolerance per entry.
  double abs_tolerance = 1e-9;
  /// Integration range is chosen so the dropped Laplace tail is below this.
  double tail_mass = 1e-12;
  int max_depth = 48;
};

/// Report-noisy-max pmf,
///   Pr[r] = integral f(x) prod_{s != r} F(q_r - q_s + x) dx,
/// with Laplace(2 delta / epsilon) density f and CDF F, evaluated by
/// adaptive Simpson on panels split at the kinks. The result is
/// renormalized and the defect recorded. Throws AccuracyError if a panel
/// cannot reach its share of the tolerance.
SelectionDistribution pmf_noisy_max(const QualityScores& q,
                                    const PrivacyParams& params,
                                    const QuadratureConfig& config = {});

/// Residuals of the defining recurrence evaluated with pmf_pf_dp.
struct RecurrenceReport {
  /// max over q_r < q_* of |Pr[M(q)=r] - p_r Pr[M(q with q_r := q_*)=r]|
  double case1_max_violation = 0.0;
  /// max over maxima of |Pr[M(q)=r] - (1 - non-max mass) / n_*|
  double case2_max_violation = 0.0;
  double max_violation() const;
};

RecurrenceReport verify_recurrence(const QualityScores& q,
                                   const PrivacyParams& params);

}  // namespace pnf

#endif  // PNF_EXACT_HPP_
