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

#ifndef PNF_OPTIMALITY_HPP_
#define PNF_OPTIMALITY_HPP_

#include <optional>
#include <vector>

#include "pnf/lattice.hpp"
#include "pnf/mechanisms.hpp"
#include "pnf/scores.hpp"
#include "pnf/simplex.hpp"

namespace pnf {

/// log((3 + sqrt 5) / 2): above this, permute-and-flip is the optimal
/// regular mechanism on every bounded lattice.
inline constexpr double kGoldenThreshold = 0.9624236501192069;

/// One LP variable: the probability of returning any single item of the
/// class at `level` in canonical vector `vector`.
struct LpVariableKey {
  Index vector = 0;
  int level = 0;
  int count = 0;
};

/// The symmetry-reduced primal LP for the optimal regular mechanism on the
/// lattice with levels 0..k. Maximizes the negated total expected error.
///
/// Rows: one sum-to-one equality per vector, then one privacy row
/// x(q, c) >= e^-eps x(q', c') per class whose worst-case neighbor stays on
/// the lattice. For a non-maximal class the neighbor raises that item one
/// level; for the maximal class it lowers every other item one level.
struct LatticeLp {
  Index n = 0;
  int k = 0;
  PrivacyParams params{1.0};
  std::vector<LatticeVector> lattice;
  std::vector<LpVariableKey> keys;
  /// First variable of each vector; its classes follow in level order.
  std::vector<Index> first_variable;
  LpModel model;
  Index num_equality_rows = 0;
  Index num_privacy_rows = 0;

  /// Variable for (vector, level), or -1.
  Index variable(Index vector, int level) const;
};

/// Throws InvalidArgument for the monotonic-quality setting (the lattice
/// LP assumes 2-delta neighbors) and SizeError past the lattice cap.
LatticeLp build_lp(Index n, int k, const PrivacyParams& params);

/// Multiplicity-weighted sum of expected errors over the lattice.
double lattice_expected_error(Mechanism mechanism, Index n, int k,
                              const PrivacyParams& params);

/// lattice_expected_error for permute-and-flip.
double pf_lattice_objective(Index n, int k, const PrivacyParams& params);

struct OptimalityResult {
  double mechanism_error = 0.0;
  /// Total error of the LP optimum (the negated objective).
  double optimal_error = 0.0;
  /// mechanism_error / optimal_error, 1 when both vanish.
  double ratio = 1.0;
  LpSolution solution;
};

OptimalityResult optimality(Mechanism mechanism, Index n, int k,
                            const PrivacyParams& params);

double optimality_ratio(Mechanism mechanism, Index n, int k,
                        const PrivacyParams& params);

/// Solution of the dual recurrence, indexed like the LP variables of
/// build_lp (one value per vector and class).
struct DualSolution {
  Index n = 0;
  int k = 0;
  PrivacyParams params{1.0};
  std::vector<LatticeVector> lattice;
  std::vector<LpVariableKey> keys;
  std::vector<Index> first_variable;
  Vector y;
  /// sum over vectors of multiplicity * n_* * y_0.
  double objective = 0.0;

  double value(Index vector, int level) const;
};

/// Evaluates the recurrence in increasing order of the number of maxima:
///   y_0(q) = 0 when n_* = 1, else
///   y_0(q) = -(1/n_*) sum_{t=1..k} e^{-t eps} y_t(q with one zero at level t)
///   y_c(q) = 2 delta c + n_* y_0(q) for c > 0.
DualSolution dual_solve(Index n, int k, const PrivacyParams& params);

struct DualCheckReport {
  /// Largest |residual| of the dual constraints, which must all be tight.
  double max_tightness_residual = 0.0;
  /// Largest violation of y >= 0 on non-maximal classes.
  double max_sign_violation = 0.0;
  /// Largest violation of -2 delta / n_* <= y_0 <= 0 and
  /// 0 <= y_c <= 2 delta c.
  double max_bound_violation = 0.0;
  bool threshold_met = false;
  double dual_objective = 0.0;

  /// Tight and sign-feasible; bounds are only required above threshold.
  bool feasible(double tol = 1e-9) const;
  bool bounds_hold(double tol = 1e-9) const {
    return max_bound_violation <= tol;
  }
};

DualCheckReport dual_feasibility_check(const DualSolution& dual);

struct GoldenRatioCheck {
  double threshold = kGoldenThreshold;
  /// sum_{t>=1} t e^{-t eps} = e^eps / (e^eps - 1)^2.
  double series = 0.0;
  /// eps >= threshold, compared without tolerance.
  bool holds = false;
};

GoldenRatioCheck golden_ratio_threshold(double epsilon);

/// Target of a Pareto probe: the class at `level` in the canonical vector
/// with these levels.
struct ParetoTarget {
  std::vector<int> levels;
  int level = 0;
};

struct ParetoReport {
  /// Whether some regular mechanism beats PF at the target by `margin`.
  bool feasible = false;
  double pf_probability = 0.0;
  /// LP value at the target when feasible.
  double target_probability = 0.0;
  /// Vector where the probe solution's expected error exceeds PF's most.
  std::optional<std::vector<int>> witness;
  double witness_excess = 0.0;
};

/// Re-solves the LP with the target probability forced below PF's by
/// `margin` (or above it, for the maximal class, where more mass means
/// less error) and looks for a vector where that solution does worse.
ParetoReport pareto_probe(Index n, int k, const PrivacyParams& params,
                          const ParetoTarget& target, double margin = 1e-4);

}  // namespace pnf

#endif  // PNF_OPTIMALITY_HPP_
