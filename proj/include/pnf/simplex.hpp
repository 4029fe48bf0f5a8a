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

#ifndef PNF_SIMPLEX_HPP_
#define PNF_SIMPLEX_HPP_

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pnf/scores.hpp"

namespace pnf {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

/// A linear program over non-negative variables:
///   maximize (or minimize) c'x  subject to  rows(x) {<=,=,>=} rhs, x >= 0.
class LpModel {
 public:
  explicit LpModel(bool maximize = true) : maximize_(maximize) {}

  Index add_variable(std::string name, double objective);
  Index add_row(std::string name,
                const std::vector<std::pair<Index, double>>& terms,
                RowSense sense, double rhs);

  bool maximize() const { return maximize_; }
  Index num_variables() const { return static_cast<Index>(objective_.size()); }
  Index num_rows() const { return static_cast<Index>(senses_.size()); }

  Vector objective() const;
  Vector rhs() const;
  const std::vector<RowSense>& senses() const { return senses_; }
  const std::vector<std::string>& variable_names() const { return vars_; }
  const std::vector<std::string>& row_names() const { return row_names_; }
  /// Constraint matrix, num_rows x num_variables.
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix() const;

 private:
  bool maximize_;
  std::vector<std::string> vars_;
  std::vector<double> objective_;
  std::vector<std::string> row_names_;
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<Eigen::Triplet<double>> entries_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  Vector x;
  /// Row multipliers y with A'y >= c (max) at optimality; sign follows
  /// the row sense of the model as written.
  Vector duals;
  std::int64_t iterations = 0;
  /// Largest bound or row violation of x.
  double max_primal_residual = 0.0;
};

struct SimplexOptions {
  std::int64_t max_iterations = 1'000'000;
  /// Reduced costs below -tolerance are eligible to enter.
  double optimality_tolerance = 1e-11;
  /// Smallest admissible pivot magnitude.
  double pivot_tolerance = 1e-12;
  /// Phase-one objective above -tolerance counts as feasible.
  double feasibility_tolerance = 1e-9;
};

/// Dense two-phase tableau simplex with Bland's rule. The final basis is
/// re-solved with LU for primal values and duals. Throws SolverError on
/// hitting the iteration cap or if the refined point violates the model
/// by more than 1e-9.
LpSolution solve_lp(const LpModel& model, const SimplexOptions& options = {});

/// Writes the model in CPLEX LP text format.
void write_lp_format(const LpModel& model, std::ostream& out);

}  // namespace pnf

#endif  // PNF_SIMPLEX_HPP_
