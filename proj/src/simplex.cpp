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

#include "pnf/simplex.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "pnf/error.hpp"
#include "pnf/format.hpp"

namespace pnf {

Index LpModel::add_variable(std::string name, double objective) {
  vars_.push_back(std::move(name));
  objective_.push_back(objective);
  return num_variables() - 1;
}

Index LpModel::add_row(std::string name,
                       const std::vector<std::pair<Index, double>>& terms,
                       RowSense sense, double rhs) {
  const Index row = num_rows();
  for (const auto& [col, coef] : terms) {
    if (col < 0 || col >= num_variables()) {
      throw InvalidArgument("row '" + name + "' references unknown variable");
    }
    entries_.emplace_back(row, col, coef);
  }
  row_names_.push_back(std::move(name));
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  return row;
}

Vector LpModel::objective() const {
  return Vector::Map(objective_.data(), num_variables());
}

Vector LpModel::rhs() const { return Vector::Map(rhs_.data(), num_rows()); }

Eigen::SparseMatrix<double, Eigen::RowMajor> LpModel::matrix() const {
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(num_rows(), num_variables());
  a.setFromTriplets(entries_.begin(), entries_.end());
  return a;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

enum class Phase { kOne, kTwo };

// Dense tableau over [structural | slack/surplus | artificial | rhs] with
// the reduced-cost row last.
class Tableau {
 public:
  Tableau(const LpModel& model, const SimplexOptions& options)
      : options_(options) {
    const Index m = model.num_rows();
    const Index nv = model.num_variables();
    const Eigen::MatrixXd a = Eigen::MatrixXd(model.matrix());
    const Vector b = model.rhs();

    num_structural_ = nv;
    Index aux = 0;
    for (Index i = 0; i < m; ++i) {
      if (model.senses()[i] != RowSense::kEqual) ++aux;
    }
    // One artificial slot per row; slots of <= rows stay zero.
    first_artificial_ = nv + aux;
    num_columns_ = nv + aux + m;

    augmented_ = Eigen::MatrixXd::Zero(m, num_columns_);
    rhs_ = Vector(m);
    flipped_ = std::vector<bool>(m, false);
    basis_ = std::vector<Index>(m, -1);
    Index next_aux = nv;
    for (Index i = 0; i < m; ++i) {
      RowSense sense = model.senses()[i];
      double sign = 1.0;
      if (b[i] < 0) {
        sign = -1.0;
        flipped_[i] = true;
        if (sense == RowSense::kLessEqual) {
          sense = RowSense::kGreaterEqual;
        } else if (sense == RowSense::kGreaterEqual) {
          sense = RowSense::kLessEqual;
        }
      }
      augmented_.row(i).head(nv) = sign * a.row(i);
      rhs_[i] = sign * b[i];
      if (sense == RowSense::kLessEqual) {
        augmented_(i, next_aux) = 1.0;
        basis_[i] = next_aux++;
      } else {
        if (sense == RowSense::kGreaterEqual) augmented_(i, next_aux++) = -1.0;
        augmented_(i, first_artificial_ + i) = 1.0;
        basis_[i] = first_artificial_ + i;
      }
    }
    cost_ = Vector::Zero(num_columns_);
    cost_.head(nv) = model.maximize() ? model.objective()
                                      : Vector(-model.objective());

    table_ = Eigen::MatrixXd::Zero(m + 1, num_columns_ + 1);
    table_.topLeftCorner(m, num_columns_) = augmented_;
    table_.col(num_columns_).head(m) = rhs_;
    redundant_ = std::vector<bool>(m, false);
  }

  bool is_artificial(Index j) const { return j >= first_artificial_; }

  // Returns false if the phase-one optimum is infeasible.
  bool run_phase_one() {
    Vector c = Vector::Zero(num_columns_);
    for (Index j = first_artificial_; j < num_columns_; ++j) c[j] = -1.0;
    set_objective(c);
    const LpStatus status = iterate(Phase::kOne);
    (void)status;  // phase one is bounded above by 0
    if (table_(rows(), num_columns_) < -options_.feasibility_tolerance) {
      return false;
    }
    // Pivot remaining zero-level artificials out; rows where that is
    // impossible are linearly dependent and dropped.
    for (Index i = 0; i < rows(); ++i) {
      if (!is_artificial(basis_[i])) continue;
      Index col = -1;
      for (Index j = 0; j < first_artificial_; ++j) {
        if (std::abs(table_(i, j)) > options_.pivot_tolerance) {
          col = j;
          break;
        }
      }
      if (col < 0) {
        redundant_[i] = true;
      } else {
        pivot(i, col);
      }
    }
    return true;
  }

  LpStatus run_phase_two() {
    set_objective(cost_);
    return iterate(Phase::kTwo);
  }

  std::int64_t iterations() const { return iterations_; }

  // Re-solves the final basis against the original data.
  void extract(const LpModel& model, LpSolution& out) const {
    const Index m = rows();
    std::vector<Index> live;
    for (Index i = 0; i < m; ++i) {
      if (!redundant_[i]) live.push_back(i);
    }
    const auto mb = static_cast<Index>(live.size());
    Eigen::MatrixXd basis(mb, mb);
    Vector b(mb), cb(mb);
    for (Index r = 0; r < mb; ++r) {
      b[r] = rhs_[live[r]];
      for (Index c = 0; c < mb; ++c) {
        basis(r, c) = augmented_(live[r], basis_[live[c]]);
      }
      cb[r] = cost_[basis_[live[r]]];
    }
    Vector full = Vector::Zero(num_columns_);
    Vector y_live = Vector::Zero(mb);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (mb > 0 && lu.isInvertible()) {
      const Vector xb = lu.solve(b);
      for (Index r = 0; r < mb; ++r) full[basis_[live[r]]] = xb[r];
      y_live = lu.transpose().solve(cb);
    } else {
      for (Index i = 0; i < m; ++i) {
        full[basis_[i]] = table_(i, num_columns_);
      }
    }
    out.x = full.head(num_structural_).cwiseMax(0.0);
    out.duals = Vector::Zero(m);
    for (Index r = 0; r < mb; ++r) {
      const Index i = live[r];
      double y = flipped_[i] ? -y_live[r] : y_live[r];
      out.duals[i] = model.maximize() ? y : -y;
    }
    out.objective = model.objective().dot(out.x);
  }

 private:
  Index rows() const { return static_cast<Index>(basis_.size()); }

  void set_objective(const Vector& c) {
    const Index m = rows();
    auto obj = table_.row(m);
    obj.setZero();
    obj.head(num_columns_) = -c.transpose();
    for (Index i = 0; i < m; ++i) {
      const double cb = c[basis_[i]];
      if (cb != 0.0) obj += cb * table_.row(i);
    }
  }

  LpStatus iterate(Phase phase) {
    const Index m = rows();
    const Index allowed =
        phase == Phase::kOne ? num_columns_ : first_artificial_;
    while (true) {
      if (iterations_ >= options_.max_iterations) {
        throw SolverError("simplex hit the iteration cap of " +
                          std::to_string(options_.max_iterations) + " (" +
                          std::to_string(m) + " rows, " +
                          std::to_string(num_columns_) + " columns)");
      }
      // Bland: lowest-index improving column.
      Index entering = -1;
      for (Index j = 0; j < allowed; ++j) {
        if (table_(m, j) < -options_.optimality_tolerance) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;

      Index leaving = -1;
      double best = 0.0;
      for (Index i = 0; i < m; ++i) {
        const double coef = table_(i, entering);
        if (coef <= options_.pivot_tolerance) continue;
        const double ratio = table_(i, num_columns_) / coef;
        const double slack = 1e-14 * std::max(1.0, std::abs(best));
        if (leaving < 0 || ratio < best - slack ||
            (ratio <= best + slack && basis_[i] < basis_[leaving])) {
          leaving = i;
          best = ratio;
        }
      }
      if (leaving < 0) return LpStatus::kUnbounded;
      pivot(leaving, entering);
      ++iterations_;
    }
  }

  void pivot(Index row, Index col) {
    table_.row(row) /= table_(row, col);
    for (Index i = 0; i < table_.rows(); ++i) {
      if (i == row) continue;
      const double factor = table_(i, col);
      if (factor != 0.0) table_.row(i) -= factor * table_.row(row);
    }
    basis_[row] = col;
  }

  SimplexOptions options_;
  Index num_structural_ = 0;
  Index first_artificial_ = 0;
  Index num_columns_ = 0;
  Eigen::MatrixXd augmented_;
  Vector rhs_;
  Vector cost_;
  std::vector<bool> flipped_;
  std::vector<bool> redundant_;
  std::vector<Index> basis_;
  Eigen::MatrixXd table_;
  std::int64_t iterations_ = 0;
};

double primal_residual(const LpModel& model, const Vector& x) {
  double worst = std::max(0.0, -x.minCoeff());
  const Vector ax = model.matrix() * x;
  const Vector b = model.rhs();
  for (Index i = 0; i < model.num_rows(); ++i) {
    const double d = ax[i] - b[i];
    switch (model.senses()[i]) {
      case RowSense::kLessEqual:
        worst = std::max(worst, d);
        break;
      case RowSense::kGreaterEqual:
        worst = std::max(worst, -d);
        break;
      case RowSense::kEqual:
        worst = std::max(worst, std::abs(d));
        break;
    }
  }
  return worst;
}

}  // namespace

LpSolution solve_lp(const LpModel& model, const SimplexOptions& options) {
  LpSolution solution;
  if (model.num_variables() == 0) {
    throw InvalidArgument("LP has no variables");
  }
  Tableau tableau(model, options);
  if (!tableau.run_phase_one()) {
    solution.status = LpStatus::kInfeasible;
    solution.iterations = tableau.iterations();
    return solution;
  }
  solution.status = tableau.run_phase_two();
  solution.iterations = tableau.iterations();
  if (solution.status != LpStatus::kOptimal) return solution;

  tableau.extract(model, solution);
  solution.max_primal_residual = primal_residual(model, solution.x);
  if (solution.max_primal_residual > 1e-9) {
    throw SolverError("simplex solution violates the model by " +
                      format_number(solution.max_primal_residual));
  }
  return solution;
}

void write_lp_format(const LpModel& model, std::ostream& out) {
  const auto a = model.matrix();
  const Vector c = model.objective();
  const Vector b = model.rhs();
  auto term = [&](double coef, const std::string& name, bool first) {
    std::string s;
    if (coef < 0) {
      s += first ? "- " : " - ";
    } else if (!first) {
      s += " + ";
    }
    s += format_number(std::abs(coef)) + " " + name;
    return s;
  };

  out << "\\ pnf lattice LP\n";
  out << (model.maximize() ? "Maximize\n" : "Minimize\n") << " obj: ";
  bool first = true;
  for (Index j = 0; j < c.size(); ++j) {
    if (c[j] == 0.0) continue;
    out << term(c[j], model.variable_names()[j], first);
    first = false;
  }
  if (first) out << "0 " << model.variable_names().front();
  out << "\nSubject To\n";
  for (Index i = 0; i < model.num_rows(); ++i) {
    out << " " << model.row_names()[i] << ": ";
    bool first_term = true;
    for (decltype(a)::InnerIterator it(a, i); it; ++it) {
      out << term(it.value(), model.variable_names()[it.col()], first_term);
      first_term = false;
    }
    switch (model.senses()[i]) {
      case RowSense::kLessEqual:
        out << " <= ";
        break;
      case RowSense::kGreaterEqual:
        out << " >= ";
        break;
      case RowSense::kEqual:
        out << " = ";
        break;
    }
    out << format_number(b[i]) << "\n";
  }
  out << "Bounds\n";
  for (const auto& name : model.variable_names()) {
    out << " " << name << " >= 0\n";
  }
  out << "End\n";
}

}  // namespace pnf
