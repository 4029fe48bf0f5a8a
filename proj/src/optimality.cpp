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

#include "pnf/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnf/analysis.hpp"
#include "pnf/error.hpp"
#include "pnf/exact.hpp"

namespace pnf {

namespace {

std::string levels_name(const std::vector<int>& levels) {
  std::string name = "q";
  for (const int level : levels) name += "_" + std::to_string(level);
  return name;
}

// Shared (lattice, keys, first_variable) layout of primal and dual.
struct Layout {
  std::vector<LatticeVector> lattice;
  std::vector<LpVariableKey> keys;
  std::vector<Index> first_variable;
};

Layout make_layout(Index n, int k) {
  Layout layout;
  layout.lattice = enumerate_lattice(n, k);
  for (Index v = 0; v < static_cast<Index>(layout.lattice.size()); ++v) {
    layout.first_variable.push_back(static_cast<Index>(layout.keys.size()));
    for (const auto& [level, count] : layout.lattice[v].classes()) {
      layout.keys.push_back({v, level, count});
    }
  }
  return layout;
}

Index find_variable(const std::vector<LpVariableKey>& keys,
                    const std::vector<Index>& first, Index vector, int level) {
  if (vector < 0 || vector >= static_cast<Index>(first.size())) return -1;
  const Index end = vector + 1 < static_cast<Index>(first.size())
                        ? first[vector + 1]
                        : static_cast<Index>(keys.size());
  for (Index j = first[vector]; j < end; ++j) {
    if (keys[j].level == level) return j;
  }
  return -1;
}

void check_lattice_params(Index n, int k, const PrivacyParams& params) {
  if (n < 1 || k < 0) throw InvalidArgument("need n >= 1 and k >= 0");
  if (params.monotonic_quality) {
    throw InvalidArgument(
        "lattice optimality is defined for the general (2-delta) neighbor "
        "relation; drop the monotonic flag");
  }
}

// Levels of the neighbor that raises item `pos` by one lattice step.
std::vector<int> raise_one(std::vector<int> levels, std::size_t pos) {
  --levels[pos];
  return levels;
}

// Levels of the neighbor that lowers every item but `pos` by one step.
std::vector<int> lower_others(std::vector<int> levels, std::size_t pos) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i != pos) ++levels[i];
  }
  return levels;
}

}  // namespace

Index LatticeLp::variable(Index vector, int level) const {
  return find_variable(keys, first_variable, vector, level);
}

LatticeLp build_lp(Index n, int k, const PrivacyParams& params) {
  check_lattice_params(n, k, params);
  Layout layout = make_layout(n, k);
  LatticeLp lp;
  lp.n = n;
  lp.k = k;
  lp.params = params;
  lp.lattice = std::move(layout.lattice);
  lp.keys = std::move(layout.keys);
  lp.first_variable = std::move(layout.first_variable);

  const double delta = params.delta;
  for (const auto& key : lp.keys) {
    const auto& vec = lp.lattice[key.vector];
    const double weight =
        static_cast<double>(vec.multiplicity) * key.count;
    lp.model.add_variable(
        "x_" + levels_name(vec.levels).substr(2) + "_c" +
            std::to_string(key.level),
        -2.0 * delta * key.level * weight);
  }

  for (Index v = 0; v < static_cast<Index>(lp.lattice.size()); ++v) {
    std::vector<std::pair<Index, double>> terms;
    for (const auto& [level, count] : lp.lattice[v].classes()) {
      terms.emplace_back(lp.variable(v, level), static_cast<double>(count));
    }
    lp.model.add_row("sum_" + levels_name(lp.lattice[v].levels), terms,
                     RowSense::kEqual, 1.0);
    ++lp.num_equality_rows;
  }

  const LatticeIndex index(lp.lattice);
  const double factor = std::exp(-params.epsilon);
  for (Index v = 0; v < static_cast<Index>(lp.lattice.size()); ++v) {
    const auto& levels = lp.lattice[v].levels;
    for (const auto& [level, count] : lp.lattice[v].classes()) {
      const auto pos = static_cast<std::size_t>(
          std::find(levels.begin(), levels.end(), level) - levels.begin());
      std::vector<int> neighbor;
      int neighbor_level = 0;
      if (level > 0) {
        neighbor = raise_one(levels, pos);
        neighbor_level = level - 1;
      } else {
        neighbor = lower_others(levels, pos);
        if (*std::max_element(neighbor.begin(), neighbor.end()) > k) continue;
      }
      const Index target = index.find(neighbor);
      if (target < 0) continue;
      lp.model.add_row(
          "dp_" + levels_name(levels) + "_c" + std::to_string(level),
          {{lp.variable(v, level), -1.0},
           {lp.variable(target, neighbor_level), factor}},
          RowSense::kLessEqual, 0.0);
      ++lp.num_privacy_rows;
    }
  }
  return lp;
}

double lattice_expected_error(Mechanism mechanism, Index n, int k,
                              const PrivacyParams& params) {
  check_lattice_params(n, k, params);
  const auto lattice = enumerate_lattice(n, k);
  double total = 0.0;
  for (const auto& vec : lattice) {
    const QualityScores q(vec.scores(params.delta));
    total += static_cast<double>(vec.multiplicity) *
             expected_error(exact_pmf(mechanism, q, params), q);
  }
  return total;
}

double pf_lattice_objective(Index n, int k, const PrivacyParams& params) {
  return lattice_expected_error(Mechanism::kPermuteAndFlip, n, k, params);
}

OptimalityResult optimality(Mechanism mechanism, Index n, int k,
                            const PrivacyParams& params) {
  const LatticeLp lp = build_lp(n, k, params);
  OptimalityResult result;
  result.solution = solve_lp(lp.model);
  if (result.solution.status != LpStatus::kOptimal) {
    throw SolverError("lattice LP is " + to_string(result.solution.status));
  }
  result.optimal_error = std::max(0.0, -result.solution.objective);
  result.mechanism_error = lattice_expected_error(mechanism, n, k, params);
  result.ratio = error_ratio(result.mechanism_error, result.optimal_error);
  return result;
}

double optimality_ratio(Mechanism mechanism, Index n, int k,
                        const PrivacyParams& params) {
  return optimality(mechanism, n, k, params).ratio;
}

double DualSolution::value(Index vector, int level) const {
  const Index j = find_variable(keys, first_variable, vector, level);
  if (j < 0) throw InvalidArgument("no such dual entry");
  return y[j];
}

DualSolution dual_solve(Index n, int k, const PrivacyParams& params) {
  check_lattice_params(n, k, params);
  Layout layout = make_layout(n, k);
  DualSolution dual;
  dual.n = n;
  dual.k = k;
  dual.params = params;
  dual.lattice = std::move(layout.lattice);
  dual.keys = std::move(layout.keys);
  dual.first_variable = std::move(layout.first_variable);
  dual.y = Vector::Zero(static_cast<Index>(dual.keys.size()));

  const auto size = static_cast<Index>(dual.lattice.size());
  std::vector<Index> order(size);
  for (Index v = 0; v < size; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return dual.lattice[a].num_max() < dual.lattice[b].num_max();
  });

  const LatticeIndex index(dual.lattice);
  const double delta = params.delta;
  for (const Index v : order) {
    const auto& vec = dual.lattice[v];
    const Index n_max = vec.num_max();
    double y0 = 0.0;
    if (n_max > 1) {
      double sum = 0.0;
      for (int t = 1; t <= k; ++t) {
        std::vector<int> moved = vec.levels;
        moved[0] = t;
        sum += std::exp(-t * params.epsilon) *
               dual.value(index.find(moved), t);
      }
      y0 = -sum / static_cast<double>(n_max);
    }
    for (const auto& [level, count] : vec.classes()) {
      const Index j = find_variable(dual.keys, dual.first_variable, v, level);
      dual.y[j] = level == 0 ? y0 : 2.0 * delta * level + n_max * y0;
    }
    dual.objective += static_cast<double>(vec.multiplicity) * n_max * y0;
  }
  return dual;
}

bool DualCheckReport::feasible(double tol) const {
  return max_tightness_residual <= tol && max_sign_violation <= tol;
}

DualCheckReport dual_feasibility_check(const DualSolution& dual) {
  DualCheckReport report;
  report.threshold_met = dual.params.epsilon >= kGoldenThreshold;
  report.dual_objective = dual.objective;
  const LatticeIndex index(dual.lattice);
  const double delta = dual.params.delta;
  for (Index v = 0; v < static_cast<Index>(dual.lattice.size()); ++v) {
    const auto& vec = dual.lattice[v];
    const Index n_max = vec.num_max();
    const double y0 = dual.value(v, 0);
    // Zero class: n_* y_0(q) + sum_t e^{-t eps} y_t(q - 2 delta t e_r) = 0.
    double residual = 0.0;
    if (n_max > 1) {
      residual = n_max * y0;
      for (int t = 1; t <= dual.k; ++t) {
        std::vector<int> moved = vec.levels;
        moved[0] = t;
        residual += std::exp(-t * dual.params.epsilon) *
                    dual.value(index.find(moved), t);
      }
    } else {
      residual = y0;
    }
    report.max_tightness_residual =
        std::max(report.max_tightness_residual, std::abs(residual));
    const double lower0 = -2.0 * delta / static_cast<double>(n_max);
    report.max_bound_violation = std::max(
        {report.max_bound_violation, lower0 - y0, y0});

    for (const auto& [level, count] : vec.classes()) {
      if (level == 0) continue;
      const double y = dual.value(v, level);
      const double gap = 2.0 * delta * level;
      // Non-maximal class: y_c(q) - sum_{s: q_s = 0} y_s(q) = -q_c.
      report.max_tightness_residual = std::max(
          report.max_tightness_residual, std::abs(y - n_max * y0 - gap));
      report.max_sign_violation = std::max(report.max_sign_violation, -y);
      report.max_bound_violation =
          std::max({report.max_bound_violation, -y, y - gap});
    }
  }
  return report;
}

GoldenRatioCheck golden_ratio_threshold(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be positive and finite");
  }
  GoldenRatioCheck check;
  const double em1 = std::expm1(epsilon);
  check.series = std::exp(epsilon) / (em1 * em1);
  check.holds = epsilon >= kGoldenThreshold;
  return check;
}

ParetoReport pareto_probe(Index n, int k, const PrivacyParams& params,
                          const ParetoTarget& target, double margin) {
  LatticeLp lp = build_lp(n, k, params);
  const LatticeIndex index(lp.lattice);
  const Index v = index.find(target.levels);
  if (v < 0) throw InvalidArgument("target vector is not on the lattice");
  const Index var = lp.variable(v, target.level);
  if (var < 0) throw InvalidArgument("target vector has no such level");

  // PF pmf on every vector, reused for the witness search.
  std::vector<SelectionDistribution> pf;
  pf.reserve(lp.lattice.size());
  for (const auto& vec : lp.lattice) {
    pf.push_back(pmf_pf_dp(QualityScores(vec.scores(params.delta)), params));
  }
  const auto& tvec = lp.lattice[v].levels;
  const auto pos = std::find(tvec.begin(), tvec.end(), target.level) -
                   tvec.begin();

  ParetoReport report;
  report.pf_probability = pf[v].probs[pos];
  if (target.level == 0) {
    lp.model.add_row("probe", {{var, 1.0}}, RowSense::kGreaterEqual,
                     report.pf_probability + margin);
  } else {
    lp.model.add_row("probe", {{var, 1.0}}, RowSense::kLessEqual,
                     report.pf_probability - margin);
  }
  const LpSolution solution = solve_lp(lp.model);
  if (solution.status != LpStatus::kOptimal) return report;

  report.feasible = true;
  report.target_probability = solution.x[var];
  const double delta = params.delta;
  for (Index w = 0; w < static_cast<Index>(lp.lattice.size()); ++w) {
    const auto& vec = lp.lattice[w];
    double probe_error = 0.0;
    double pf_error = 0.0;
    for (const auto& [level, count] : vec.classes()) {
      probe_error += count * solution.x[lp.variable(w, level)] * 2.0 * delta *
                     level;
    }
    for (Index i = 0; i < vec.size(); ++i) {
      pf_error += pf[w].probs[i] * 2.0 * delta * vec.levels[i];
    }
    const double excess = probe_error - pf_error;
    if (excess > 1e-9 && excess > report.witness_excess) {
      report.witness_excess = excess;
      report.witness = vec.levels;
    }
  }
  return report;
}

}  // namespace pnf
