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

#ifndef PNF_TASKS_HPP_
#define PNF_TASKS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pnf/mechanisms.hpp"
#include "pnf/scores.hpp"

namespace pnf {

struct Histogram {
  std::vector<std::string> labels;
  std::vector<std::int64_t> counts;

  Index size() const { return static_cast<Index>(counts.size()); }
  std::int64_t total() const;
};

/// Parses a "bin,count" CSV with a header row. Blank lines are skipped;
/// labels may not contain commas. Throws ParseError naming the 1-based line
/// for a malformed row, a negative count, a duplicate label or an empty
/// input.
Histogram load_histogram(std::istream& in);
Histogram load_histogram(const std::filesystem::path& path);

/// `bins` bins labelled 1..bins with counts floor(scale / r^exponent).
Histogram power_law_histogram(Index bins = 1024, double scale = 1e6,
                              double exponent = 1.1);

enum class Task { kMode, kMedian };

std::string to_string(Task task);
/// Accepts "mode" or "median"; throws InvalidArgument otherwise.
Task parse_task(const std::string& name);

/// q_r = count_r (sensitivity 1).
QualityScores mode_scores(const Histogram& h);

/// q_r = -max(0, B_r - floor(N/2), A_r - floor(N/2)) with B_r (A_r) the
/// mass strictly below (above) bin r. Sensitivity 1. Requires N >= 1.
QualityScores median_scores(const Histogram& h);

QualityScores task_scores(const Histogram& h, Task task);

struct ExperimentRow {
  double epsilon = 0.0;
  Mechanism mechanism = Mechanism::kPermuteAndFlip;
  Task task = Task::kMode;
  double expected_error = 0.0;
  /// expected_error / PF expected error at the same epsilon.
  double ratio_vs_pf = 1.0;
};

/// Exact expected error of each mechanism at each epsilon, in grid-major
/// order, with delta = 1.
std::vector<ExperimentRow> sweep_experiment(
    const Histogram& h, Task task, const std::vector<double>& epsilons,
    const std::vector<Mechanism>& mechanisms);

/// Bracket searched by epsilon_for_target_error.
inline constexpr double kEpsilonSearchMin = 1e-6;
inline constexpr double kEpsilonSearchMax = 100.0;

/// Bisection in log(eps) on [1e-6, 100] to relative width 1e-6 for the
/// epsilon at which `mechanism` has expected error `target`. Throws
/// RangeError when target is not attained on the bracket.
double epsilon_for_target_error(const QualityScores& q, Mechanism mechanism,
                                double target);
double epsilon_for_target_error(const Histogram& h, Task task,
                                Mechanism mechanism, double target);

/// Header "epsilon,mechanism,task,expected_error,ratio_vs_pf".
void write_experiment_csv(const std::vector<ExperimentRow>& rows,
                          std::ostream& out);

}  // namespace pnf

#endif  // PNF_TASKS_HPP_
