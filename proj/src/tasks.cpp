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

#include "pnf/tasks.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "pnf/analysis.hpp"
#include "pnf/error.hpp"
#include "pnf/format.hpp"

namespace pnf {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double error_at(const QualityScores& q, Mechanism mechanism, double epsilon) {
  const PrivacyParams params(epsilon);
  return expected_error(exact_pmf(mechanism, q, params), q);
}

}  // namespace

std::int64_t Histogram::total() const {
  std::int64_t sum = 0;
  for (const auto c : counts) sum += c;
  return sum;
}

Histogram load_histogram(std::istream& in) {
  Histogram h;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!header) {
      if (row != "bin,count") {
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected header 'bin,count'",
                         line_no);
      }
      header = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected two fields 'label,count'",
                       line_no);
    }
    const std::string label = trim(row.substr(0, comma));
    const std::string count_text = trim(row.substr(comma + 1));
    if (label.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty label",
                       line_no);
    }
    std::int64_t count = 0;
    const char* begin = count_text.data();
    const char* end = begin + count_text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, count);
    if (ec != std::errc() || ptr != end) {
      throw ParseError("line " + std::to_string(line_no) + ": count '" +
                           count_text + "' is not an integer",
                       line_no);
    }
    if (count < 0) {
      throw ParseError("line " + std::to_string(line_no) +
                           ": negative count " + count_text,
                       line_no);
    }
    if (!seen.insert(label).second) {
      throw ParseError("line " + std::to_string(line_no) +
                           ": duplicate label '" + label + "'",
                       line_no);
    }
    h.labels.push_back(label);
    h.counts.push_back(count);
  }
  if (h.counts.empty()) {
    throw ParseError(header ? "histogram has no bins" : "histogram is empty",
                     line_no);
  }
  return h;
}

Histogram load_histogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return load_histogram(in);
}

Histogram power_law_histogram(Index bins, double scale, double exponent) {
  if (bins < 1) throw InvalidArgument("need at least one bin");
  Histogram h;
  for (Index r = 1; r <= bins; ++r) {
    h.labels.push_back(std::to_string(r));
    h.counts.push_back(static_cast<std::int64_t>(
        std::floor(scale / std::pow(static_cast<double>(r), exponent))));
  }
  return h;
}

std::string to_string(Task task) {
  return task == Task::kMode ? "mode" : "median";
}

Task parse_task(const std::string& name) {
  if (name == "mode") return Task::kMode;
  if (name == "median") return Task::kMedian;
  throw InvalidArgument("unknown task '" + name + "' (mode|median)");
}

QualityScores mode_scores(const Histogram& h) {
  Vector q(h.size());
  for (Index r = 0; r < h.size(); ++r) q[r] = static_cast<double>(h.counts[r]);
  return QualityScores(q);
}

QualityScores median_scores(const Histogram& h) {
  const std::int64_t total = h.total();
  if (total < 1) throw InvalidArgument("median needs a nonempty histogram");
  const std::int64_t half = total / 2;
  Vector q(h.size());
  std::int64_t below = 0;
  for (Index r = 0; r < h.size(); ++r) {
    const std::int64_t above = total - below - h.counts[r];
    const std::int64_t excess =
        std::max<std::int64_t>({0, below - half, above - half});
    q[r] = -static_cast<double>(excess);
    below += h.counts[r];
  }
  return QualityScores(q);
}

QualityScores task_scores(const Histogram& h, Task task) {
  return task == Task::kMode ? mode_scores(h) : median_scores(h);
}

std::vector<ExperimentRow> sweep_experiment(
    const Histogram& h, Task task, const std::vector<double>& epsilons,
    const std::vector<Mechanism>& mechanisms) {
  const QualityScores q = task_scores(h, task);
  std::vector<ExperimentRow> rows;
  for (const double eps : epsilons) {
    const double pf = error_at(q, Mechanism::kPermuteAndFlip, eps);
    for (const Mechanism m : mechanisms) {
      ExperimentRow row;
      row.epsilon = eps;
      row.mechanism = m;
      row.task = task;
      row.expected_error =
          m == Mechanism::kPermuteAndFlip ? pf : error_at(q, m, eps);
      row.ratio_vs_pf = error_ratio(row.expected_error, pf);
      rows.push_back(row);
    }
  }
  return rows;
}

double epsilon_for_target_error(const QualityScores& q, Mechanism mechanism,
                                double target) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw InvalidArgument("target error must be positive and finite");
  }
  double lo = std::log(kEpsilonSearchMin);
  double hi = std::log(kEpsilonSearchMax);
  const double err_lo = error_at(q, mechanism, kEpsilonSearchMin);
  const double err_hi = error_at(q, mechanism, kEpsilonSearchMax);
  if (target > err_lo || target < err_hi) {
    throw RangeError("target error " + format_number(target) +
                     " outside the achievable range [" +
                     format_number(err_hi) + ", " + format_number(err_lo) +
                     "] for epsilon in [1e-06, 100]");
  }
  // Error decreases in epsilon; stop at relative width 1e-6.
  while (std::expm1(hi - lo) > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (error_at(q, mechanism, std::exp(mid)) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

double epsilon_for_target_error(const Histogram& h, Task task,
                                Mechanism mechanism, double target) {
  return epsilon_for_target_error(task_scores(h, task), mechanism, target);
}

void write_experiment_csv(const std::vector<ExperimentRow>& rows,
                          std::ostream& out) {
  out << "epsilon,mechanism,task,expected_error,ratio_vs_pf\n";
  for (const auto& row : rows) {
    out << format_number(row.epsilon) << ',' << to_string(row.mechanism)
        << ',' << to_string(row.task) << ','
        << format_number(row.expected_error) << ','
        << format_number(row.ratio_vs_pf) << '\n';
  }
}

}  // namespace pnf
