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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pnf/error.hpp"
#include "pnf/rng.hpp"

namespace pnf {
namespace {

void check_lengths(const SelectionDistribution& dist, const QualityScores& q) {
  if (dist.size() != q.size()) {
    throw InvalidArgument("distribution has " + std::to_string(dist.size()) +
                          " entries but there are " +
                          std::to_string(q.size()) + " scores");
  }
}

std::vector<double> distinct_gaps(const QualityScores& q) {
  const Vector gaps = q.gaps();
  std::vector<double> out(gaps.data(), gaps.data() + gaps.size());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// 1 - (1 - (1-p)^n) / (n p), written as the mean of 1 - (1-p)^j over
// j < n so every term is non-negative.
double pf_worst_case_bracket(double p, Index n) {
  if (p >= 1.0) return 1.0 - 1.0 / static_cast<double>(n);
  const double log_keep = std::log1p(-p);
  if (n > 100000) {
    const double hit = -std::expm1(static_cast<double>(n) * log_keep);
    return 1.0 - hit / (static_cast<double>(n) * p);
  }
  double sum = 0.0;
  for (Index j = 1; j < n; ++j) {
    sum += -std::expm1(static_cast<double>(j) * log_keep);
  }
  return sum / static_cast<double>(n);
}

Vector permute(const Vector& v, const std::vector<Index>& perm) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = v[perm[i]];
  return out;
}

}  // namespace

double expected_error(const SelectionDistribution& dist,
                      const QualityScores& q) {
  check_lengths(dist, q);
  return std::max(0.0, dist.probs.dot(q.gaps()));
}

double error_ccdf(const SelectionDistribution& dist, const QualityScores& q,
                  double t) {
  check_lengths(dist, q);
  if (t <= 0.0) return 1.0;
  const Vector gaps = q.gaps();
  double mass = 0.0;
  for (Index r = 0; r < q.size(); ++r) {
    if (gaps[r] >= t) mass += dist.probs[r];
  }
  return mass;
}

ErrorProfile error_profile(const SelectionDistribution& dist,
                           const QualityScores& q) {
  ErrorProfile profile;
  profile.expected_error = expected_error(dist, q);
  for (const double t : distinct_gaps(q)) {
    profile.ccdf.emplace_back(t, error_ccdf(dist, q, t));
  }
  return profile;
}

SelectionDistribution exact_pmf(Mechanism mechanism, const QualityScores& q,
                                const PrivacyParams& params,
                                const QuadratureConfig& quadrature) {
  switch (mechanism) {
    case Mechanism::kPermuteAndFlip:
      return pmf_pf_dp(q, params);
    case Mechanism::kExponential:
      return pmf_exponential(q, params);
    case Mechanism::kReportNoisyMax:
      return pmf_noisy_max(q, params, quadrature);
  }
  throw InvalidArgument("unknown mechanism");
}

double error_ratio(double numerator, double denominator) {
  if (denominator == 0.0) {
    return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return numerator / denominator;
}

DominanceReport check_dominance(const QualityScores& q,
                                const PrivacyParams& params) {
  const SelectionDistribution pf = pmf_pf_dp(q, params);
  const SelectionDistribution em = pmf_exponential(q, params);
  DominanceReport report;
  report.pf_expected_error = expected_error(pf, q);
  report.em_expected_error = expected_error(em, q);
  report.ratio = error_ratio(report.em_expected_error,
                             report.pf_expected_error);
  for (const double t : distinct_gaps(q)) {
    const double a = error_ccdf(pf, q, t);
    const double b = error_ccdf(em, q, t);
    report.table.push_back({t, a, b});
    report.max_ccdf_violation = std::max(report.max_ccdf_violation, a - b);
  }
  return report;
}

double worst_case_value(Mechanism mechanism, double p, Index n,
                        const PrivacyParams& params) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidArgument("worst-case coin probability must lie in (0, 1]");
  }
  if (n < 1) throw InvalidArgument("need at least one candidate");
  const double scale = 1.0 / params.coin_scale();
  const double lost = -std::log(p) * scale;
  if (lost == 0.0 || n == 1) return 0.0;
  switch (mechanism) {
    case Mechanism::kExponential: {
      const double others = static_cast<double>(n - 1) * p;
      return lost * others / (1.0 + others);
    }
    case Mechanism::kPermuteAndFlip:
      return lost * pf_worst_case_bracket(p, n);
    case Mechanism::kReportNoisyMax:
      break;
  }
  throw InvalidArgument("no closed-form worst case for report-noisy-max");
}

QualityScores worst_case_scores(double p, Index n,
                                const PrivacyParams& params) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidArgument("worst-case coin probability must lie in (0, 1]");
  }
  if (n < 1) throw InvalidArgument("need at least one candidate");
  Vector scores = Vector::Constant(n, std::log(p) / params.coin_scale());
  scores[n - 1] = 0.0;
  return QualityScores(std::move(scores));
}

WorstCasePoint worst_case_maximize(Mechanism mechanism, Index n,
                                   const PrivacyParams& params) {
  if (n < 2) throw InvalidArgument("worst-case maximization needs n >= 2");
  constexpr int kGrid = 1024;
  std::vector<double> grid(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = std::pow(10.0, -12.0 + 12.0 * i / (kGrid - 1));
  }
  grid.back() = 1.0;
  auto value = [&](double p) {
    return worst_case_value(mechanism, p, n, params);
  };

  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    const double v = value(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = grid[std::max(best - 1, 0)];
  double hi = grid[std::min(best + 1, kGrid - 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = value(a), fb = value(b);
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * 0.5 * (hi + lo); ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = value(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = value(a);
    }
  }
  WorstCasePoint refined{0.5 * (lo + hi), value(0.5 * (lo + hi))};
  if (refined.value < best_value) refined = {grid[best], best_value};
  return refined;
}

WorstCaseCurve worst_case_curve(Mechanism mechanism, Index n,
                                const PrivacyParams& params,
                                const std::vector<double>& p_grid) {
  WorstCaseCurve curve{mechanism, {}, worst_case_maximize(mechanism, n, params)};
  for (const double p : p_grid) {
    curve.points.push_back({p, worst_case_value(mechanism, p, n, params)});
  }
  return curve;
}

UtilityBounds utility_bounds(Index n, const PrivacyParams& params, double t) {
  if (n < 1) throw InvalidArgument("need at least one candidate");
  if (!(t >= 0.0)) throw InvalidArgument("tail offset t must be >= 0");
  return {std::log(static_cast<double>(n)) / params.coin_scale(),
          std::exp(-t)};
}

LowerBound lower_bound(Index n, const PrivacyParams& params) {
  if (n < 2) throw InvalidArgument("lower bound needs n >= 2");
  const double scale = 1.0 / params.coin_scale();
  const double log_n = std::log(static_cast<double>(n));
  const double keep =
      std::exp(static_cast<double>(n) *
               std::log1p(-1.0 / static_cast<double>(n)));
  return {0.25 * scale * log_n, scale * log_n * keep, scale * log_n};
}

PrivacyReport verify_privacy_on_lattice(Index n, int k,
                                        const PrivacyParams& params) {
  if (n < 1 || k < 0) throw InvalidArgument("need n >= 1 and k >= 0");
  const double raw = std::pow(k + 1.0, static_cast<double>(n));
  if (raw > static_cast<double>(kPrivacyLatticeCap)) {
    throw SizeError("privacy lattice with n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + " is too large");
  }
  const double spacing = 2.0 * params.delta;
  const double step = params.neighbor_step();

  PrivacyReport report;
  report.bound = params.epsilon;
  report.max_log_ratio = -std::numeric_limits<double>::infinity();
  std::vector<int> levels(static_cast<std::size_t>(n), 0);
  while (true) {
    if (std::find(levels.begin(), levels.end(), 0) != levels.end()) {
      Vector scores(n);
      for (Index i = 0; i < n; ++i) scores[i] = -spacing * levels[i];
      const QualityScores q(scores);
      const Vector base = pmf_pf_dp(q, params).probs;
      ++report.vectors;
      for (Index r = 0; r < n; ++r) {
        Vector lifted = scores;
        lifted[r] += step;
        const double up = pmf_pf_dp(QualityScores(lifted), params).probs[r];
        const double log_ratio = std::log(up / base[r]);
        ++report.pairs;
        report.max_log_ratio = std::max(report.max_log_ratio, log_ratio);
        if (scores[r] <= -step) {
          ++report.tight_pairs;
          report.max_tightness_gap =
              std::max(report.max_tightness_gap,
                       std::abs(log_ratio - params.epsilon));
        }
      }
    }
    // Next vector in {0..k}^n, odometer order.
    Index i = 0;
    while (i < n && levels[i] == k) levels[i++] = 0;
    if (i == n) break;
    ++levels[i];
  }
  return report;
}

RegularityReport verify_regularity(const PrivacyParams& params, int trials,
                                   std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("need at least one trial");
  RegularityReport report;
  Rng rng(seed);
  auto pmfs = [&](const QualityScores& q) {
    return std::array<Vector, 2>{pmf_pf_dp(q, params).probs,
                                 pmf_exponential(q, params).probs};
  };
  for (int trial = 0; trial < trials; ++trial) {
    const auto n = static_cast<Index>(1 + rng.index(8));
    // Multiples of 1/4 in [-10, 0]: integer shifts of these are exact.
    Vector scores(n);
    for (Index i = 0; i < n; ++i) {
      scores[i] = -0.25 * static_cast<double>(rng.index(41));
    }
    const QualityScores q(scores);
    const auto base = pmfs(q);

    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.index(i)]);
    }
    const auto permuted = pmfs(QualityScores(permute(scores, perm)));

    const double exact_shift = static_cast<double>(rng.index(101)) - 50.0;
    const auto shifted = pmfs(QualityScores(
        (scores.array() + exact_shift).matrix()));
    const double real_shift = 200.0 * rng.uniform() - 100.0;
    const auto real_shifted = pmfs(QualityScores(
        (scores.array() + real_shift).matrix()));

    const auto r = static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
    const double up = 2.0 * rng.uniform();
    const double down = 2.0 * rng.uniform();
    Vector moved = (scores.array() - down).matrix();
    moved[r] = scores[r] + up;
    const auto raised = pmfs(QualityScores(moved));

    for (int m = 0; m < 2; ++m) {
      report.symmetry_max_diff =
          std::max(report.symmetry_max_diff,
                   (permuted[m] - permute(base[m], perm)).cwiseAbs().maxCoeff());
      report.exact_shift_max_diff =
          std::max(report.exact_shift_max_diff,
                   (shifted[m] - base[m]).cwiseAbs().maxCoeff());
      report.real_shift_max_diff =
          std::max(report.real_shift_max_diff,
                   (real_shifted[m] - base[m]).cwiseAbs().maxCoeff());
      report.monotonicity_max_drop =
          std::max(report.monotonicity_max_drop, base[m][r] - raised[m][r]);
    }
    ++report.trials;
  }
  return report;
}

QualityScores random_scores(Rng& rng, Index n, double spread) {
  if (n < 1) throw InvalidArgument("need n >= 1");
  Vector scores(n);
  for (Index i = 0; i < n; ++i) {
    if (i > 0 && rng.uniform() < 0.25) {
      scores[i] = scores[static_cast<Index>(rng.index(static_cast<std::size_t>(i)))];
    } else {
      scores[i] = -spread * rng.uniform();
    }
  }
  scores[static_cast<Index>(rng.index(static_cast<std::size_t>(n)))] = 0.0;
  return QualityScores(scores);
}

OracleReport verify_oracles(int trials, std::uint64_t seed, Index max_n) {
  if (trials < 1) throw InvalidArgument("need at least one trial");
  if (max_n < 1 || max_n > kPermutationOracleMaxN) {
    throw InvalidArgument("max_n must lie in [1, 10]");
  }
  constexpr std::array<double, 3> kEpsilons = {0.1, 1.0, 5.0};
  OracleReport report;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto n =
        static_cast<Index>(1 + rng.index(static_cast<std::size_t>(max_n)));
    const QualityScores q = random_scores(rng, n);
    const PrivacyParams params(kEpsilons[trial % kEpsilons.size()]);
    const Vector dp = pmf_pf_dp(q, params).probs;
    report.max_permutation_diff =
        std::max(report.max_permutation_diff,
                 (dp - pmf_pf_permutation(q, params).probs).cwiseAbs().maxCoeff());
    report.max_subset_diff = std::max(
        report.max_subset_diff,
        (dp - pmf_pf_inclusion_exclusion(q, params).probs).cwiseAbs().maxCoeff());
    ++report.instances;
  }
  return report;
}

DominanceSweep verify_dominance(int trials, std::uint64_t seed, Index max_n,
                                double tolerance) {
  if (trials < 1) throw InvalidArgument("need at least one trial");
  if (max_n < 1) throw InvalidArgument("need max_n >= 1");
  DominanceSweep sweep;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto n =
        static_cast<Index>(1 + rng.index(static_cast<std::size_t>(max_n)));
    const QualityScores q = random_scores(rng, n);
    const double eps = std::exp(std::log(0.05) + rng.uniform() * std::log(200.0));
    const DominanceReport report = check_dominance(q, PrivacyParams(eps));
    sweep.max_ccdf_violation =
        std::max(sweep.max_ccdf_violation, report.max_ccdf_violation);
    sweep.max_error_violation =
        std::max(sweep.max_error_violation,
                 report.pf_expected_error - report.em_expected_error);
    if (!report.holds(tolerance)) ++sweep.violations;
    ++sweep.instances;
  }
  return sweep;
}

double noisy_max_expected_error(double c, Index n, const PrivacyParams& params,
                                const QuadratureConfig& quadrature) {
  if (!(c <= 0.0)) throw InvalidArgument("c must be <= 0");
  if (n < 1) throw InvalidArgument("need at least one candidate");
  if (c == 0.0 || n == 1) return 0.0;
  Vector scores = Vector::Constant(n, c);
  scores[n - 1] = 0.0;
  const SelectionDistribution dist =
      pmf_noisy_max(QualityScores(scores), params, quadrature);
  return -c * (1.0 - dist.probs[n - 1]);
}

}  // namespace pnf
