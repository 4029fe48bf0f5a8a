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

#include "pnf/exact.hpp"

#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "pnf/error.hpp"

namespace pnf {
namespace {

namespace mp = boost::multiprecision;

// Kahan-Babuska summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Sets the MPFR default precision for the enclosing scope.
class ScopedMpfrPrecision {
 public:
  explicit ScopedMpfrPrecision(int bits)
      : saved_(mp::mpfr_float::default_precision()) {
    // digits10 -> bits conversion inside boost rounds up; pad by one digit.
    const auto digits10 = static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1;
    mp::mpfr_float::default_precision(digits10);
  }
  ~ScopedMpfrPrecision() { mp::mpfr_float::default_precision(saved_); }
  ScopedMpfrPrecision(const ScopedMpfrPrecision&) = delete;
  ScopedMpfrPrecision& operator=(const ScopedMpfrPrecision&) = delete;

 private:
  unsigned saved_;
};

// g(p_r) = sum_k (-1)^k/(k+1) T(k, r) for each query coin, where the
// elementary symmetric sums are taken over `coins` (which must contain
// each query coin once per candidate holding it). Streams T so memory
// stays O(n).
template <typename Scalar>
std::vector<double> pf_factors(const std::vector<double>& coins,
                               const std::vector<double>& queries) {
  const std::size_t m = coins.size();
  std::vector<Scalar> e(m + 1, Scalar(0));
  e[0] = Scalar(1);
  for (std::size_t j = 0; j < m; ++j) {
    const Scalar pj(coins[j]);
    for (std::size_t k = j + 1; k >= 1; --k) {
      e[k] += pj * e[k - 1];
    }
  }
  std::vector<double> out;
  out.reserve(queries.size());
  for (const double query : queries) {
    const Scalar pr(query);
    Scalar t(1);
    Scalar acc(1);
    for (std::size_t k = 1; k < m; ++k) {
      t = e[k] - pr * t;
      if (k % 2 == 1) {
        acc -= t / static_cast<double>(k + 1);
      } else {
        acc += t / static_cast<double>(k + 1);
      }
    }
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

std::vector<double> positive_coins_sorted(const Vector& p) {
  std::vector<double> coins;
  coins.reserve(static_cast<std::size_t>(p.size()));
  for (Index r = 0; r < p.size(); ++r) {
    if (p[r] > 0.0) coins.push_back(p[r]);
  }
  std::sort(coins.begin(), coins.end());
  return coins;
}

void check_cap(const QualityScores& q, Index cap, const char* what) {
  if (q.size() > cap) {
    throw SizeError(std::string(what) + " supports at most " +
                    std::to_string(cap) + " candidates, got " +
                    std::to_string(q.size()));
  }
}

}  // namespace

std::string to_string(PmfMethod method) {
  switch (method) {
    case PmfMethod::kExponential:
      return "exponential";
    case PmfMethod::kPfPermutation:
      return "pf-permutation";
    case PmfMethod::kPfInclusionExclusion:
      return "pf-inclusion-exclusion";
    case PmfMethod::kPfDynamicProgram:
      return "pf-dp";
    case PmfMethod::kNoisyMaxQuadrature:
      return "noisy-max-quadrature";
  }
  return "unknown";
}

SelectionDistribution pmf_exponential(const QualityScores& q,
                                      const PrivacyParams& params) {
  const Vector p = coin_probabilities(q, params).p;
  // Sorted summation keeps the normalizer permutation invariant.
  std::vector<double> sorted(p.data(), p.data() + p.size());
  std::sort(sorted.begin(), sorted.end());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  return {p / total, PmfMethod::kExponential};
}

SelectionDistribution pmf_pf_permutation(const QualityScores& q,
                                         const PrivacyParams& params) {
  check_cap(q, kPermutationOracleMaxN, "permutation oracle");
  const Vector p = coin_probabilities(q, params).p;
  const auto n = static_cast<std::size_t>(q.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<CompensatedSum> before(n);
  double orders = 0.0;
  do {
    double none_yet = 1.0;
    for (const int r : order) {
      before[r].add(none_yet);
      none_yet *= 1.0 - p[r];
    }
    orders += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));

  Vector probs(q.size());
  for (std::size_t r = 0; r < n; ++r) {
    probs[r] = p[r] * before[r].value() / orders;
  }
  return {std::move(probs), PmfMethod::kPfPermutation};
}

SelectionDistribution pmf_pf_inclusion_exclusion(const QualityScores& q,
                                                 const PrivacyParams& params) {
  check_cap(q, kSubsetOracleMaxN, "subset oracle");
  const Vector p = coin_probabilities(q, params).p;
  const auto n = static_cast<unsigned>(q.size());
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> product(subsets);
  product[0] = 1.0;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    const unsigned low = static_cast<unsigned>(__builtin_ctzll(mask));
    product[mask] = product[mask & (mask - 1)] * p[low];
  }
  Vector probs(q.size());
  for (unsigned r = 0; r < n; ++r) {
    CompensatedSum sum;
    const std::size_t bit = std::size_t{1} << r;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const int size = __builtin_popcountll(mask);
      const double term = product[mask] / (size + 1);
      sum.add(size % 2 == 0 ? term : -term);
    }
    probs[r] = p[r] * sum.value();
  }
  return {std::move(probs), PmfMethod::kPfInclusionExclusion};
}

int pf_dp_precision_bits(const Vector& coin_probs) {
  const std::vector<double> coins = positive_coins_sorted(coin_probs);
  if (coins.size() <= 1) return 53;
  // sum_k S(k, n) = prod (1 + p_s) bounds every T(k, r); the streamed
  // recurrence loses about log2(m * that) bits to cancellation.
  double magnitude_bits = std::log2(static_cast<double>(coins.size()));
  for (const double c : coins) magnitude_bits += std::log2(1.0 + c);
  if (magnitude_bits <= 12.0) return 53;
  return 64 + static_cast<int>(std::ceil(magnitude_bits));
}

SelectionDistribution pmf_pf_dp(const QualityScores& q,
                                const PrivacyParams& params) {
  return pmf_pf_dp(q, params,
                   pf_dp_precision_bits(coin_probabilities(q, params).p));
}

SelectionDistribution pmf_pf_dp(const QualityScores& q,
                                const PrivacyParams& params,
                                int precision_bits) {
  const Vector p = coin_probabilities(q, params).p;
  const std::vector<double> coins = positive_coins_sorted(p);

  std::vector<double> distinct = coins;
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());

  std::vector<double> factors;
  if (precision_bits <= 53) {
    factors = pf_factors<double>(coins, distinct);
  } else {
    ScopedMpfrPrecision precision(precision_bits);
    factors = pf_factors<mp::mpfr_float>(coins, distinct);
  }

  Vector probs = Vector::Zero(q.size());
  for (Index r = 0; r < q.size(); ++r) {
    if (p[r] <= 0.0) continue;
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), p[r]);
    probs[r] = p[r] * factors[static_cast<std::size_t>(it - distinct.begin())];
  }
  return {std::move(probs), PmfMethod::kPfDynamicProgram};
}

DpTables dp_tables(const Vector& coin_probs) {
  const Index n = coin_probs.size();
  DpTables tables{Eigen::MatrixXd::Zero(n + 1, n + 1),
                  Eigen::MatrixXd::Zero(n + 1, n)};
  auto& S = tables.S;
  auto& T = tables.T;
  S.row(0).setOnes();
  for (Index r = 1; r <= n; ++r) {
    for (Index k = 1; k <= n; ++k) {
      S(k, r) = S(k, r - 1) + coin_probs[r - 1] * S(k - 1, r - 1);
    }
  }
  for (Index r = 0; r < n; ++r) {
    T(0, r) = 1.0;
    for (Index k = 1; k <= n; ++k) {
      T(k, r) = S(k, n) - coin_probs[r] * T(k - 1, r);
    }
  }
  return tables;
}

Vector pmf_from_tables(const DpTables& tables, const Vector& coin_probs) {
  const Index n = coin_probs.size();
  Vector probs(n);
  for (Index r = 0; r < n; ++r) {
    double acc = 0.0;
    for (Index k = 0; k <= n; ++k) {
      const double term = tables.T(k, r) / static_cast<double>(k + 1);
      acc += (k % 2 == 0) ? term : -term;
    }
    probs[r] = coin_probs[r] * acc;
  }
  return probs;
}

double RecurrenceReport::max_violation() const {
  return std::max(case1_max_violation, case2_max_violation);
}

RecurrenceReport verify_recurrence(const QualityScores& q,
                                   const PrivacyParams& params) {
  const QualityScores base = normalize_scores(q);
  const Vector pmf = pmf_pf_dp(base, params).probs;
  const Vector p = coin_probabilities(base, params).p;

  RecurrenceReport report;
  double non_max_mass = 0.0;
  for (Index r = 0; r < base.size(); ++r) {
    if (base[r] == 0.0) continue;
    non_max_mass += pmf[r];
    Vector raised = base.values();
    raised[r] = 0.0;
    const double lifted = pmf_pf_dp(QualityScores(raised), params).probs[r];
    report.case1_max_violation =
        std::max(report.case1_max_violation, std::abs(pmf[r] - p[r] * lifted));
  }
  const double share =
      (1.0 - non_max_mass) / static_cast<double>(base.num_max());
  for (Index r = 0; r < base.size(); ++r) {
    if (base[r] != 0.0) continue;
    report.case2_max_violation =
        std::max(report.case2_max_violation, std::abs(pmf[r] - share));
  }
  return report;
}

}  // namespace pnf
