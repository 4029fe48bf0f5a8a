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

#ifndef PNF_SCORES_HPP_
#define PNF_SCORES_HPP_

#include <Eigen/Core>
#include <initializer_list>

namespace pnf {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A finite, non-empty vector of candidate quality scores.
///
/// This is the only view of the data any mechanism gets. Construction
/// rejects empty or non-finite input with `InvalidArgument`.
class QualityScores {
 public:
  explicit QualityScores(Vector values);
  QualityScores(std::initializer_list<double> values);

  const Vector& values() const { return values_; }
  Index size() const { return values_.size(); }
  double operator[](Index r) const { return values_[r]; }

  /// q_*, the largest score.
  double max() const { return max_; }
  /// Number of candidates attaining the maximum.
  Index num_max() const;
  /// q_* - q_r for every candidate.
  Vector gaps() const;

 private:
  Vector values_;
  double max_;
};

/// Privacy budget and sensitivity of the quality function.
///
/// With `monotonic_quality` set, the coin exponent is epsilon / delta
/// instead of epsilon / (2 delta): a monotonic quality function only has
/// one-sided neighbors, so the same budget buys sharper coins.
struct PrivacyParams {
  double epsilon;
  double delta = 1.0;
  bool monotonic_quality = false;

  PrivacyParams(double epsilon, double delta = 1.0,
                bool monotonic_quality = false);

  /// Multiplier applied to q_r - q_* inside the exponent.
  double coin_scale() const {
    return monotonic_quality ? epsilon / delta : epsilon / (2.0 * delta);
  }
  /// Score step whose coin ratio is exactly exp(epsilon).
  double neighbor_step() const {
    return monotonic_quality ? delta : 2.0 * delta;
  }
};

/// Per-candidate acceptance probabilities, each in [0, 1]; exactly 1 on
/// the maxima. Extremely low scores may underflow to 0.
struct CoinProbabilities {
  Vector p;
};

/// Shifts q so that its maximum is exactly zero.
QualityScores normalize_scores(const QualityScores& q);

/// p_r = exp(coin_scale * (q_r - q_*)).
CoinProbabilities coin_probabilities(const QualityScores& q,
                                     const PrivacyParams& params);

}  // namespace pnf

#endif  // PNF_SCORES_HPP_
