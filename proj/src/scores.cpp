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

#include "pnf/scores.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pnf/error.hpp"

namespace pnf {

QualityScores::QualityScores(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) {
    throw InvalidArgument("quality scores must be non-empty");
  }
  for (Index r = 0; r < values_.size(); ++r) {
    if (!std::isfinite(values_[r])) {
      throw InvalidArgument("quality score " + std::to_string(r) +
                            " is not finite");
    }
  }
  max_ = values_.maxCoeff();
}

QualityScores::QualityScores(std::initializer_list<double> values)
    : QualityScores(Vector::Map(values.begin(),
                                static_cast<Index>(values.size()))) {}

Index QualityScores::num_max() const {
  return (values_.array() == max_).count();
}

Vector QualityScores::gaps() const {
  return (max_ - values_.array()).matrix();
}

PrivacyParams::PrivacyParams(double epsilon, double delta,
                             bool monotonic_quality)
    : epsilon(epsilon), delta(delta), monotonic_quality(monotonic_quality) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be positive and finite");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("sensitivity bound must be positive and finite");
  }
}

QualityScores normalize_scores(const QualityScores& q) {
  Vector shifted = q.values().array() - q.max();
  return QualityScores(std::move(shifted));
}

CoinProbabilities coin_probabilities(const QualityScores& q,
                                     const PrivacyParams& params) {
  const double scale = params.coin_scale();
  // std::exp, not Eigen's packet exp, which clamps instead of underflowing.
  const double top = q.max();
  Vector p = q.values().unaryExpr(
      [&](double v) { return std::exp((v - top) * scale); });
  // Maxima get exactly 1 regardless of rounding in the exponent.
  for (Index r = 0; r < p.size(); ++r) {
    if (q[r] == q.max()) p[r] = 1.0;
  }
  return CoinProbabilities{std::move(p)};
}

}  // namespace pnf
