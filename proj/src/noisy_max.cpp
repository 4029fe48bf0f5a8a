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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pnf/error.hpp"
#include "pnf/exact.hpp"

namespace pnf {
namespace {

struct Laplace {
  double scale;

  double pdf(double x) const {
    return std::exp(-std::abs(x) / scale) / (2.0 * scale);
  }
  double cdf(double x) const {
    return x < 0 ? 0.5 * std::exp(x / scale)
                 : 1.0 - 0.5 * std::exp(-x / scale);
  }
};

// Density of candidate r's noise times the probability that every other
// noisy score lands below candidate r's.
class WinIntegrand {
 public:
  WinIntegrand(const Laplace& noise, std::vector<std::pair<double, int>> gaps)
      : noise_(noise), gaps_(std::move(gaps)) {}

  double operator()(double x) const {
    double value = noise_.pdf(x);
    for (const auto& [gap, count] : gaps_) {
      const double f = noise_.cdf(gap + x);
      value *= count == 1 ? f : std::pow(f, count);
      if (value == 0.0) break;
    }
    return value;
  }

 private:
  Laplace noise_;
  std::vector<std::pair<double, int>> gaps_;
};

class AdaptiveSimpson {
 public:
  AdaptiveSimpson(const WinIntegrand& f, int max_depth)
      : f_(f), max_depth_(max_depth) {}

  double integrate(double a, double b, double tol) {
    const double fa = f_(a), fb = f_(b), fm = f_(0.5 * (a + b));
    return refine(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol,
                  max_depth_);
  }

  bool converged() const { return converged_; }

 private:
  static double simpson(double a, double b, double fa, double fm,
                        double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double refine(double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f_(lm), frm = f_(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol) {
      return left + right + diff / 15.0;
    }
    if (depth <= 0) {
      converged_ = false;
      return left + right + diff / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  const WinIntegrand& f_;
  int max_depth_;
  bool converged_ = true;
};

}  // namespace

SelectionDistribution pmf_noisy_max(const QualityScores& q,
                                    const PrivacyParams& params,
                                    const QuadratureConfig& config) {
  const Index n = q.size();
  if (n == 1) {
    return {Vector::Ones(1), PmfMethod::kNoisyMaxQuadrature};
  }
  const Laplace noise{1.0 / params.coin_scale()};
  const double half_width = noise.scale * std::log(1.0 / config.tail_mass);

  Vector probs(n);
  for (Index r = 0; r < n; ++r) {
    std::map<double, int> grouped;
    for (Index s = 0; s < n; ++s) {
      if (s != r) ++grouped[q[r] - q[s]];
    }
    std::vector<double> breaks{-half_width, 0.0, half_width};
    for (const auto& [gap, count] : grouped) {
      if (std::abs(gap) < half_width) breaks.push_back(-gap);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const WinIntegrand integrand(
        noise, std::vector<std::pair<double, int>>(grouped.begin(),
                                                   grouped.end()));
    AdaptiveSimpson simpson(integrand, config.max_depth);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i], b = breaks[i + 1];
      const double share = config.abs_tolerance * (b - a) / (2 * half_width);
      total += simpson.integrate(a, b, share);
    }
    if (!simpson.converged()) {
      throw AccuracyError("noisy-max quadrature did not converge for " +
                              std::string("candidate ") + std::to_string(r),
                          total);
    }
    probs[r] = total;
  }
  const double sum = probs.sum();
  SelectionDistribution dist{probs / sum, PmfMethod::kNoisyMaxQuadrature};
  dist.normalization_defect = std::abs(1.0 - sum);
  return dist;
}

}  // namespace pnf
