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

#ifndef PNF_MECHANISMS_HPP_
#define PNF_MECHANISMS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnf/rng.hpp"
#include "pnf/scores.hpp"

namespace pnf {

enum class Mechanism {
  kPermuteAndFlip,
  kExponential,
  kReportNoisyMax,
};

std::string to_string(Mechanism mechanism);
/// Accepts "pf", "em", "rnm" (and the long names from to_string).
Mechanism parse_mechanism(const std::string& name);

/// Record of what a sampler looked at, for tests and debugging.
struct SamplerTrace {
  /// Candidates in the order their coins were flipped (PF, rejection EM).
  std::vector<Index> visited;
  /// Coin outcome for each entry of `visited`.
  std::vector<bool> heads;
  /// Noisy scores (report-noisy-max only).
  std::vector<double> noisy_scores;
};

struct SamplerResult {
  Index index;
  std::optional<SamplerTrace> trace;
};

/// How permute-and-flip walks the candidates. Both orders visit a
/// uniformly random permutation; they differ only in how it is drawn.
enum class PfOrder {
  /// Fisher-Yates shuffle up front, then flip in that order.
  kShuffleFirst,
  /// Draw the next candidate uniformly from those not yet visited.
  kWithoutReplacement,
};

struct SamplerOptions {
  bool record_trace = false;
  PfOrder pf_order = PfOrder::kShuffleFirst;
  /// Rejection-sampling guard against coins that underflowed to zero.
  std::uint64_t max_iterations = 10'000'000;
};

SamplerResult sample_permute_and_flip(const QualityScores& q,
                                      const PrivacyParams& params, Rng& rng,
                                      const SamplerOptions& options = {});
SamplerResult sample_permute_and_flip(const QualityScores& q,
                                      const PrivacyParams& params,
                                      std::uint64_t seed,
                                      const SamplerOptions& options = {});

/// Inverse-CDF draw from the normalized exponential weights.
SamplerResult sample_exponential(const QualityScores& q,
                                 const PrivacyParams& params, Rng& rng,
                                 const SamplerOptions& options = {});
SamplerResult sample_exponential(const QualityScores& q,
                                 const PrivacyParams& params,
                                 std::uint64_t seed,
                                 const SamplerOptions& options = {});

/// The exponential mechanism as rejection sampling: draw a candidate
/// uniformly with replacement, accept with probability p_r. Throws
/// std::runtime_error after `max_iterations` consecutive rejections.
SamplerResult sample_exponential_rejection(const QualityScores& q,
                                           const PrivacyParams& params,
                                           Rng& rng,
                                           const SamplerOptions& options = {});
SamplerResult sample_exponential_rejection(const QualityScores& q,
                                           const PrivacyParams& params,
                                           std::uint64_t seed,
                                           const SamplerOptions& options = {});

/// Adds Laplace(1 / coin_scale) noise to every score and returns the
/// argmax, lowest index on ties.
SamplerResult sample_report_noisy_max(const QualityScores& q,
                                      const PrivacyParams& params, Rng& rng,
                                      const SamplerOptions& options = {});
SamplerResult sample_report_noisy_max(const QualityScores& q,
                                      const PrivacyParams& params,
                                      std::uint64_t seed,
                                      const SamplerOptions& options = {});

/// Which sampler implementation to run in bulk.
enum class SamplerKind {
  kPermuteAndFlip,
  kPermuteAndFlipWithoutReplacement,
  kExponential,
  kExponentialRejection,
  kReportNoisyMax,
};

/// Accepts "pf", "pf-wr", "em", "em-rejection", "rnm".
SamplerKind parse_sampler(const std::string& name);
std::string to_string(SamplerKind kind);
/// The distribution a sampler targets.
Mechanism target_mechanism(SamplerKind kind);

/// `count` draws from one Rng stream seeded with `seed`.
std::vector<Index> sample_many(SamplerKind kind, const QualityScores& q,
                               const PrivacyParams& params, std::size_t count,
                               std::uint64_t seed);

/// Empirical frequencies of `draws` over n candidates.
Vector empirical_pmf(const std::vector<Index>& draws, Index n);

/// Total variation distance, 0.5 * sum |a - b|.
double total_variation(const Vector& a, const Vector& b);

}  // namespace pnf

#endif  // PNF_MECHANISMS_HPP_
