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

#include "pnf/mechanisms.hpp"

#include <numeric>
#include <stdexcept>

#include "pnf/error.hpp"

namespace pnf {
namespace {

SamplerResult make_result(Index index, SamplerTrace&& trace,
                          const SamplerOptions& options) {
  SamplerResult result{index, std::nullopt};
  if (options.record_trace) result.trace = std::move(trace);
  return result;
}

SamplerResult flip_in_order(const std::vector<Index>& order, const Vector& p,
                            Rng& rng, const SamplerOptions& options) {
  SamplerTrace trace;
  for (const Index r : order) {
    const bool heads = rng.bernoulli(p[r]);
    if (options.record_trace) {
      trace.visited.push_back(r);
      trace.heads.push_back(heads);
    }
    if (heads) return make_result(r, std::move(trace), options);
  }
  // Unreachable: every maximum has p = 1.
  throw std::logic_error("permute-and-flip exhausted all candidates");
}

}  // namespace

std::string to_string(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kPermuteAndFlip:
      return "pf";
    case Mechanism::kExponential:
      return "em";
    case Mechanism::kReportNoisyMax:
      return "rnm";
  }
  return "unknown";
}

Mechanism parse_mechanism(const std::string& name) {
  if (name == "pf" || name == "permute-and-flip") {
    return Mechanism::kPermuteAndFlip;
  }
  if (name == "em" || name == "exponential") return Mechanism::kExponential;
  if (name == "rnm" || name == "report-noisy-max") {
    return Mechanism::kReportNoisyMax;
  }
  throw InvalidArgument("unknown mechanism '" + name + "'");
}

SamplerResult sample_permute_and_flip(const QualityScores& q,
                                      const PrivacyParams& params, Rng& rng,
                                      const SamplerOptions& options) {
  const Vector p = coin_probabilities(q, params).p;
  const auto n = static_cast<std::size_t>(q.size());
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});

  if (options.pf_order == PfOrder::kShuffleFirst) {
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng.index(i)]);
    }
    return flip_in_order(order, p, rng, options);
  }

  // Draw from the unvisited pool, keeping the pool in index order.
  SamplerTrace trace;
  std::vector<Index> pool = std::move(order);
  while (!pool.empty()) {
    const std::size_t pick = rng.index(pool.size());
    const Index r = pool[pick];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    const bool heads = rng.bernoulli(p[r]);
    if (options.record_trace) {
      trace.visited.push_back(r);
      trace.heads.push_back(heads);
    }
    if (heads) return make_result(r, std::move(trace), options);
  }
  throw std::logic_error("permute-and-flip exhausted all candidates");
}

SamplerResult sample_permute_and_flip(const QualityScores& q,
                                      const PrivacyParams& params,
                                      std::uint64_t seed,
                                      const SamplerOptions& options) {
  Rng rng(seed);
  return sample_permute_and_flip(q, params, rng, options);
}

SamplerResult sample_exponential(const QualityScores& q,
                                 const PrivacyParams& params, Rng& rng,
                                 const SamplerOptions& options) {
  const Vector p = coin_probabilities(q, params).p;
  const double target = rng.uniform() * p.sum();
  double cumulative = 0.0;
  Index chosen = q.size() - 1;
  for (Index r = 0; r < q.size(); ++r) {
    cumulative += p[r];
    if (target < cumulative) {
      chosen = r;
      break;
    }
  }
  // Rounding can leave target >= the final cumulative sum; fall back to
  // the last candidate with positive weight.
  while (p[chosen] == 0.0) --chosen;
  return make_result(chosen, SamplerTrace{}, options);
}

SamplerResult sample_exponential(const QualityScores& q,
                                 const PrivacyParams& params,
                                 std::uint64_t seed,
                                 const SamplerOptions& options) {
  Rng rng(seed);
  return sample_exponential(q, params, rng, options);
}

SamplerResult sample_exponential_rejection(const QualityScores& q,
                                           const PrivacyParams& params,
                                           Rng& rng,
                                           const SamplerOptions& options) {
  const Vector p = coin_probabilities(q, params).p;
  const auto n = static_cast<std::size_t>(q.size());
  SamplerTrace trace;
  for (std::uint64_t i = 0; i < options.max_iterations; ++i) {
    const auto r = static_cast<Index>(rng.index(n));
    const bool heads = rng.bernoulli(p[r]);
    if (options.record_trace) {
      trace.visited.push_back(r);
      trace.heads.push_back(heads);
    }
    if (heads) return make_result(r, std::move(trace), options);
  }
  throw std::runtime_error("rejection sampler exceeded " +
                           std::to_string(options.max_iterations) +
                           " iterations");
}

SamplerResult sample_exponential_rejection(const QualityScores& q,
                                           const PrivacyParams& params,
                                           std::uint64_t seed,
                                           const SamplerOptions& options) {
  Rng rng(seed);
  return sample_exponential_rejection(q, params, rng, options);
}

SamplerResult sample_report_noisy_max(const QualityScores& q,
                                      const PrivacyParams& params, Rng& rng,
                                      const SamplerOptions& options) {
  const double scale = 1.0 / params.coin_scale();
  SamplerTrace trace;
  Index best = 0;
  double best_value = 0.0;
  for (Index r = 0; r < q.size(); ++r) {
    const double noisy = q[r] + rng.laplace(scale);
    if (options.record_trace) trace.noisy_scores.push_back(noisy);
    if (r == 0 || noisy > best_value) {
      best = r;
      best_value = noisy;
    }
  }
  return make_result(best, std::move(trace), options);
}

SamplerResult sample_report_noisy_max(const QualityScores& q,
                                      const PrivacyParams& params,
                                      std::uint64_t seed,
                                      const SamplerOptions& options) {
  Rng rng(seed);
  return sample_report_noisy_max(q, params, rng, options);
}

SamplerKind parse_sampler(const std::string& name) {
  if (name == "pf") return SamplerKind::kPermuteAndFlip;
  if (name == "pf-wr") return SamplerKind::kPermuteAndFlipWithoutReplacement;
  if (name == "em") return SamplerKind::kExponential;
  if (name == "em-rejection") return SamplerKind::kExponentialRejection;
  if (name == "rnm") return SamplerKind::kReportNoisyMax;
  throw InvalidArgument("unknown sampler '" + name + "'");
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kPermuteAndFlip:
      return "pf";
    case SamplerKind::kPermuteAndFlipWithoutReplacement:
      return "pf-wr";
    case SamplerKind::kExponential:
      return "em";
    case SamplerKind::kExponentialRejection:
      return "em-rejection";
    case SamplerKind::kReportNoisyMax:
      return "rnm";
  }
  return "unknown";
}

Mechanism target_mechanism(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kPermuteAndFlip:
    case SamplerKind::kPermuteAndFlipWithoutReplacement:
      return Mechanism::kPermuteAndFlip;
    case SamplerKind::kExponential:
    case SamplerKind::kExponentialRejection:
      return Mechanism::kExponential;
    case SamplerKind::kReportNoisyMax:
      return Mechanism::kReportNoisyMax;
  }
  return Mechanism::kPermuteAndFlip;
}

std::vector<Index> sample_many(SamplerKind kind, const QualityScores& q,
                               const PrivacyParams& params, std::size_t count,
                               std::uint64_t seed) {
  Rng rng(seed);
  SamplerOptions options;
  std::vector<Index> draws;
  draws.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    switch (kind) {
      case SamplerKind::kPermuteAndFlip:
        options.pf_order = PfOrder::kShuffleFirst;
        draws.push_back(sample_permute_and_flip(q, params, rng, options).index);
        break;
      case SamplerKind::kPermuteAndFlipWithoutReplacement:
        options.pf_order = PfOrder::kWithoutReplacement;
        draws.push_back(sample_permute_and_flip(q, params, rng, options).index);
        break;
      case SamplerKind::kExponential:
        draws.push_back(sample_exponential(q, params, rng, options).index);
        break;
      case SamplerKind::kExponentialRejection:
        draws.push_back(
            sample_exponential_rejection(q, params, rng, options).index);
        break;
      case SamplerKind::kReportNoisyMax:
        draws.push_back(sample_report_noisy_max(q, params, rng, options).index);
        break;
    }
  }
  return draws;
}

Vector empirical_pmf(const std::vector<Index>& draws, Index n) {
  Vector counts = Vector::Zero(n);
  for (const Index r : draws) counts[r] += 1.0;
  if (!draws.empty()) counts /= static_cast<double>(draws.size());
  return counts;
}

double total_variation(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("total_variation: length mismatch");
  }
  return 0.5 * (a - b).cwiseAbs().sum();
}

}  // namespace pnf
