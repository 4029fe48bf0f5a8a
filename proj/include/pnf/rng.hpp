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

#ifndef PNF_RNG_HPP_
#define PNF_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace pnf {

/// Reproducible random source for the samplers.
///
/// The engine is std::mt19937_64 seeded through std::seed_seq with the
/// four 32-bit words (seed lo, seed hi, stream lo, stream hi). Both the
/// engine and seed_seq are fully specified by the standard, and all
/// derived draws below are computed here rather than through
/// std::*_distribution, so a (seed, stream) pair yields the same sequence
/// on every conforming platform. Independent streams of one seed are
/// obtained by varying `stream`.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Uniform integer in [0, n). Unbiased (rejection on the top bits).
  std::size_t index(std::size_t n);
  /// True with probability p. p >= 1 always succeeds, p <= 0 never does.
  bool bernoulli(double p) { return uniform() < p; }
  /// Laplace(0, scale) by inverse CDF.
  double laplace(double scale);

 private:
  std::mt19937_64 engine_;
};

/// Default seed when neither a flag nor PNF_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20200609;

}  // namespace pnf

#endif  // PNF_RNG_HPP_
