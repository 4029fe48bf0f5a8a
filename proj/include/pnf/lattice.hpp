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

#ifndef PNF_LATTICE_HPP_
#define PNF_LATTICE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "pnf/scores.hpp"

namespace pnf {

/// A canonical score vector on the bounded 2-delta lattice.
///
/// Scores are stored as levels: level t stands for the score -2 delta t.
/// Levels are non-decreasing (scores non-increasing) and start at 0, so
/// q_* = 0. `multiplicity` counts the distinct raw vectors that sort to
/// this one.
struct LatticeVector {
  std::vector<int> levels;
  std::uint64_t multiplicity = 1;

  Index size() const { return static_cast<Index>(levels.size()); }
  /// Number of zero (maximal) entries.
  Index num_max() const;
  Vector scores(double delta) const;
  /// Distinct levels with their counts, in increasing level order.
  std::vector<std::pair<int, int>> classes() const;
};

/// Default cap on the number of canonical vectors.
inline constexpr std::size_t kLatticeCap = 1'000'000;

/// Number of canonical vectors, C(n - 1 + k, k).
double lattice_size(Index n, int k);

/// Every canonical vector with n entries and levels in [0, k], in
/// lexicographic order of levels. Throws SizeError above `cap`.
std::vector<LatticeVector> enumerate_lattice(Index n, int k,
                                             std::size_t cap = kLatticeCap);

/// n! / prod (repeat count)! for a level vector.
std::uint64_t lattice_multiplicity(const std::vector<int>& levels);

/// Lookup from (sorted) levels to position in an enumeration.
class LatticeIndex {
 public:
  explicit LatticeIndex(const std::vector<LatticeVector>& lattice);
  /// Sorts `levels` and returns its position, or -1 if absent.
  std::ptrdiff_t find(std::vector<int> levels) const;

 private:
  std::map<std::vector<int>, std::ptrdiff_t> index_;
};

}  // namespace pnf

#endif  // PNF_LATTICE_HPP_
