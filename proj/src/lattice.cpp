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

#include "pnf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnf/error.hpp"

namespace pnf {

Index LatticeVector::num_max() const {
  return static_cast<Index>(std::count(levels.begin(), levels.end(), 0));
}

Vector LatticeVector::scores(double delta) const {
  Vector out(size());
  for (Index i = 0; i < size(); ++i) out[i] = -2.0 * delta * levels[i];
  return out;
}

std::vector<std::pair<int, int>> LatticeVector::classes() const {
  std::vector<std::pair<int, int>> out;
  for (const int level : levels) {
    if (!out.empty() && out.back().first == level) {
      ++out.back().second;
    } else {
      out.emplace_back(level, 1);
    }
  }
  return out;
}

double lattice_size(Index n, int k) {
  // C(n - 1 + k, k)
  double size = 1.0;
  for (int i = 1; i <= k; ++i) {
    size = size * static_cast<double>(n - 1 + i) / i;
  }
  return std::round(size);
}

std::uint64_t lattice_multiplicity(const std::vector<int>& levels) {
  std::vector<int> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  // Product of binomials C(placed + run, run) over runs of equal levels.
  std::uint64_t total = 1;
  std::uint64_t placed = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const std::uint64_t run = j - i;
    std::uint64_t binom = 1;
    for (std::uint64_t t = 1; t <= run; ++t) {
      binom = binom * (placed + t) / t;
    }
    total *= binom;
    placed += run;
    i = j;
  }
  return total;
}

std::vector<LatticeVector> enumerate_lattice(Index n, int k, std::size_t cap) {
  if (n < 1 || k < 0) throw InvalidArgument("need n >= 1 and k >= 0");
  if (lattice_size(n, k) > static_cast<double>(cap)) {
    throw SizeError("lattice with n=" + std::to_string(n) + ", k=" +
                    std::to_string(k) + " has more than " +
                    std::to_string(cap) + " canonical vectors");
  }
  std::vector<LatticeVector> out;
  std::vector<int> levels(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back({levels, lattice_multiplicity(levels)});
    // Next non-decreasing sequence with levels[0] == 0.
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1;
    while (i >= 1 && levels[i] == k) --i;
    if (i < 1) break;
    const int next = levels[i] + 1;
    for (std::ptrdiff_t j = i; j < static_cast<std::ptrdiff_t>(n); ++j) {
      levels[j] = next;
    }
  }
  return out;
}

LatticeIndex::LatticeIndex(const std::vector<LatticeVector>& lattice) {
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    index_.emplace(lattice[i].levels, static_cast<std::ptrdiff_t>(i));
  }
}

std::ptrdiff_t LatticeIndex::find(std::vector<int> levels) const {
  std::sort(levels.begin(), levels.end());
  const auto it = index_.find(levels);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace pnf
