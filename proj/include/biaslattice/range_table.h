// Copyright 2026 The BiasLattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIASLATTICE_RANGE_TABLE_H_
#define BIASLATTICE_RANGE_TABLE_H_

#include <bit>
#include <cassert>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace biaslattice {

// Sparse table answering idempotent range queries (min, max) over a fixed
// sequence in O(1) after O(n log n) construction.
template <typename T, typename Combine>
class RangeTable {
 public:
  RangeTable() = default;

  explicit RangeTable(std::span<const T> values, Combine combine = Combine())
      : combine_(combine) {
    const std::size_t n = values.size();
    if (n == 0) return;
    levels_.emplace_back(values.begin(), values.end());
    for (std::size_t width = 2; width <= n; width <<= 1) {
      const std::vector<T>& prev = levels_.back();
      std::vector<T> next(n - width + 1);
      const std::size_t half = width >> 1;
      for (std::size_t i = 0; i + width <= n; ++i) {
        next[i] = combine_(prev[i], prev[i + half]);
      }
      levels_.push_back(std::move(next));
    }
  }

  std::size_t size() const { return levels_.empty() ? 0 : levels_[0].size(); }

  // Combined value over the half-open range [lo, hi); requires lo < hi.
  T Query(std::size_t lo, std::size_t hi) const {
    assert(lo < hi && hi <= size());
    const std::size_t level = std::bit_width(hi - lo) - 1;
    const std::vector<T>& row = levels_[level];
    return combine_(row[lo], row[hi - (std::size_t{1} << level)]);
  }

 private:
  Combine combine_{};
  std::vector<std::vector<T>> levels_;
};

template <typename T>
struct MinOf {
  const T& operator()(const T& a, const T& b) const { return b < a ? b : a; }
};

template <typename T>
struct MaxOf {
  const T& operator()(const T& a, const T& b) const { return a < b ? b : a; }
};

}  // namespace biaslattice

#endif  // BIASLATTICE_RANGE_TABLE_H_
