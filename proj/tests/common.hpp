#pragma once

// Helpers shared by the unit tests and the acceptance suite. The random
// matrices here are generated with test-local code on purpose, so library
// bugs in the sampling paths cannot hide behind matching output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <unordered_set>
#include <vector>

#include "gcoo/matrix.hpp"

namespace testutil {

using rng_t = std::mt19937_64;

/// Uniform integer in [0, bound) without modulo bias.
inline std::uint64_t bounded(rng_t& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Uniform double in [0, 1).
inline double unit(rng_t& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Dense matrix with each cell nonzero independently with probability
/// `density`; values in (0, 1].
template <typename T>
gcoo::DenseMatrix<T> random_dense(std::int64_t rows, std::int64_t cols,
                                  double density, rng_t& rng) {
  gcoo::DenseMatrix<T> a(rows, cols);
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t c = 0; c < cols; ++c)
      if (unit(rng) < density) a(r, c) = static_cast<T>(1.0 - unit(rng));
  return a;
}

/// Exactly `target` distinct coordinates of an rows x cols pattern, sampled
/// uniformly, returned sorted row-major.
inline std::vector<gcoo::Coord> random_pattern(std::int64_t rows, std::int64_t cols,
                                               std::int64_t target, rng_t& rng) {
  std::unordered_set<std::int64_t> seen;
  std::vector<gcoo::Coord> out;
  out.reserve(target);
  while (static_cast<std::int64_t>(out.size()) < target) {
    const std::int64_t cell =
        static_cast<std::int64_t>(bounded(rng, static_cast<std::uint64_t>(rows) * cols));
    if (seen.insert(cell).second)
      out.push_back({static_cast<gcoo::index_t>(cell / cols),
                     static_cast<gcoo::index_t>(cell % cols)});
  }
  std::sort(out.begin(), out.end(), [](const gcoo::Coord& a, const gcoo::Coord& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

/// COO matrix with value 1 at every pattern coordinate.
template <typename T>
gcoo::CooMatrix<T> pattern_to_coo(const std::vector<gcoo::Coord>& pattern,
                                  std::int64_t rows, std::int64_t cols) {
  gcoo::CooMatrix<T> m;
  m.rows_dim = rows;
  m.cols_dim = cols;
  for (const gcoo::Coord& c : pattern) {
    m.values.push_back(T(1));
    m.row_idx.push_back(c.row);
    m.col_idx.push_back(c.col);
  }
  m.validate();
  return m;
}

/// max_ij |x - y| / (|y| + tiny), with y as the reference.
template <typename T, typename U>
double max_rel_err(const gcoo::DenseMatrix<T>& x, const gcoo::DenseMatrix<U>& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double ref = static_cast<double>(y.data[i]);
    const double err =
        std::abs(static_cast<double>(x.data[i]) - ref) / (std::abs(ref) + 1e-30);
    if (err > worst) worst = err;
  }
  return worst;
}

template <typename T>
bool bitwise_equal(const gcoo::DenseMatrix<T>& x, const gcoo::DenseMatrix<T>& y) {
  if (x.rows != y.rows || x.cols != y.cols) return false;
  return std::memcmp(x.data.data(), y.data.data(), x.data.size() * sizeof(T)) == 0;
}

/// The worked 4x4 example used throughout the tests:
///   [ 7  0  0  8 ]
///   [ 0 10  0  0 ]
///   [ 9  0  0  0 ]
///   [ 0  0  6  3 ]
template <typename T>
gcoo::DenseMatrix<T> example4x4() {
  gcoo::DenseMatrix<T> a(4, 4);
  a(0, 0) = T(7);
  a(0, 3) = T(8);
  a(1, 1) = T(10);
  a(2, 0) = T(9);
  a(3, 2) = T(6);
  a(3, 3) = T(3);
  return a;
}

}  // namespace testutil
