#pragma once

#include <cstdint>

namespace gcoo {

// Coordinate index type for sparse storage. 32-bit keeps the index arrays
// compact; dimensions are bounded well below 2^31 in every supported path.
using index_t = std::int32_t;

// Default element type. The whole library is templated on the scalar, so a
// build (or a CLI run) can select double instead.
#ifdef GCOO_SCALAR_F64
using DefaultScalar = double;
#else
using DefaultScalar = float;
#endif

/// One coordinate of a sparsity pattern.
struct Coord {
  index_t row = 0;
  index_t col = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

constexpr bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

}  // namespace gcoo
