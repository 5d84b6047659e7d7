#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gcoo/matrix.hpp"
#include "gcoo/types.hpp"

namespace gcoo {

//---------------------------------------------------------------------------
// MatrixMarket exchange files
//---------------------------------------------------------------------------
//
// Supported headers: matrix, coordinate|array, real|integer|pattern,
// general|symmetric. Coordinate files load as COO (symmetric files are
// expanded eagerly, pattern entries get value 1); array files load as dense.

/// Shortest decimal form that parses back to exactly the same double. Used
/// for every floating-point field the library writes to CSV.
inline std::string format_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Parse failure; the message names the offending 1-based line.
struct ParseError : std::runtime_error {
  std::int64_t line;
  ParseError(const std::string& what, std::int64_t line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

namespace detail {

struct RawMatrixMarket {
  bool dense = false;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  // coordinate: parallel coords/values, sorted row-major
  std::vector<Coord> coords;
  // values per coordinate, or the full rows*cols row-major array
  std::vector<double> values;
};

RawMatrixMarket read_matrix_market_raw(const std::filesystem::path& path);
void write_matrix_market_raw(const std::filesystem::path& path,
                             const RawMatrixMarket& m, int digits);

}  // namespace detail

template <typename T>
using MatrixMarketData = std::variant<DenseMatrix<T>, CooMatrix<T>>;

template <typename T>
MatrixMarketData<T> read_matrix_market(const std::filesystem::path& path) {
  const auto raw = detail::read_matrix_market_raw(path);
  if (raw.dense) {
    DenseMatrix<T> out(raw.rows, raw.cols);
    for (std::size_t i = 0; i < raw.values.size(); ++i)
      out.data[i] = static_cast<T>(raw.values[i]);
    return out;
  }
  CooMatrix<T> out;
  out.rows_dim = raw.rows;
  out.cols_dim = raw.cols;
  out.values.reserve(raw.values.size());
  for (double v : raw.values) out.values.push_back(static_cast<T>(v));
  for (const Coord& c : raw.coords) {
    out.row_idx.push_back(c.row);
    out.col_idx.push_back(c.col);
  }
  out.validate();
  return out;
}

template <typename T>
void write_matrix_market(const CooMatrix<T>& m, const std::filesystem::path& path) {
  m.validate();
  detail::RawMatrixMarket raw;
  raw.dense = false;
  raw.rows = m.rows_dim;
  raw.cols = m.cols_dim;
  for (std::int64_t e = 0; e < m.nnz(); ++e) {
    raw.coords.push_back({m.row_idx[e], m.col_idx[e]});
    raw.values.push_back(static_cast<double>(m.values[e]));
  }
  detail::write_matrix_market_raw(path, raw, std::numeric_limits<T>::max_digits10);
}

template <typename T>
void write_matrix_market(const DenseMatrix<T>& m, const std::filesystem::path& path) {
  detail::RawMatrixMarket raw;
  raw.dense = true;
  raw.rows = m.rows;
  raw.cols = m.cols;
  raw.values.assign(m.data.begin(), m.data.end());
  detail::write_matrix_market_raw(path, raw, std::numeric_limits<T>::max_digits10);
}

//---------------------------------------------------------------------------
// Synthetic matrices
//---------------------------------------------------------------------------

/// Exactly nnz distinct coordinates of a rows x cols grid, drawn uniformly
/// without replacement from the given generator, sorted row-major.
std::vector<Coord> generate_uniform_pattern(std::int64_t rows, std::int64_t cols,
                                            std::int64_t nnz, std::mt19937_64& rng);

/// Seeded variant. The project's generator is std::mt19937_64 with the raw
/// 64-bit stream mapped to values directly, so a (dims, nnz, seed) triple
/// produces the same pattern on every platform.
std::vector<Coord> generate_uniform_pattern(std::int64_t rows, std::int64_t cols,
                                            std::int64_t nnz, std::uint64_t seed);

/// n x n matrix with exactly round(n^2 * (1-s)) nonzeros placed uniformly at
/// random, values uniform in (0, 1]. Identical (n, s, seed) triples produce
/// bitwise-identical matrices.
template <typename T>
DenseMatrix<T> generate_uniform_sparse(std::int64_t n, double s, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_uniform_sparse: n must be >= 1");
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("generate_uniform_sparse: sparsity outside [0,1]");
  const std::int64_t total = n * n;
  const std::int64_t nnz =
      std::llround(static_cast<double>(total) * (1.0 - s));
  std::mt19937_64 rng(seed);
  const auto pattern = generate_uniform_pattern(n, n, nnz, rng);
  DenseMatrix<T> out(n, n);
  for (const Coord& c : pattern) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    out(c.row, c.col) = static_cast<T>(1.0 - u);                    // (0, 1]
  }
  return out;
}

//---------------------------------------------------------------------------
// Dataset records and the benchmark grids
//---------------------------------------------------------------------------

struct MatrixRecord {
  std::string name;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::int64_t nnz = 0;
  double sparsity = 0.0;
};

inline MatrixRecord make_record(std::string name, std::int64_t rows,
                                std::int64_t cols, std::int64_t nnz) {
  if (rows < 1 || cols < 1 || nnz < 0 || nnz > rows * cols)
    throw std::invalid_argument("make_record: inconsistent shape");
  MatrixRecord r;
  r.name = std::move(name);
  r.rows = rows;
  r.cols = cols;
  r.nnz = nnz;
  r.sparsity = 1.0 - static_cast<double>(nnz) /
                         (static_cast<double>(rows) * static_cast<double>(cols));
  return r;
}

/// Selection rules for benchmark suites; the defaults reproduce the square
/// high-sparsity slice the library is tuned for.
struct FilterRules {
  bool require_square = true;
  double min_sparsity = 0.98;
  double max_sparsity = 0.999999;
  std::int64_t min_dim = 64;
  std::int64_t max_dim = 36720;
};

std::vector<MatrixRecord> filter_dataset(std::span<const MatrixRecord> records,
                                         const FilterRules& rules = {});

/// Size and sparsity axes of the synthetic benchmark sweep.
struct SweepGrid {
  std::vector<std::int64_t> sizes;
  std::vector<double> sparsities;
};

/// The full synthetic grid: sizes 400..14500 step 100 and sparsities
/// 0.80..0.995 step 0.005 joined with 0.995..0.9995 step 0.0005.
SweepGrid full_sweep_grid();

/// Every k-th point of both axes, for desk-scale runs.
SweepGrid subsample(const SweepGrid& grid, std::size_t every_k);

//---------------------------------------------------------------------------
// Generated-suite manifest
//---------------------------------------------------------------------------

struct ManifestRow {
  std::string name;
  std::int64_t n = 0;
  double sparsity = 0.0;
  std::uint64_t seed = 0;
  std::string path;
};

/// CSV with columns name,n,sparsity,seed,path.
void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestRow> rows);

}  // namespace gcoo
