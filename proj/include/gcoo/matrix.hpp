#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gcoo/types.hpp"

namespace gcoo {

//---------------------------------------------------------------------------
// Dense storage
//---------------------------------------------------------------------------

/// Row-major dense matrix. Dimensions are fixed at construction and must be
/// at least 1x1; a freshly constructed matrix is all zeros.
template <typename T>
struct DenseMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<T> data;  // rows*cols elements, row-major

  DenseMatrix() = default;

  DenseMatrix(std::int64_t r, std::int64_t c) : rows(r), cols(c) {
    if (r < 1 || c < 1)
      throw std::invalid_argument("DenseMatrix: dimensions must be >= 1");
    data.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), T(0));
  }

  T& operator()(std::int64_t r, std::int64_t c) {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  const T& operator()(std::int64_t r, std::int64_t c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }

  const T* row_ptr(std::int64_t r) const {
    return data.data() + static_cast<std::size_t>(r) * cols;
  }
  T* row_ptr(std::int64_t r) {
    return data.data() + static_cast<std::size_t>(r) * cols;
  }

  std::int64_t nnz() const {
    std::int64_t n = 0;
    for (const T& v : data)
      if (v != T(0)) ++n;
    return n;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

/// Fraction of exactly-zero elements.
template <typename T>
double sparsity(const DenseMatrix<T>& a) {
  const double total = static_cast<double>(a.rows) * static_cast<double>(a.cols);
  return 1.0 - static_cast<double>(a.nnz()) / total;
}

//---------------------------------------------------------------------------
// COO
//---------------------------------------------------------------------------

/// Coordinate-format sparse matrix. Entries are kept in row-major order
/// (strictly increasing (row, col)), which also rules out duplicates.
template <typename T>
struct CooMatrix {
  std::int64_t rows_dim = 0;
  std::int64_t cols_dim = 0;
  std::vector<T> values;
  std::vector<index_t> row_idx;
  std::vector<index_t> col_idx;

  CooMatrix() = default;

  CooMatrix(std::int64_t rows, std::int64_t cols, std::vector<T> vals,
            std::vector<index_t> ri, std::vector<index_t> ci)
      : rows_dim(rows),
        cols_dim(cols),
        values(std::move(vals)),
        row_idx(std::move(ri)),
        col_idx(std::move(ci)) {
    validate();
  }

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

  void validate() const {
    if (rows_dim < 1 || cols_dim < 1)
      throw std::invalid_argument("CooMatrix: dimensions must be >= 1");
    if (values.size() != row_idx.size() || values.size() != col_idx.size())
      throw std::invalid_argument("CooMatrix: array lengths differ");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (row_idx[i] < 0 || row_idx[i] >= rows_dim || col_idx[i] < 0 ||
          col_idx[i] >= cols_dim)
        throw std::invalid_argument("CooMatrix: coordinate out of range at entry " +
                                    std::to_string(i));
      if (i > 0) {
        // strict row-major order; equality would be a duplicate coordinate
        const bool ok = row_idx[i - 1] < row_idx[i] ||
                        (row_idx[i - 1] == row_idx[i] && col_idx[i - 1] < col_idx[i]);
        if (!ok)
          throw std::invalid_argument(
              "CooMatrix: entries not in row-major order (or duplicate) at entry " +
              std::to_string(i));
      }
    }
  }
};

//---------------------------------------------------------------------------
// CSR
//---------------------------------------------------------------------------

template <typename T>
struct CsrMatrix {
  std::int64_t rows_dim = 0;
  std::int64_t cols_dim = 0;
  std::vector<T> values;
  std::vector<index_t> col_idx;
  std::vector<std::int64_t> row_ptr;  // rows_dim+1 offsets

  CsrMatrix() = default;

  CsrMatrix(std::int64_t rows, std::int64_t cols, std::vector<T> vals,
            std::vector<index_t> ci, std::vector<std::int64_t> rp)
      : rows_dim(rows),
        cols_dim(cols),
        values(std::move(vals)),
        col_idx(std::move(ci)),
        row_ptr(std::move(rp)) {
    validate();
  }

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

  void validate() const {
    if (rows_dim < 1 || cols_dim < 1)
      throw std::invalid_argument("CsrMatrix: dimensions must be >= 1");
    if (values.size() != col_idx.size())
      throw std::invalid_argument("CsrMatrix: array lengths differ");
    if (row_ptr.size() != static_cast<std::size_t>(rows_dim) + 1)
      throw std::invalid_argument("CsrMatrix: row_ptr must have rows_dim+1 entries");
    if (row_ptr.front() != 0 || row_ptr.back() != nnz())
      throw std::invalid_argument("CsrMatrix: row_ptr endpoints wrong");
    for (std::int64_t r = 0; r < rows_dim; ++r) {
      if (row_ptr[r] > row_ptr[r + 1])
        throw std::invalid_argument("CsrMatrix: row_ptr not monotone");
      for (std::int64_t e = row_ptr[r]; e < row_ptr[r + 1]; ++e) {
        if (col_idx[e] < 0 || col_idx[e] >= cols_dim)
          throw std::invalid_argument("CsrMatrix: column out of range");
        if (e > row_ptr[r] && col_idx[e - 1] >= col_idx[e])
          throw std::invalid_argument("CsrMatrix: columns not strictly increasing in row " +
                                      std::to_string(r));
      }
    }
  }
};

//---------------------------------------------------------------------------
// GCOO
//---------------------------------------------------------------------------

/// Grouped COO: the rows are partitioned into g = ceil(rows_dim/p) bands of p
/// consecutive rows, and each band stores its entries as a COO slice ordered
/// by (col, row). The per-group slices are concatenated; g_idxes[i] is the
/// offset of group i's slice and nnz_per_group[i] its length. p must be a
/// power of two so that row & (p-1) recovers the row's slot inside its band.
template <typename T>
struct GcooMatrix {
  std::int64_t rows_dim = 0;
  std::int64_t cols_dim = 0;
  index_t p = 0;
  std::vector<T> values;
  std::vector<index_t> row_idx;
  std::vector<index_t> col_idx;
  std::vector<std::int64_t> g_idxes;
  std::vector<std::int64_t> nnz_per_group;

  GcooMatrix() = default;

  GcooMatrix(std::int64_t rows, std::int64_t cols, index_t group_rows,
             std::vector<T> vals, std::vector<index_t> ri, std::vector<index_t> ci,
             std::vector<std::int64_t> gidx, std::vector<std::int64_t> gnnz)
      : rows_dim(rows),
        cols_dim(cols),
        p(group_rows),
        values(std::move(vals)),
        row_idx(std::move(ri)),
        col_idx(std::move(ci)),
        g_idxes(std::move(gidx)),
        nnz_per_group(std::move(gnnz)) {
    validate();
  }

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }
  std::int64_t groups() const { return static_cast<std::int64_t>(g_idxes.size()); }

  void validate() const {
    if (rows_dim < 1 || cols_dim < 1)
      throw std::invalid_argument("GcooMatrix: dimensions must be >= 1");
    if (!is_pow2(p))
      throw std::invalid_argument("GcooMatrix: p must be a power of two");
    const std::int64_t g = ceil_div(rows_dim, p);
    if (groups() != g || static_cast<std::int64_t>(nnz_per_group.size()) != g)
      throw std::invalid_argument("GcooMatrix: expected " + std::to_string(g) +
                                  " groups");
    if (values.size() != row_idx.size() || values.size() != col_idx.size())
      throw std::invalid_argument("GcooMatrix: array lengths differ");
    std::int64_t off = 0;
    for (std::int64_t gi = 0; gi < g; ++gi) {
      if (g_idxes[gi] != off)
        throw std::invalid_argument("GcooMatrix: g_idxes[" + std::to_string(gi) +
                                    "] inconsistent with group sizes");
      if (nnz_per_group[gi] < 0)
        throw std::invalid_argument("GcooMatrix: negative group size");
      const std::int64_t lo = gi * static_cast<std::int64_t>(p);
      const std::int64_t hi = std::min<std::int64_t>(lo + p, rows_dim);
      for (std::int64_t e = off; e < off + nnz_per_group[gi]; ++e) {
        if (row_idx[e] < lo || row_idx[e] >= hi)
          throw std::invalid_argument("GcooMatrix: row outside its group band");
        if (col_idx[e] < 0 || col_idx[e] >= cols_dim)
          throw std::invalid_argument("GcooMatrix: column out of range");
        if (e > off) {
          // strict (col, row) order inside the group; equality is a duplicate
          const bool ok = col_idx[e - 1] < col_idx[e] ||
                          (col_idx[e - 1] == col_idx[e] && row_idx[e - 1] < row_idx[e]);
          if (!ok)
            throw std::invalid_argument(
                "GcooMatrix: group entries not in (col,row) order (or duplicate)");
        }
      }
      off += nnz_per_group[gi];
    }
    if (off != nnz())
      throw std::invalid_argument("GcooMatrix: group sizes do not cover all entries");
  }
};

//---------------------------------------------------------------------------
// Conversions
//---------------------------------------------------------------------------

template <typename T>
CooMatrix<T> dense_to_coo(const DenseMatrix<T>& a) {
  CooMatrix<T> out;
  out.rows_dim = a.rows;
  out.cols_dim = a.cols;
  for (std::int64_t r = 0; r < a.rows; ++r)
    for (std::int64_t c = 0; c < a.cols; ++c)
      if (a(r, c) != T(0)) {
        out.values.push_back(a(r, c));
        out.row_idx.push_back(static_cast<index_t>(r));
        out.col_idx.push_back(static_cast<index_t>(c));
      }
  return out;
}

template <typename T>
DenseMatrix<T> coo_to_dense(const CooMatrix<T>& a) {
  a.validate();
  DenseMatrix<T> out(a.rows_dim, a.cols_dim);
  for (std::int64_t e = 0; e < a.nnz(); ++e)
    out(a.row_idx[e], a.col_idx[e]) = a.values[e];
  return out;
}

template <typename T>
CsrMatrix<T> dense_to_csr(const DenseMatrix<T>& a) {
  CsrMatrix<T> out;
  out.rows_dim = a.rows;
  out.cols_dim = a.cols;
  out.row_ptr.assign(a.rows + 1, 0);
  for (std::int64_t r = 0; r < a.rows; ++r) {
    for (std::int64_t c = 0; c < a.cols; ++c)
      if (a(r, c) != T(0)) {
        out.values.push_back(a(r, c));
        out.col_idx.push_back(static_cast<index_t>(c));
      }
    out.row_ptr[r + 1] = static_cast<std::int64_t>(out.values.size());
  }
  return out;
}

template <typename T>
DenseMatrix<T> csr_to_dense(const CsrMatrix<T>& a) {
  a.validate();
  DenseMatrix<T> out(a.rows_dim, a.cols_dim);
  for (std::int64_t r = 0; r < a.rows_dim; ++r)
    for (std::int64_t e = a.row_ptr[r]; e < a.row_ptr[r + 1]; ++e)
      out(r, a.col_idx[e]) = a.values[e];
  return out;
}

/// Two-pass dense-to-GCOO conversion: pass 1 sizes every group, pass 2 fills
/// the slices. Groups write disjoint ranges, so both passes run per group in
/// parallel. Scanning a group's band column-by-column yields the (col, row)
/// order directly.
template <typename T>
GcooMatrix<T> dense_to_gcoo(const DenseMatrix<T>& a, index_t p) {
  if (!is_pow2(p))
    throw std::invalid_argument("dense_to_gcoo: p must be a power of two");
  GcooMatrix<T> out;
  out.rows_dim = a.rows;
  out.cols_dim = a.cols;
  out.p = p;
  const std::int64_t g = ceil_div(a.rows, p);
  out.nnz_per_group.assign(g, 0);
  out.g_idxes.assign(g, 0);

#pragma omp parallel for schedule(static)
  for (std::int64_t gi = 0; gi < g; ++gi) {
    const std::int64_t lo = gi * static_cast<std::int64_t>(p);
    const std::int64_t hi = std::min<std::int64_t>(lo + p, a.rows);
    std::int64_t cnt = 0;
    for (std::int64_t r = lo; r < hi; ++r)
      for (std::int64_t c = 0; c < a.cols; ++c)
        if (a(r, c) != T(0)) ++cnt;
    out.nnz_per_group[gi] = cnt;
  }

  std::int64_t total = 0;
  for (std::int64_t gi = 0; gi < g; ++gi) {
    out.g_idxes[gi] = total;
    total += out.nnz_per_group[gi];
  }
  out.values.resize(total);
  out.row_idx.resize(total);
  out.col_idx.resize(total);

#pragma omp parallel for schedule(static)
  for (std::int64_t gi = 0; gi < g; ++gi) {
    const std::int64_t lo = gi * static_cast<std::int64_t>(p);
    const std::int64_t hi = std::min<std::int64_t>(lo + p, a.rows);
    std::int64_t w = out.g_idxes[gi];
    for (std::int64_t c = 0; c < a.cols; ++c)
      for (std::int64_t r = lo; r < hi; ++r)
        if (a(r, c) != T(0)) {
          out.values[w] = a(r, c);
          out.row_idx[w] = static_cast<index_t>(r);
          out.col_idx[w] = static_cast<index_t>(c);
          ++w;
        }
  }
  return out;
}

template <typename T>
DenseMatrix<T> gcoo_to_dense(const GcooMatrix<T>& a) {
  a.validate();
  DenseMatrix<T> out(a.rows_dim, a.cols_dim);
  for (std::int64_t e = 0; e < a.nnz(); ++e)
    out(a.row_idx[e], a.col_idx[e]) = a.values[e];
  return out;
}

/// COO-to-GCOO without a dense detour. Row-major COO already has each group's
/// entries contiguous; each slice only needs a (col, row) reorder.
template <typename T>
GcooMatrix<T> coo_to_gcoo(const CooMatrix<T>& a, index_t p) {
  a.validate();
  if (!is_pow2(p))
    throw std::invalid_argument("coo_to_gcoo: p must be a power of two");
  GcooMatrix<T> out;
  out.rows_dim = a.rows_dim;
  out.cols_dim = a.cols_dim;
  out.p = p;
  const std::int64_t g = ceil_div(a.rows_dim, p);
  out.nnz_per_group.assign(g, 0);
  out.g_idxes.assign(g, 0);
  for (std::int64_t e = 0; e < a.nnz(); ++e) ++out.nnz_per_group[a.row_idx[e] / p];
  std::int64_t total = 0;
  for (std::int64_t gi = 0; gi < g; ++gi) {
    out.g_idxes[gi] = total;
    total += out.nnz_per_group[gi];
  }
  out.values.resize(total);
  out.row_idx.resize(total);
  out.col_idx.resize(total);

#pragma omp parallel for schedule(static)
  for (std::int64_t gi = 0; gi < g; ++gi) {
    const std::int64_t lo = out.g_idxes[gi];
    const std::int64_t cnt = out.nnz_per_group[gi];
    std::vector<std::int64_t> order(cnt);
    std::iota(order.begin(), order.end(), lo);
    std::sort(order.begin(), order.end(), [&](std::int64_t x, std::int64_t y) {
      if (a.col_idx[x] != a.col_idx[y]) return a.col_idx[x] < a.col_idx[y];
      return a.row_idx[x] < a.row_idx[y];
    });
    for (std::int64_t i = 0; i < cnt; ++i) {
      out.values[lo + i] = a.values[order[i]];
      out.row_idx[lo + i] = a.row_idx[order[i]];
      out.col_idx[lo + i] = a.col_idx[order[i]];
    }
  }
  return out;
}

template <typename T>
CsrMatrix<T> coo_to_csr(const CooMatrix<T>& a) {
  a.validate();
  CsrMatrix<T> out;
  out.rows_dim = a.rows_dim;
  out.cols_dim = a.cols_dim;
  out.values = a.values;
  out.col_idx = a.col_idx;
  out.row_ptr.assign(a.rows_dim + 1, 0);
  for (std::int64_t e = 0; e < a.nnz(); ++e) ++out.row_ptr[a.row_idx[e] + 1];
  for (std::int64_t r = 0; r < a.rows_dim; ++r) out.row_ptr[r + 1] += out.row_ptr[r];
  return out;
}

template <typename T>
CooMatrix<T> gcoo_to_coo(const GcooMatrix<T>& a) {
  a.validate();
  CooMatrix<T> out;
  out.rows_dim = a.rows_dim;
  out.cols_dim = a.cols_dim;
  const std::int64_t n = a.nnz();
  std::vector<std::int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t x, std::int64_t y) {
    if (a.row_idx[x] != a.row_idx[y]) return a.row_idx[x] < a.row_idx[y];
    return a.col_idx[x] < a.col_idx[y];
  });
  out.values.reserve(n);
  out.row_idx.reserve(n);
  out.col_idx.reserve(n);
  for (std::int64_t i : order) {
    out.values.push_back(a.values[i]);
    out.row_idx.push_back(a.row_idx[i]);
    out.col_idx.push_back(a.col_idx[i]);
  }
  return out;
}

//---------------------------------------------------------------------------
// Storage cost
//---------------------------------------------------------------------------

enum class SparseFormat { csr, coo, gcoo };

/// Index/value word count of a format for an n-row matrix with nnz nonzeros:
///   CSR   2*nnz + n
///   COO   3*nnz
///   GCOO  3*nnz + 2*floor((n + p - 1) / p)
struct StorageFootprint {
  SparseFormat format;
  std::int64_t words;
};

inline StorageFootprint storage_footprint(SparseFormat f, std::int64_t n,
                                          std::int64_t nnz, std::int64_t p = 0) {
  if (n < 1 || nnz < 0)
    throw std::invalid_argument("storage_footprint: bad dimensions");
  switch (f) {
    case SparseFormat::csr:
      return {f, 2 * nnz + n};
    case SparseFormat::coo:
      return {f, 3 * nnz};
    case SparseFormat::gcoo:
      if (!is_pow2(p))
        throw std::invalid_argument("storage_footprint: GCOO requires power-of-two p");
      return {f, 3 * nnz + 2 * ((n + p - 1) / p)};
  }
  throw std::invalid_argument("storage_footprint: unknown format");
}

}  // namespace gcoo
