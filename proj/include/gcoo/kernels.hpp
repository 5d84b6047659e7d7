#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gcoo/matrix.hpp"
#include "gcoo/types.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gcoo {

//---------------------------------------------------------------------------
// Execution configuration
//---------------------------------------------------------------------------

/// Tile geometry and worker count for the data-parallel kernels. A kernel
/// launch covers a ceil(m/p) x ceil(n/b) grid of output tiles; each tile is
/// one work item. p and b must be powers of two (the kernels recover a row's
/// slot inside its group with row & (p-1)). workers == 0 means "all cores".
struct ExecConfig {
  index_t p = 4;
  index_t b = 64;
  int workers = 0;

  void validate() const {
    if (!is_pow2(p) || !is_pow2(b))
      throw std::invalid_argument("ExecConfig: p and b must be powers of two");
    if (workers < 0) throw std::invalid_argument("ExecConfig: workers must be >= 0");
  }
};

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Counters the grouped kernel reports alongside its result. A "B load" is
/// one per-lane read of a dense-operand element; a maximal run of staged
/// entries sharing a column pays for the first load per lane and reuses it
/// for the rest of the run.
struct KernelStats {
  std::uint64_t flops = 0;
  std::uint64_t b_loads_total = 0;
  std::uint64_t b_loads_reused = 0;
  std::uint64_t staging_fills = 0;

  KernelStats& operator+=(const KernelStats& o) {
    flops += o.flops;
    b_loads_total += o.b_loads_total;
    b_loads_reused += o.b_loads_reused;
    staging_fills += o.staging_fills;
    return *this;
  }
};

/// Wall-clock split between operand preparation (allocation + conversion)
/// and the multiplication kernel itself.
struct TimingBreakdown {
  double eo_seconds = 0.0;
  double kc_seconds = 0.0;
};

//---------------------------------------------------------------------------
// Reference kernel
//---------------------------------------------------------------------------

/// Serial triple-loop product, accumulating in double no matter the build
/// scalar. Every other kernel is tested against this one.
template <typename T>
DenseMatrix<T> gemm_oracle(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols != b.rows)
    throw std::invalid_argument("gemm_oracle: inner dimensions differ");
  DenseMatrix<T> c(a.rows, b.cols);
  std::vector<double> acc(b.cols);
  for (std::int64_t i = 0; i < a.rows; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::int64_t l = 0; l < a.cols; ++l) {
      const double av = static_cast<double>(a(i, l));
      const T* brow = b.row_ptr(l);
      for (std::int64_t j = 0; j < b.cols; ++j)
        acc[j] += av * static_cast<double>(brow[j]);
    }
    T* crow = c.row_ptr(i);
    for (std::int64_t j = 0; j < b.cols; ++j) crow[j] = static_cast<T>(acc[j]);
  }
  return c;
}

//---------------------------------------------------------------------------
// Dense baseline
//---------------------------------------------------------------------------

/// Blocked dense GEMM over the same p x b output tile grid as the sparse
/// kernels. Does not look at the values, so its runtime is independent of
/// sparsity; this is the baseline the crossover search runs against.
template <typename T>
DenseMatrix<T> gemm_dense_blocked(const DenseMatrix<T>& a, const DenseMatrix<T>& b,
                                  const ExecConfig& cfg) {
  cfg.validate();
  if (a.cols != b.rows)
    throw std::invalid_argument("gemm_dense_blocked: inner dimensions differ");
  const std::int64_t m = a.rows, k = a.cols, n = b.cols;
  const std::int64_t p = cfg.p, bw = cfg.b;
  const std::int64_t row_tiles = ceil_div(m, p);
  const std::int64_t col_tiles = ceil_div(n, bw);
  const std::int64_t tiles = row_tiles * col_tiles;
  constexpr std::int64_t kb = 64;  // depth blocking; fixed, order-preserving

  DenseMatrix<T> c(m, n);
  const int nw = resolve_workers(cfg.workers);

#pragma omp parallel num_threads(nw)
  {
    std::vector<T> acc(static_cast<std::size_t>(p) * bw);
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < tiles; ++t) {
      const std::int64_t ti = t / col_tiles;
      const std::int64_t sj = t % col_tiles;
      const std::int64_t i0 = ti * p;
      const std::int64_t j0 = sj * bw;
      const std::int64_t h = std::min(p, m - i0);
      const std::int64_t w = std::min(bw, n - j0);
      std::fill(acc.begin(), acc.end(), T(0));
      for (std::int64_t l0 = 0; l0 < k; l0 += kb) {
        const std::int64_t lend = std::min(l0 + kb, k);
        for (std::int64_t i = 0; i < h; ++i) {
          T* arow = acc.data() + i * bw;
          for (std::int64_t l = l0; l < lend; ++l) {
            const T av = a(i0 + i, l);
            const T* brow = b.row_ptr(l) + j0;
#pragma omp simd
            for (std::int64_t j = 0; j < w; ++j) arow[j] += av * brow[j];
          }
        }
      }
      for (std::int64_t i = 0; i < h; ++i) {
        T* crow = c.row_ptr(i0 + i) + j0;
        const T* arow = acc.data() + i * bw;
        for (std::int64_t j = 0; j < w; ++j) crow[j] = arow[j];
      }
    }
  }
  return c;
}

//---------------------------------------------------------------------------
// Row-split CSR baseline
//---------------------------------------------------------------------------

/// Each row of C is one work item: scan the row's nonzeros and accumulate
/// scaled rows of B. No staging, no reuse tracking.
template <typename T>
DenseMatrix<T> spdm_csr(const CsrMatrix<T>& a, const DenseMatrix<T>& b,
                        const ExecConfig& cfg) {
  cfg.validate();
  if (a.cols_dim != b.rows)
    throw std::invalid_argument("spdm_csr: inner dimensions differ");
  const std::int64_t n = b.cols;
  DenseMatrix<T> c(a.rows_dim, n);
  const int nw = resolve_workers(cfg.workers);

#pragma omp parallel for schedule(static) num_threads(nw)
  for (std::int64_t r = 0; r < a.rows_dim; ++r) {
    T* crow = c.row_ptr(r);
    for (std::int64_t e = a.row_ptr[r]; e < a.row_ptr[r + 1]; ++e) {
      const T av = a.values[e];
      const T* brow = b.row_ptr(a.col_idx[e]);
#pragma omp simd
      for (std::int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

//---------------------------------------------------------------------------
// Ungrouped COO baseline
//---------------------------------------------------------------------------

/// Ablation of the grouped kernel: one group spanning every row (so each
/// column strip scans the whole entry stream) and no same-column reuse
/// search. Entries still move through a staging buffer of at most cfg.b.
template <typename T>
DenseMatrix<T> spdm_coo(const CooMatrix<T>& a, const DenseMatrix<T>& b,
                        const ExecConfig& cfg) {
  cfg.validate();
  if (a.cols_dim != b.rows)
    throw std::invalid_argument("spdm_coo: inner dimensions differ");
  const std::int64_t n = b.cols;
  const std::int64_t bw = cfg.b;
  const std::int64_t strips = ceil_div(n, bw);
  const std::int64_t nnz = a.nnz();
  DenseMatrix<T> c(a.rows_dim, n);
  const int nw = resolve_workers(cfg.workers);

#pragma omp parallel num_threads(nw)
  {
    std::vector<T> sv(bw);
    std::vector<index_t> sr(bw), sc(bw);
#pragma omp for schedule(static)
    for (std::int64_t sj = 0; sj < strips; ++sj) {
      const std::int64_t j0 = sj * bw;
      const std::int64_t w = std::min(bw, n - j0);
      for (std::int64_t chunk = 0; chunk < nnz; chunk += bw) {
        const std::int64_t cs = std::min(bw, nnz - chunk);
        for (std::int64_t e = 0; e < cs; ++e) {
          sv[e] = a.values[chunk + e];
          sr[e] = a.row_idx[chunk + e];
          sc[e] = a.col_idx[chunk + e];
        }
        for (std::int64_t e = 0; e < cs; ++e) {
          const T av = sv[e];
          const T* bv = b.row_ptr(sc[e]) + j0;
          T* crow = c.row_ptr(sr[e]) + j0;
#pragma omp simd
          for (std::int64_t j = 0; j < w; ++j) crow[j] += av * bv[j];
        }
      }
    }
  }
  return c;
}

//---------------------------------------------------------------------------
// Grouped kernel
//---------------------------------------------------------------------------

namespace detail {

template <typename T>
DenseMatrix<T> spdm_gcoo_impl(const GcooMatrix<T>& a, const DenseMatrix<T>& b,
                              const ExecConfig& cfg, const std::int64_t* tile_order,
                              std::int64_t tile_count, KernelStats* stats) {
  cfg.validate();
  if (a.cols_dim != b.rows)
    throw std::invalid_argument("spdm_gcoo: inner dimensions differ");
  if (a.p != cfg.p)
    throw std::invalid_argument("spdm_gcoo: matrix grouped with a different p");
  const std::int64_t m = a.rows_dim, n = b.cols;
  const std::int64_t p = cfg.p, bw = cfg.b;
  const std::int64_t col_tiles = ceil_div(n, bw);
  const std::int64_t tiles = a.groups() * col_tiles;
  if (tile_order && tile_count != tiles)
    throw std::invalid_argument("spdm_gcoo: tile order must cover every tile once");

  DenseMatrix<T> c(m, n);
  const int nw = resolve_workers(cfg.workers);
  KernelStats total;

#pragma omp parallel num_threads(nw)
  {
    std::vector<T> acc(static_cast<std::size_t>(p) * bw);
    std::vector<T> sv(bw);
    std::vector<index_t> sr(bw), sc(bw);
    KernelStats local;

#pragma omp for schedule(static)
    for (std::int64_t ti = 0; ti < tiles; ++ti) {
      const std::int64_t t = tile_order ? tile_order[ti] : ti;
      const std::int64_t gi = t / col_tiles;
      const std::int64_t sj = t % col_tiles;
      const std::int64_t i0 = gi * p;
      const std::int64_t j0 = sj * bw;
      const std::int64_t h = std::min(p, m - i0);
      const std::int64_t w = std::min(bw, n - j0);
      const std::int64_t lo = a.g_idxes[gi];
      const std::int64_t cnt = a.nnz_per_group[gi];

      std::fill(acc.begin(), acc.begin() + p * bw, T(0));

      // Stream the group's slice through the staging buffer, at most bw
      // entries at a time; the reuse window never crosses a refill.
      for (std::int64_t chunk = 0; chunk < cnt; chunk += bw) {
        const std::int64_t cs = std::min(bw, cnt - chunk);
        for (std::int64_t e = 0; e < cs; ++e) {
          sv[e] = a.values[lo + chunk + e];
          sr[e] = a.row_idx[lo + chunk + e];
          sc[e] = a.col_idx[lo + chunk + e];
        }
        local.staging_fills += static_cast<std::uint64_t>(cs);

        std::int64_t e = 0;
        while (e < cs) {
          const index_t col = sc[e];
          std::int64_t run = 1;
          while (e + run < cs && sc[e + run] == col) ++run;
          const T* bv = b.row_ptr(col) + j0;
          local.b_loads_total += static_cast<std::uint64_t>(w);
          local.b_loads_reused += static_cast<std::uint64_t>(run - 1) *
                                  static_cast<std::uint64_t>(w);
          for (std::int64_t q = 0; q < run; ++q) {
            const T av = sv[e + q];
            T* arow = acc.data() + (static_cast<std::int64_t>(sr[e + q]) & (p - 1)) * bw;
#pragma omp simd
            for (std::int64_t j = 0; j < w; ++j) arow[j] += av * bv[j];
          }
          e += run;
        }
      }
      local.flops += 2ull * static_cast<std::uint64_t>(cnt) * static_cast<std::uint64_t>(w);

      // single write of the tile; rows past m-1 in a partial group have no
      // entries and are simply not stored
      for (std::int64_t i = 0; i < h; ++i) {
        T* crow = c.row_ptr(i0 + i) + j0;
        const T* arow = acc.data() + i * bw;
        for (std::int64_t j = 0; j < w; ++j) crow[j] = arow[j];
      }
    }

#pragma omp critical
    total += local;
  }

  if (stats) *stats = total;
  return c;
}

}  // namespace detail

/// Grouped sparse-dense multiply: C = A * B with A in GCOO form. One output
/// tile (group x column strip) per work item; see KernelStats for what gets
/// counted. A must have been grouped with cfg.p.
template <typename T>
DenseMatrix<T> spdm_gcoo(const GcooMatrix<T>& a, const DenseMatrix<T>& b,
                         const ExecConfig& cfg, KernelStats* stats = nullptr) {
  return detail::spdm_gcoo_impl(a, b, cfg, nullptr, 0, stats);
}

/// Same kernel, visiting tiles in the given order. Tiles own disjoint output
/// regions, so any permutation produces the identical C; tests rely on this.
template <typename T>
DenseMatrix<T> spdm_gcoo(const GcooMatrix<T>& a, const DenseMatrix<T>& b,
                         const ExecConfig& cfg, std::span<const std::int64_t> tile_order,
                         KernelStats* stats = nullptr) {
  return detail::spdm_gcoo_impl(a, b, cfg, tile_order.data(),
                                static_cast<std::int64_t>(tile_order.size()), stats);
}

/// Convert-then-multiply from a dense source, reporting the wall-clock split
/// between operand preparation (EO: allocation + grouping) and the kernel
/// (KC). The result is bitwise identical to spdm_gcoo on the converted input.
template <typename T>
DenseMatrix<T> spdm_gcoo_auto(const DenseMatrix<T>& a, const DenseMatrix<T>& b,
                              const ExecConfig& cfg, TimingBreakdown& timing,
                              KernelStats* stats = nullptr) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const GcooMatrix<T> g = dense_to_gcoo(a, cfg.p);
  const auto t1 = clock::now();
  DenseMatrix<T> c = spdm_gcoo(g, b, cfg, stats);
  const auto t2 = clock::now();
  timing.eo_seconds = std::chrono::duration<double>(t1 - t0).count();
  timing.kc_seconds = std::chrono::duration<double>(t2 - t1).count();
  return c;
}

}  // namespace gcoo
