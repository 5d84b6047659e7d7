#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcoo/io.hpp"
#include "gcoo/kernels.hpp"
#include "gcoo/matrix.hpp"

namespace gcoo {

//---------------------------------------------------------------------------
// Kernel selection and throughput accounting
//---------------------------------------------------------------------------

enum class KernelKind { oracle, dense, csr, coo, gcoo };

const char* kernel_name(KernelKind k);
KernelKind kernel_from_name(const std::string& name);

/// Throughput credited against the dense-equivalent work 2*m*k*n*(1-s),
/// in GFLOPS. Sparse kernels that skip zeros therefore score the same
/// useful work in less time.
double effective_gflops(std::int64_t m, std::int64_t k, std::int64_t n, double s,
                        double seconds);
double effective_gflops(std::int64_t n, double s, double seconds);

/// Median of the sample; even-sized samples average the two middle values.
double median(std::vector<double> xs);

/// Deterministic seed stream: the same (base, salt_a, salt_b) triple always
/// derives the same seed, and distinct salts decorrelate the streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a,
                          std::uint64_t salt_b = 0);

/// Sparsity the generator will actually realize for an n x n target, after
/// rounding the nonzero count to an integer. Keys and reports use this value
/// so that requested and measured sparsities compare bitwise equal.
double realized_sparsity(std::int64_t n, double s);

//---------------------------------------------------------------------------
// Single measurements
//---------------------------------------------------------------------------

struct BenchOptions {
  ExecConfig exec{};
  int repetitions = 5;  // timed runs; the reported time is their median
  int warmup = 1;       // untimed runs before measurement

  void validate() const {
    exec.validate();
    if (repetitions < 1) throw std::invalid_argument("BenchOptions: repetitions must be >= 1");
    if (warmup < 0) throw std::invalid_argument("BenchOptions: warmup must be >= 0");
  }
};

struct BenchResult {
  std::string kernel;
  std::int64_t n = 0;  // rows of the sparse operand
  std::int64_t nnz = 0;
  double sparsity = 0.0;
  double eo_seconds = 0.0;  // operand preparation: format conversion, once
  double kc_seconds = 0.0;  // kernel computation: median over repetitions
  double gflops = 0.0;      // effective throughput at kc_seconds
  int repetitions = 0;
  std::int64_t p = 0;
  std::int64_t b = 0;
  int workers = 0;
};

std::string bench_csv_header();
std::string bench_csv_row(const BenchResult& r);
BenchResult parse_bench_row(const std::string& line);
std::vector<BenchResult> read_bench_csv(const std::filesystem::path& path);

/// Resume key: a row is identified by kernel, size, and realized sparsity.
std::string sweep_key(const std::string& kernel, std::int64_t n, double sparsity);

/// Time one kernel on the given operands. Conversion cost (EO) is measured
/// once; the kernel (KC, including output allocation) is run warmup times
/// untimed and then repetitions times timed.
template <typename T>
BenchResult run_benchmark(KernelKind kind, const DenseMatrix<T>& a,
                          const DenseMatrix<T>& b, const BenchOptions& opt) {
  opt.validate();
  if (a.cols != b.rows)
    throw std::invalid_argument("run_benchmark: inner dimensions differ");
  using clock = std::chrono::steady_clock;
  const auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  BenchResult r;
  r.kernel = kernel_name(kind);
  r.n = a.rows;
  r.nnz = a.nnz();
  r.sparsity = sparsity(a);
  r.repetitions = opt.repetitions;
  r.p = opt.exec.p;
  r.b = opt.exec.b;
  r.workers = resolve_workers(opt.exec.workers);

  CsrMatrix<T> csr;
  CooMatrix<T> coo;
  GcooMatrix<T> gco;
  std::function<DenseMatrix<T>()> call;
  switch (kind) {
    case KernelKind::oracle:
      call = [&] { return gemm_oracle(a, b); };
      break;
    case KernelKind::dense:
      call = [&] { return gemm_dense_blocked(a, b, opt.exec); };
      break;
    case KernelKind::csr: {
      const auto t0 = clock::now();
      csr = dense_to_csr(a);
      r.eo_seconds = seconds_since(t0);
      call = [&] { return spdm_csr(csr, b, opt.exec); };
      break;
    }
    case KernelKind::coo: {
      const auto t0 = clock::now();
      coo = dense_to_coo(a);
      r.eo_seconds = seconds_since(t0);
      call = [&] { return spdm_coo(coo, b, opt.exec); };
      break;
    }
    case KernelKind::gcoo: {
      const auto t0 = clock::now();
      gco = dense_to_gcoo(a, opt.exec.p);
      r.eo_seconds = seconds_since(t0);
      call = [&] { return spdm_gcoo(gco, b, opt.exec); };
      break;
    }
  }

  T checksum{};
  for (int w = 0; w < opt.warmup; ++w) checksum += call().data.back();
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(opt.repetitions));
  for (int rep = 0; rep < opt.repetitions; ++rep) {
    const auto t0 = clock::now();
    const DenseMatrix<T> c = call();
    times.push_back(seconds_since(t0));
    checksum += c.data.back();
  }
  volatile T sink = checksum;  // keeps every run observable
  (void)sink;

  r.kc_seconds = median(std::move(times));
  r.gflops = effective_gflops(a.rows, a.cols, b.cols, r.sparsity, r.kc_seconds);
  return r;
}

/// Benchmark on a synthetic square problem: A is n x n at sparsity s from the
/// given seed, B is n x n fully dense from a seed derived only from (seed, n)
/// so every kernel at one grid cell sees the same B.
template <typename T>
BenchResult square_benchmark(KernelKind kind, std::int64_t n, double s,
                             std::uint64_t seed, const BenchOptions& opt) {
  const auto a = generate_uniform_sparse<T>(n, s, seed);
  const auto b = generate_uniform_sparse<T>(n, 0.0, derive_seed(seed, static_cast<std::uint64_t>(n), 0xb));
  return run_benchmark(kind, a, b, opt);
}

//---------------------------------------------------------------------------
// Grid sweeps
//---------------------------------------------------------------------------

struct SweepOptions {
  std::vector<KernelKind> kernels{KernelKind::dense, KernelKind::gcoo};
  std::vector<std::int64_t> sizes;
  std::vector<double> sparsities;
  BenchOptions bench{};
  std::uint64_t seed = 1;
  std::filesystem::path out_csv;
  std::filesystem::path save_dir;  // when set, matrices are written here once
};

/// Run every (kernel, n, s) cell not already present in out_csv, appending
/// one CSV row per new measurement as it completes. Rerunning with the same
/// options is a no-op. Returns the newly measured rows.
template <typename T>
std::vector<BenchResult> sweep(const SweepOptions& opt, std::ostream* log = nullptr) {
  opt.bench.validate();
  if (opt.out_csv.empty())
    throw std::invalid_argument("sweep: output CSV path required");
  if (opt.kernels.empty() || opt.sizes.empty() || opt.sparsities.empty())
    throw std::invalid_argument("sweep: kernels, sizes and sparsities must be non-empty");

  std::set<std::string> done;
  const bool fresh = !std::filesystem::exists(opt.out_csv);
  if (!fresh)
    for (const BenchResult& row : read_bench_csv(opt.out_csv))
      done.insert(sweep_key(row.kernel, row.n, row.sparsity));

  std::ofstream out(opt.out_csv, std::ios::app);
  if (!out)
    throw std::runtime_error("sweep: cannot open " + opt.out_csv.string());
  if (fresh) out << bench_csv_header() << '\n';

  std::vector<BenchResult> measured;
  std::vector<ManifestRow> manifest;
  for (const std::int64_t n : opt.sizes) {
    for (const double s : opt.sparsities) {
      const double rs = realized_sparsity(n, s);
      const std::uint64_t a_seed =
          derive_seed(opt.seed, static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(std::llround((1.0 - rs) *
                                                              static_cast<double>(n) *
                                                              static_cast<double>(n))));
      std::optional<DenseMatrix<T>> a_cache, b_cache;
      const auto operand_a = [&]() -> const DenseMatrix<T>& {
        if (!a_cache) a_cache = generate_uniform_sparse<T>(n, s, a_seed);
        return *a_cache;
      };
      const auto operand_b = [&]() -> const DenseMatrix<T>& {
        if (!b_cache)
          b_cache = generate_uniform_sparse<T>(
              n, 0.0, derive_seed(a_seed, static_cast<std::uint64_t>(n), 0xb));
        return *b_cache;
      };

      if (!opt.save_dir.empty()) {
        const std::string name = "u" + std::to_string(n) + "_s" + format_shortest(rs);
        const auto mpath = opt.save_dir / (name + ".mtx");
        if (!std::filesystem::exists(mpath))
          write_matrix_market(dense_to_coo(operand_a()), mpath);
        manifest.push_back({name, n, rs, a_seed, (name + ".mtx")});
      }

      for (const KernelKind kind : opt.kernels) {
        const std::string key = sweep_key(kernel_name(kind), n, rs);
        if (done.count(key)) continue;
        const BenchResult r = run_benchmark(kind, operand_a(), operand_b(), opt.bench);
        out << bench_csv_row(r) << '\n';
        out.flush();
        done.insert(key);
        measured.push_back(r);
        if (log)
          *log << r.kernel << " n=" << r.n << " s=" << format_shortest(r.sparsity)
               << " eo=" << format_shortest(r.eo_seconds)
               << " kc=" << format_shortest(r.kc_seconds)
               << " gflops=" << format_shortest(r.gflops) << '\n';
      }
    }
  }
  if (!opt.save_dir.empty())
    write_manifest(opt.save_dir / "manifest.csv", manifest);
  return measured;
}

//---------------------------------------------------------------------------
// Crossover search
//---------------------------------------------------------------------------

/// Walk the ascending sparsity grid at fixed n and return the first s where
/// the grouped sparse kernel beats the blocked dense kernel on median time,
/// or nullopt if it never does. The dense kernel's time does not depend on
/// operand values, so it is measured once. Every measurement taken is
/// appended to trace when given.
template <typename T>
std::optional<double> crossover_search(std::int64_t n, std::span<const double> sparsities,
                                       const BenchOptions& opt, std::uint64_t seed,
                                       std::vector<BenchResult>* trace = nullptr) {
  opt.validate();
  if (sparsities.empty())
    throw std::invalid_argument("crossover_search: empty sparsity grid");
  for (std::size_t i = 1; i < sparsities.size(); ++i)
    if (!(sparsities[i] > sparsities[i - 1]))
      throw std::invalid_argument("crossover_search: sparsities must ascend");

  const auto b = generate_uniform_sparse<T>(
      n, 0.0, derive_seed(seed, static_cast<std::uint64_t>(n), 0xb));
  const auto a0 = generate_uniform_sparse<T>(
      n, sparsities.front(), derive_seed(seed, static_cast<std::uint64_t>(n), 0xa));
  const BenchResult dense = run_benchmark(KernelKind::dense, a0, b, opt);
  if (trace) trace->push_back(dense);

  for (const double s : sparsities) {
    const auto a = generate_uniform_sparse<T>(
        n, s, derive_seed(seed, static_cast<std::uint64_t>(n),
                          static_cast<std::uint64_t>(std::llround(s * 1e7))));
    const BenchResult g = run_benchmark(KernelKind::gcoo, a, b, opt);
    if (trace) trace->push_back(g);
    if (g.kc_seconds < dense.kc_seconds) return s;
  }
  return std::nullopt;
}

}  // namespace gcoo
