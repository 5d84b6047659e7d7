#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "gcoo/kernels.hpp"
#include "gcoo/types.hpp"

namespace gcoo {

//---------------------------------------------------------------------------
// Memory-traffic model
//---------------------------------------------------------------------------
//
// Analytical transaction counts for a kernel launch, derived from the
// sparsity pattern alone (values never matter). A coalesced transaction
// moves 32 consecutive elements. Two cache regimes bracket reality:
//   cold        every slow-memory access pays DRAM
//   infinite_l2 the first touch of an address range pays DRAM, every
//               repeat is served by L2

enum class CacheMode { cold, infinite_l2 };

/// Transaction counters for one modeled launch.
///   n_dm          DRAM transactions
///   n_l2          L2 transactions
///   n_shm         staging (scratch) transactions
///   tex_l1_trans  per-lane reads served from the per-run reuse window
struct TrafficReport {
  std::uint64_t n_dm = 0;
  std::uint64_t n_l2 = 0;
  std::uint64_t n_shm = 0;
  std::uint64_t tex_l1_trans = 0;
  std::uint64_t flops = 0;

  std::uint64_t total_transactions() const {
    return n_dm + n_l2 + n_shm + tex_l1_trans;
  }
};

/// Element-granularity counts kept next to the transaction totals; these are
/// the quantities the grouped kernel's KernelStats must reproduce exactly.
struct TrafficDetail {
  std::uint64_t b_element_loads = 0;    // one per run per lane
  std::uint64_t b_element_reused = 0;   // per-lane reads served by the run window
  std::uint64_t staged_entries = 0;     // entries written into staging buffers
  std::uint64_t b_load_transactions = 0;
  std::uint64_t sparse_transactions = 0;
  std::uint64_t store_transactions = 0;
};

/// Traffic of the grouped kernel multiplying an m x k pattern by a dense
/// k x n operand under cfg. Coordinates may arrive in any order; duplicates
/// and out-of-range coordinates are rejected.
TrafficReport model_gcoo_traffic(std::span<const Coord> pattern, std::int64_t m,
                                 std::int64_t k, std::int64_t n,
                                 const ExecConfig& cfg, CacheMode mode,
                                 TrafficDetail* detail = nullptr);

/// Traffic of the row-split CSR kernel on the same product. No staging is
/// involved, so n_shm is always zero.
TrafficReport model_csr_traffic(std::span<const Coord> pattern, std::int64_t m,
                                std::int64_t k, std::int64_t n,
                                const ExecConfig& cfg, CacheMode mode,
                                TrafficDetail* detail = nullptr);

//---------------------------------------------------------------------------
// Roofline
//---------------------------------------------------------------------------

/// Peak compute and memory bandwidth of one hardware profile.
struct RooflineModel {
  std::string_view name;
  double peak_flops;  // FLOP/s
  double bandwidth;   // bytes/s
};

/// Operations per byte of DRAM traffic.
double operational_intensity(const TrafficReport& t, std::int64_t bytes_per_transaction);

/// Attainable throughput: min(peak, r * bandwidth), in FLOP/s.
double roofline_throughput(double r, const RooflineModel& hw);

/// Built-in profiles: gtx980, titanx, p100.
const RooflineModel& roofline_profile(std::string_view name);
std::span<const RooflineModel> roofline_profiles();

/// Least-squares slope of log y against log x; needs >= 3 positive points.
double fit_scaling_exponent(std::span<const double> xs, std::span<const double> ys);

}  // namespace gcoo
