#include "gcoo/traffic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcoo {

namespace {

constexpr std::int64_t kTransactionElems = 32;

std::uint64_t trans(std::int64_t elems) {
  return static_cast<std::uint64_t>(ceil_div(elems, kTransactionElems));
}

void check_pattern(std::span<const Coord> pattern, std::int64_t m, std::int64_t k,
                   std::int64_t n) {
  if (m < 1 || k < 1 || n < 1)
    throw std::invalid_argument("traffic model: dimensions must be >= 1");
  for (const Coord& c : pattern)
    if (c.row < 0 || c.row >= m || c.col < 0 || c.col >= k)
      throw std::invalid_argument("traffic model: coordinate out of range");
}

void check_no_duplicates(std::vector<Coord> sorted) {
  std::sort(sorted.begin(), sorted.end(), [](const Coord& a, const Coord& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1])
      throw std::invalid_argument("traffic model: duplicate coordinate");
}

// (column, length) runs of a group's slice, split the same way the kernel's
// staging buffer splits them: a run never crosses a chunk of b entries.
struct Run {
  index_t col;
  std::int64_t len;
};

}  // namespace

TrafficReport model_gcoo_traffic(std::span<const Coord> pattern, std::int64_t m,
                                 std::int64_t k, std::int64_t n,
                                 const ExecConfig& cfg, CacheMode mode,
                                 TrafficDetail* detail) {
  cfg.validate();
  check_pattern(pattern, m, k, n);
  check_no_duplicates({pattern.begin(), pattern.end()});

  const std::int64_t p = cfg.p, b = cfg.b;
  const std::int64_t groups = ceil_div(m, p);
  const std::int64_t strips = ceil_div(n, b);

  // group slices, ordered by column like the storage format
  std::vector<std::vector<index_t>> gcols(groups);
  for (const Coord& c : pattern) gcols[c.row / p].push_back(c.col);
  for (auto& cols : gcols) std::sort(cols.begin(), cols.end());

  TrafficReport rep;
  TrafficDetail det;
  std::vector<std::uint8_t> touched;  // (col, strip) pairs already paid to DRAM
  if (mode == CacheMode::infinite_l2)
    touched.assign(static_cast<std::size_t>(k) * strips, 0);

  for (std::int64_t gi = 0; gi < groups; ++gi) {
    const auto& cols = gcols[gi];
    const std::int64_t nnz_gi = static_cast<std::int64_t>(cols.size());
    const std::int64_t h = std::min<std::int64_t>(p, m - gi * p);

    std::vector<Run> runs;
    for (std::int64_t chunk = 0; chunk < nnz_gi; chunk += b) {
      const std::int64_t cs = std::min(b, nnz_gi - chunk);
      std::int64_t e = 0;
      while (e < cs) {
        std::int64_t len = 1;
        while (e + len < cs && cols[chunk + e + len] == cols[chunk + e]) ++len;
        runs.push_back({cols[chunk + e], len});
        e += len;
      }
    }

    for (std::int64_t sj = 0; sj < strips; ++sj) {
      const std::int64_t w = std::min<std::int64_t>(b, n - sj * b);

      if (nnz_gi > 0) {
        // staging: every entry is written once and broadcast-read once
        rep.n_shm += 2ull * static_cast<std::uint64_t>(nnz_gi);
        det.staged_entries += static_cast<std::uint64_t>(nnz_gi);

        // the three index/value arrays of the slice, coalesced
        const std::uint64_t sp = trans(3 * nnz_gi);
        det.sparse_transactions += sp;
        if (mode == CacheMode::infinite_l2 && sj > 0)
          rep.n_l2 += sp;
        else
          rep.n_dm += sp;
      }

      // dense operand: one w-wide load per run, reuse within the run
      for (const Run& r : runs) {
        const std::uint64_t bt = trans(w);
        det.b_load_transactions += bt;
        det.b_element_loads += static_cast<std::uint64_t>(w);
        det.b_element_reused += static_cast<std::uint64_t>(r.len - 1) *
                                static_cast<std::uint64_t>(w);
        rep.tex_l1_trans += static_cast<std::uint64_t>(r.len - 1) *
                            static_cast<std::uint64_t>(w);
        if (mode == CacheMode::infinite_l2) {
          std::uint8_t& seen = touched[static_cast<std::size_t>(r.col) * strips + sj];
          if (seen)
            rep.n_l2 += bt;
          else {
            rep.n_dm += bt;
            seen = 1;
          }
        } else {
          rep.n_dm += bt;
        }
      }

      // tile store: the only write of these h x w output elements
      const std::uint64_t st = trans(h * w);
      det.store_transactions += st;
      rep.n_dm += st;

      rep.flops += 2ull * static_cast<std::uint64_t>(nnz_gi) *
                   static_cast<std::uint64_t>(w);
    }
  }

  if (detail) *detail = det;
  return rep;
}

TrafficReport model_csr_traffic(std::span<const Coord> pattern, std::int64_t m,
                                std::int64_t k, std::int64_t n,
                                const ExecConfig& cfg, CacheMode mode,
                                TrafficDetail* detail) {
  cfg.validate();
  check_pattern(pattern, m, k, n);
  check_no_duplicates({pattern.begin(), pattern.end()});

  std::vector<std::vector<index_t>> rows(m);
  for (const Coord& c : pattern) rows[c.row].push_back(c.col);
  for (auto& cols : rows) std::sort(cols.begin(), cols.end());

  TrafficReport rep;
  TrafficDetail det;
  const std::int64_t segs = ceil_div(n, kTransactionElems);
  std::vector<std::uint8_t> touched;  // (col, segment) pairs already paid to DRAM
  if (mode == CacheMode::infinite_l2)
    touched.assign(static_cast<std::size_t>(k) * segs, 0);

  // row pointers, read once, coalesced
  rep.n_dm += trans(m + 1);
  det.sparse_transactions += trans(m + 1);

  for (std::int64_t r = 0; r < m; ++r) {
    const auto& cols = rows[r];
    const std::int64_t nnz_r = static_cast<std::int64_t>(cols.size());
    if (nnz_r > 0) {
      // the row's values and column indices, read exactly once
      const std::uint64_t sp = trans(2 * nnz_r);
      det.sparse_transactions += sp;
      rep.n_dm += sp;
    }

    for (const index_t c : cols) {
      // a full row of B per nonzero, no reuse window
      det.b_element_loads += static_cast<std::uint64_t>(n);
      det.b_load_transactions += static_cast<std::uint64_t>(segs);
      if (mode == CacheMode::infinite_l2) {
        for (std::int64_t s = 0; s < segs; ++s) {
          std::uint8_t& seen = touched[static_cast<std::size_t>(c) * segs + s];
          if (seen)
            ++rep.n_l2;
          else {
            ++rep.n_dm;
            seen = 1;
          }
        }
      } else {
        rep.n_dm += static_cast<std::uint64_t>(segs);
      }
    }

    // the output row, written once
    rep.n_dm += static_cast<std::uint64_t>(segs);
    det.store_transactions += static_cast<std::uint64_t>(segs);
    rep.flops += 2ull * static_cast<std::uint64_t>(nnz_r) * static_cast<std::uint64_t>(n);
  }

  if (detail) *detail = det;
  return rep;
}

//---------------------------------------------------------------------------
// Roofline
//---------------------------------------------------------------------------

double operational_intensity(const TrafficReport& t, std::int64_t bytes_per_transaction) {
  if (t.flops == 0) return 0.0;
  if (t.n_dm == 0 || bytes_per_transaction <= 0)
    throw std::invalid_argument(
        "operational_intensity: undefined without DRAM traffic");
  return static_cast<double>(t.flops) /
         (static_cast<double>(t.n_dm) * static_cast<double>(bytes_per_transaction));
}

double roofline_throughput(double r, const RooflineModel& hw) {
  if (r < 0.0) throw std::invalid_argument("roofline_throughput: negative intensity");
  return std::min(hw.peak_flops, r * hw.bandwidth);
}

namespace {
// Peak single-precision throughput and memory bandwidth of the three cards
// the benchmarks are calibrated against.
constexpr RooflineModel kProfiles[] = {
    {"gtx980", 4.981e12, 224e9},
    {"titanx", 10.97e12, 433e9},
    {"p100", 9.5e12, 732e9},
};
}  // namespace

const RooflineModel& roofline_profile(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (const RooflineModel& p : kProfiles)
    if (lower == p.name) return p;
  throw std::invalid_argument("unknown hardware profile: " + std::string(name));
}

std::span<const RooflineModel> roofline_profiles() { return kProfiles; }

double fit_scaling_exponent(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("fit_scaling_exponent: size mismatch");
  if (xs.size() < 3)
    throw std::invalid_argument("fit_scaling_exponent: need at least 3 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0)
      throw std::invalid_argument("fit_scaling_exponent: values must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0.0)
    throw std::invalid_argument("fit_scaling_exponent: x values are all equal");
  return num / den;
}

}  // namespace gcoo
