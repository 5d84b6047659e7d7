#include "gcoo/bench.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace gcoo {

//---------------------------------------------------------------------------
// Names, throughput, medians, seeds
//---------------------------------------------------------------------------

const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::oracle: return "oracle";
    case KernelKind::dense: return "dense";
    case KernelKind::csr: return "csr";
    case KernelKind::coo: return "coo";
    case KernelKind::gcoo: return "gcoo";
  }
  throw std::invalid_argument("kernel_name: bad KernelKind");
}

KernelKind kernel_from_name(const std::string& name) {
  for (KernelKind k : {KernelKind::oracle, KernelKind::dense, KernelKind::csr,
                       KernelKind::coo, KernelKind::gcoo})
    if (name == kernel_name(k)) return k;
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

double effective_gflops(std::int64_t m, std::int64_t k, std::int64_t n, double s,
                        double seconds) {
  if (m < 1 || k < 1 || n < 1)
    throw std::invalid_argument("effective_gflops: dimensions must be >= 1");
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("effective_gflops: sparsity outside [0,1]");
  if (!(seconds > 0.0))
    throw std::invalid_argument("effective_gflops: elapsed time must be positive");
  return 2.0 * static_cast<double>(m) * static_cast<double>(k) *
         static_cast<double>(n) * (1.0 - s) / seconds / 1e9;
}

double effective_gflops(std::int64_t n, double s, double seconds) {
  return effective_gflops(n, n, n, s, seconds);
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[mid];
  return 0.5 * (xs[mid - 1] + xs[mid]);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a,
                          std::uint64_t salt_b) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (salt_a + 1) +
                    0xBF58476D1CE4E5B9ULL * (salt_b + 1);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

double realized_sparsity(std::int64_t n, double s) {
  if (n < 1) throw std::invalid_argument("realized_sparsity: n must be >= 1");
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("realized_sparsity: sparsity outside [0,1]");
  const double total = static_cast<double>(n) * static_cast<double>(n);
  const std::int64_t nnz = std::llround(total * (1.0 - s));
  return 1.0 - static_cast<double>(nnz) / total;
}

//---------------------------------------------------------------------------
// CSV
//---------------------------------------------------------------------------

namespace {

constexpr const char* kHeader =
    "kernel,n,nnz,sparsity,eo_seconds,kc_seconds,gflops,repetitions,p,b,workers";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::int64_t parse_int_field(const std::string& f, const char* what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
    throw std::runtime_error(std::string("bad integer field '") + f + "' for " + what);
  return v;
}

double parse_double_field(const std::string& f, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
    throw std::runtime_error(std::string("bad numeric field '") + f + "' for " + what);
  return v;
}

}  // namespace

std::string bench_csv_header() { return kHeader; }

std::string bench_csv_row(const BenchResult& r) {
  std::string out = r.kernel;
  out += ',';
  out += std::to_string(r.n);
  out += ',';
  out += std::to_string(r.nnz);
  out += ',';
  out += format_shortest(r.sparsity);
  out += ',';
  out += format_shortest(r.eo_seconds);
  out += ',';
  out += format_shortest(r.kc_seconds);
  out += ',';
  out += format_shortest(r.gflops);
  out += ',';
  out += std::to_string(r.repetitions);
  out += ',';
  out += std::to_string(r.p);
  out += ',';
  out += std::to_string(r.b);
  out += ',';
  out += std::to_string(r.workers);
  return out;
}

BenchResult parse_bench_row(const std::string& line) {
  const auto f = split_fields(line);
  if (f.size() != 11)
    throw std::runtime_error("bench CSV row must have 11 fields, got " +
                             std::to_string(f.size()));
  BenchResult r;
  (void)kernel_from_name(f[0]);  // reject unknown kernels early
  r.kernel = f[0];
  r.n = parse_int_field(f[1], "n");
  r.nnz = parse_int_field(f[2], "nnz");
  r.sparsity = parse_double_field(f[3], "sparsity");
  r.eo_seconds = parse_double_field(f[4], "eo_seconds");
  r.kc_seconds = parse_double_field(f[5], "kc_seconds");
  r.gflops = parse_double_field(f[6], "gflops");
  r.repetitions = static_cast<int>(parse_int_field(f[7], "repetitions"));
  r.p = parse_int_field(f[8], "p");
  r.b = parse_int_field(f[9], "b");
  r.workers = static_cast<int>(parse_int_field(f[10], "workers"));
  return r;
}

std::vector<BenchResult> read_bench_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw std::runtime_error("unrecognized bench CSV header in " + path.string());
  std::vector<BenchResult> rows;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      rows.push_back(parse_bench_row(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + " line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return rows;
}

std::string sweep_key(const std::string& kernel, std::int64_t n, double sparsity) {
  return kernel + '|' + std::to_string(n) + '|' + format_shortest(sparsity);
}

}  // namespace gcoo
