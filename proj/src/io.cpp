#include "gcoo/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace gcoo {

namespace {

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

//---------------------------------------------------------------------------
// MatrixMarket reader
//---------------------------------------------------------------------------

struct Entry {
  Coord coord;
  double value;
  std::int64_t line;
};

struct Reader {
  std::ifstream in;
  std::int64_t line_no = 0;

  // Next non-blank, non-comment line.
  bool next_data(std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      const auto pos = out.find_first_not_of(" \t\r\v\f");
      if (pos == std::string::npos) continue;
      if (out[pos] == '%') continue;
      return true;
    }
    return false;
  }
};

[[noreturn]] void fail(const std::string& what, std::int64_t line) {
  throw ParseError(what, line);
}

void check_line_consumed(std::istringstream& s, std::int64_t line) {
  std::string junk;
  if (s >> junk) fail("trailing tokens '" + junk + "'", line);
}

}  // namespace

detail::RawMatrixMarket detail::read_matrix_market_raw(const std::filesystem::path& path) {
  Reader rd;
  rd.in.open(path);
  if (!rd.in) throw std::runtime_error("cannot open " + path.string());

  std::string line;
  if (!std::getline(rd.in, line)) fail("empty file", 1);
  rd.line_no = 1;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket") fail("missing %%MatrixMarket banner", 1);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") fail("unsupported object '" + object + "'", 1);
  if (format != "coordinate" && format != "array")
    fail("unsupported format '" + format + "'", 1);
  if (field != "real" && field != "integer" && field != "pattern")
    fail("unsupported field '" + field + "'", 1);
  if (symmetry != "general" && symmetry != "symmetric")
    fail("unsupported symmetry '" + symmetry + "'", 1);
  if (format == "array" && field == "pattern")
    fail("array format cannot carry a pattern field", 1);

  if (!rd.next_data(line)) fail("missing size line", rd.line_no + 1);
  const std::int64_t size_line = rd.line_no;
  std::istringstream sz(line);
  long long rows = 0, cols = 0, declared = 0;
  if (format == "coordinate") {
    if (!(sz >> rows >> cols >> declared)) fail("malformed size line", size_line);
  } else {
    if (!(sz >> rows >> cols)) fail("malformed size line", size_line);
  }
  check_line_consumed(sz, size_line);
  if (rows < 1 || cols < 1) fail("dimensions must be positive", size_line);
  if (rows > std::numeric_limits<index_t>::max() ||
      cols > std::numeric_limits<index_t>::max())
    fail("dimension exceeds index range", size_line);
  if (symmetry == "symmetric" && rows != cols)
    fail("symmetric matrix must be square", size_line);

  RawMatrixMarket raw;
  raw.rows = rows;
  raw.cols = cols;

  if (format == "coordinate") {
    if (declared < 0 || declared > rows * cols)
      fail("entry count outside [0, rows*cols]", size_line);
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(declared));
    for (long long e = 0; e < declared; ++e) {
      if (!rd.next_data(line))
        fail("expected " + std::to_string(declared) + " entries, file ends after " +
                 std::to_string(e),
             rd.line_no);
      std::istringstream es(line);
      long long r = 0, c = 0;
      double v = 1.0;
      if (!(es >> r >> c)) fail("malformed entry", rd.line_no);
      if (field != "pattern" && !(es >> v))
        fail("malformed or missing value", rd.line_no);
      check_line_consumed(es, rd.line_no);
      if (r < 1 || r > rows || c < 1 || c > cols)
        fail("coordinate out of range", rd.line_no);
      --r;
      --c;
      if (symmetry == "symmetric" && c > r)
        fail("entry above the diagonal in a symmetric file", rd.line_no);
      entries.push_back({{static_cast<index_t>(r), static_cast<index_t>(c)}, v, rd.line_no});
      if (symmetry == "symmetric" && r != c)
        entries.push_back({{static_cast<index_t>(c), static_cast<index_t>(r)}, v, rd.line_no});
    }
    if (rd.next_data(line))
      fail("more entries than the size line declares", rd.line_no);

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.coord.row != b.coord.row) return a.coord.row < b.coord.row;
      if (a.coord.col != b.coord.col) return a.coord.col < b.coord.col;
      return a.line < b.line;
    });
    for (std::size_t i = 1; i < entries.size(); ++i)
      if (entries[i].coord == entries[i - 1].coord)
        fail("duplicate entry at (" + std::to_string(entries[i].coord.row + 1) + ", " +
                 std::to_string(entries[i].coord.col + 1) + ")",
             entries[i].line);
    raw.coords.reserve(entries.size());
    raw.values.reserve(entries.size());
    for (const Entry& en : entries) {
      raw.coords.push_back(en.coord);
      raw.values.push_back(en.value);
    }
    return raw;
  }

  // array format, stored column-major (lower triangle only when symmetric)
  raw.dense = true;
  raw.values.assign(static_cast<std::size_t>(rows * cols), 0.0);
  long long got = 0;
  for (long long c = 0; c < cols; ++c) {
    for (long long r = (symmetry == "symmetric") ? c : 0; r < rows; ++r) {
      if (!rd.next_data(line))
        fail("file ends after " + std::to_string(got) + " array values", rd.line_no);
      std::istringstream vs(line);
      double v = 0.0;
      if (!(vs >> v)) fail("malformed array value", rd.line_no);
      check_line_consumed(vs, rd.line_no);
      raw.values[static_cast<std::size_t>(r * cols + c)] = v;
      if (symmetry == "symmetric" && r != c)
        raw.values[static_cast<std::size_t>(c * cols + r)] = v;
      ++got;
    }
  }
  if (rd.next_data(line)) fail("more array values than the shape holds", rd.line_no);
  return raw;
}

//---------------------------------------------------------------------------
// MatrixMarket writer
//---------------------------------------------------------------------------

void detail::write_matrix_market_raw(const std::filesystem::path& path,
                                     const RawMatrixMarket& m, int digits) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  char buf[80];
  if (m.dense) {
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows << ' ' << m.cols << '\n';
    for (std::int64_t c = 0; c < m.cols; ++c)
      for (std::int64_t r = 0; r < m.rows; ++r) {
        std::snprintf(buf, sizeof buf, "%.*g\n", digits,
                      m.values[static_cast<std::size_t>(r * m.cols + c)]);
        out << buf;
      }
  } else {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows << ' ' << m.cols << ' ' << m.values.size() << '\n';
    for (std::size_t e = 0; e < m.values.size(); ++e) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.*g\n",
                    static_cast<long long>(m.coords[e].row) + 1,
                    static_cast<long long>(m.coords[e].col) + 1, digits, m.values[e]);
      out << buf;
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

//---------------------------------------------------------------------------
// Uniform pattern sampling
//---------------------------------------------------------------------------

namespace {

// Unbiased draw from [0, bound) by rejection on the raw 64-bit stream.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace

std::vector<Coord> generate_uniform_pattern(std::int64_t rows, std::int64_t cols,
                                            std::int64_t nnz, std::mt19937_64& rng) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("generate_uniform_pattern: dimensions must be >= 1");
  const std::int64_t total = rows * cols;
  if (nnz < 0 || nnz > total)
    throw std::invalid_argument("generate_uniform_pattern: nnz outside [0, rows*cols]");

  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(nnz));
  if (2 * nnz <= total) {
    std::unordered_set<std::int64_t> taken;
    taken.reserve(static_cast<std::size_t>(nnz) * 2);
    while (static_cast<std::int64_t>(taken.size()) < nnz)
      taken.insert(static_cast<std::int64_t>(
          bounded_draw(rng, static_cast<std::uint64_t>(total))));
    for (std::int64_t idx : taken)
      out.push_back({static_cast<index_t>(idx / cols), static_cast<index_t>(idx % cols)});
    std::sort(out.begin(), out.end(), [](const Coord& a, const Coord& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
  } else {
    // Dense side: sample the complement instead and keep everything else.
    const std::int64_t holes_wanted = total - nnz;
    std::unordered_set<std::int64_t> holes;
    holes.reserve(static_cast<std::size_t>(holes_wanted) * 2);
    while (static_cast<std::int64_t>(holes.size()) < holes_wanted)
      holes.insert(static_cast<std::int64_t>(
          bounded_draw(rng, static_cast<std::uint64_t>(total))));
    for (std::int64_t idx = 0; idx < total; ++idx)
      if (!holes.count(idx))
        out.push_back({static_cast<index_t>(idx / cols), static_cast<index_t>(idx % cols)});
  }
  return out;
}

std::vector<Coord> generate_uniform_pattern(std::int64_t rows, std::int64_t cols,
                                            std::int64_t nnz, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return generate_uniform_pattern(rows, cols, nnz, rng);
}

//---------------------------------------------------------------------------
// Dataset selection and the sweep grids
//---------------------------------------------------------------------------

std::vector<MatrixRecord> filter_dataset(std::span<const MatrixRecord> records,
                                         const FilterRules& rules) {
  std::vector<MatrixRecord> kept;
  for (const MatrixRecord& r : records) {
    if (rules.require_square && r.rows != r.cols) continue;
    if (r.rows < rules.min_dim || r.rows > rules.max_dim) continue;
    if (r.cols < rules.min_dim || r.cols > rules.max_dim) continue;
    if (r.sparsity < rules.min_sparsity || r.sparsity > rules.max_sparsity) continue;
    kept.push_back(r);
  }
  return kept;
}

SweepGrid full_sweep_grid() {
  SweepGrid g;
  for (std::int64_t n = 400; n <= 14500; n += 100) g.sizes.push_back(n);
  // Sparsities kept as integer 1e-4 units until the end so the two ranges
  // dedup exactly.
  std::vector<int> units;
  for (int u = 8000; u <= 9950; u += 50) units.push_back(u);
  for (int u = 9950; u <= 9995; u += 5) units.push_back(u);
  std::sort(units.begin(), units.end());
  units.erase(std::unique(units.begin(), units.end()), units.end());
  for (int u : units) g.sparsities.push_back(static_cast<double>(u) / 10000.0);
  return g;
}

SweepGrid subsample(const SweepGrid& grid, std::size_t every_k) {
  if (every_k == 0) throw std::invalid_argument("subsample: stride must be >= 1");
  SweepGrid g;
  for (std::size_t i = 0; i < grid.sizes.size(); i += every_k)
    g.sizes.push_back(grid.sizes[i]);
  for (std::size_t i = 0; i < grid.sparsities.size(); i += every_k)
    g.sparsities.push_back(grid.sparsities[i]);
  return g;
}

//---------------------------------------------------------------------------
// Manifest
//---------------------------------------------------------------------------

void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestRow> rows) {
  for (const ManifestRow& r : rows)
    if (r.name.find_first_of(",\n") != std::string::npos ||
        r.path.find_first_of(",\n") != std::string::npos)
      throw std::invalid_argument("write_manifest: name/path may not contain ',' or newline");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "name,n,sparsity,seed,path\n";
  for (const ManifestRow& r : rows)
    out << r.name << ',' << r.n << ',' << format_shortest(r.sparsity) << ','
        << r.seed << ',' << r.path << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace gcoo
