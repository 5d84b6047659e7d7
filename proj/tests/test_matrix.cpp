#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "common.hpp"
#include "gcoo/matrix.hpp"

using namespace gcoo;
using testutil::example4x4;
using Dense = DenseMatrix<float>;

TEST_CASE("dense to COO keeps row-major order on the 4x4 example") {
  const auto coo = dense_to_coo(example4x4<float>());
  CHECK(coo.rows_dim == 4);
  CHECK(coo.cols_dim == 4);
  CHECK(coo.values == std::vector<float>{7, 8, 10, 9, 6, 3});
  CHECK(coo.row_idx == std::vector<index_t>{0, 0, 1, 2, 3, 3});
  CHECK(coo.col_idx == std::vector<index_t>{0, 3, 1, 0, 2, 3});
}

TEST_CASE("dense to COO edge shapes") {
  Dense zero(3, 5);
  CHECK(dense_to_coo(zero).nnz() == 0);

  Dense ident(3, 3);
  for (int i = 0; i < 3; ++i) ident(i, i) = 1.0f;
  const auto coo = dense_to_coo(ident);
  CHECK(coo.nnz() == 3);
  CHECK(coo.row_idx == coo.col_idx);
}

TEST_CASE("dense to CSR on the 4x4 example") {
  const auto csr = dense_to_csr(example4x4<float>());
  CHECK(csr.values == std::vector<float>{7, 8, 10, 9, 6, 3});
  CHECK(csr.col_idx == std::vector<index_t>{0, 3, 1, 0, 2, 3});
  CHECK(csr.row_ptr == std::vector<std::int64_t>{0, 2, 3, 4, 6});
}

TEST_CASE("CSR row_ptr shapes for zero and identity") {
  Dense zero(4, 4);
  CHECK(dense_to_csr(zero).row_ptr == std::vector<std::int64_t>{0, 0, 0, 0, 0});

  Dense ident(4, 4);
  for (int i = 0; i < 4; ++i) ident(i, i) = 1.0f;
  CHECK(dense_to_csr(ident).row_ptr == std::vector<std::int64_t>{0, 1, 2, 3, 4});
}

TEST_CASE("dense to GCOO at p=2 on the 4x4 example") {
  const auto g = dense_to_gcoo(example4x4<float>(), 2);
  CHECK(g.groups() == 2);
  CHECK(g.g_idxes == std::vector<std::int64_t>{0, 3});
  CHECK(g.nnz_per_group == std::vector<std::int64_t>{3, 3});
  // group 0 = rows {0,1} ordered by (col,row); group 1 = rows {2,3}
  CHECK(g.values == std::vector<float>{7, 10, 8, 9, 6, 3});
  CHECK(g.row_idx == std::vector<index_t>{0, 1, 0, 2, 3, 3});
  CHECK(g.col_idx == std::vector<index_t>{0, 1, 3, 0, 2, 3});
}

TEST_CASE("GCOO group count and empty leading group") {
  Dense a(5, 5);
  for (int c = 0; c < 5; ++c) a(4, c) = 1.0f;
  const auto g = dense_to_gcoo(a, 4);
  CHECK(g.groups() == 2);
  CHECK(g.nnz_per_group == std::vector<std::int64_t>{0, 5});
  CHECK(g.g_idxes == std::vector<std::int64_t>{0, 0});
  for (std::int64_t e = 0; e < g.nnz(); ++e) CHECK(g.row_idx[e] == 4);
}

TEST_CASE("GCOO rejects p that is not a power of two") {
  const auto a = example4x4<float>();
  CHECK_THROWS_AS(dense_to_gcoo(a, 3), std::invalid_argument);
  CHECK_THROWS_AS(dense_to_gcoo(a, 0), std::invalid_argument);
  CHECK_THROWS_AS(dense_to_gcoo(a, -2), std::invalid_argument);
  CHECK_THROWS_AS(dense_to_gcoo(a, 6), std::invalid_argument);
}

TEST_CASE("validation rejects malformed sparse inputs") {
  // duplicate coordinate in COO
  CHECK_THROWS_AS(CooMatrix<float>(2, 2, {1.0f, 2.0f}, {0, 0}, {1, 1}),
                  std::invalid_argument);
  // out-of-range coordinate
  CHECK_THROWS_AS(CooMatrix<float>(2, 2, {1.0f}, {0}, {5}), std::invalid_argument);
  // unordered entries
  CHECK_THROWS_AS(CooMatrix<float>(2, 2, {1.0f, 2.0f}, {1, 0}, {0, 0}),
                  std::invalid_argument);

  // GCOO with inconsistent offsets
  CHECK_THROWS_AS(GcooMatrix<float>(4, 4, 2, {1.0f}, {0}, {0}, {0, 2}, {1, 0}),
                  std::invalid_argument);
  // GCOO with a row outside its band
  CHECK_THROWS_AS(GcooMatrix<float>(4, 4, 2, {1.0f}, {3}, {0}, {0, 1}, {1, 0}),
                  std::invalid_argument);
  // GCOO group slice ordered by (row, col) instead of (col, row)
  CHECK_THROWS_AS(GcooMatrix<float>(4, 4, 2, {1.0f, 2.0f}, {0, 1}, {3, 0}, {0, 2},
                                    {2, 0}),
                  std::invalid_argument);

  // CSR with non-monotone row_ptr
  CHECK_THROWS_AS(CsrMatrix<float>(2, 2, {1.0f}, {0}, {0, 2, 1}),
                  std::invalid_argument);
}

TEST_CASE("storage footprints for the 4x4 example (n=4, nnz=6)") {
  CHECK(storage_footprint(SparseFormat::csr, 4, 6).words == 16);
  CHECK(storage_footprint(SparseFormat::coo, 4, 6).words == 18);
  CHECK(storage_footprint(SparseFormat::gcoo, 4, 6, 2).words == 22);
  CHECK_THROWS_AS(storage_footprint(SparseFormat::gcoo, 4, 6, 3),
                  std::invalid_argument);
}

TEST_CASE("footprint formulas as properties") {
  testutil::rng_t rng(7);
  for (int it = 0; it < 2000; ++it) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 1000));
    const std::int64_t nnz = static_cast<std::int64_t>(testutil::bounded(rng, 5000));
    const std::int64_t p = std::int64_t(1) << testutil::bounded(rng, 10);
    CHECK(storage_footprint(SparseFormat::csr, n, nnz).words == 2 * nnz + n);
    CHECK(storage_footprint(SparseFormat::coo, n, nnz).words == 3 * nnz);
    CHECK(storage_footprint(SparseFormat::gcoo, n, nnz, p).words ==
          3 * nnz + 2 * ((n + p - 1) / p));
  }
}

TEST_CASE("group count formula holds across shapes") {
  testutil::rng_t rng(11);
  for (int it = 0; it < 300; ++it) {
    const std::int64_t rows = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 80));
    const std::int64_t cols = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 80));
    const index_t p = index_t(1) << testutil::bounded(rng, 8);
    auto a = testutil::random_dense<float>(rows, cols, 0.2, rng);
    const auto g = dense_to_gcoo(a, p);
    CHECK(g.groups() == (rows + p - 1) / p);
    CHECK_NOTHROW(g.validate());
  }
}

TEST_CASE("round trips reproduce the dense source exactly") {
  testutil::rng_t rng(13);
  for (int it = 0; it < 120; ++it) {
    const std::int64_t rows = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 60));
    const std::int64_t cols = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 60));
    const double density = testutil::unit(rng) * 0.5;
    const auto a = testutil::random_dense<float>(rows, cols, density, rng);

    CHECK(coo_to_dense(dense_to_coo(a)) == a);
    CHECK(csr_to_dense(dense_to_csr(a)) == a);
    const index_t p = index_t(1) << testutil::bounded(rng, 7);
    CHECK(gcoo_to_dense(dense_to_gcoo(a, p)) == a);
  }
}

TEST_CASE("all formats carry the same entry set") {
  testutil::rng_t rng(17);
  for (int it = 0; it < 60; ++it) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 50));
    const auto a = testutil::random_dense<float>(n, n, 0.3, rng);
    const auto coo = dense_to_coo(a);
    const auto csr = dense_to_csr(a);
    const auto g = dense_to_gcoo(a, 4);

    CHECK(coo.nnz() == csr.nnz());
    CHECK(coo.nnz() == g.nnz());
    // CSR flattens to the same row-major stream as COO
    CHECK(csr.values == coo.values);
    CHECK(csr.col_idx == coo.col_idx);
    // GCOO resorted row-major equals COO
    const auto back = gcoo_to_coo(g);
    CHECK(back.values == coo.values);
    CHECK(back.row_idx == coo.row_idx);
    CHECK(back.col_idx == coo.col_idx);
  }
}

TEST_CASE("coo_to_gcoo matches dense_to_gcoo") {
  testutil::rng_t rng(19);
  for (int it = 0; it < 60; ++it) {
    const std::int64_t rows = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 40));
    const std::int64_t cols = 1 + static_cast<std::int64_t>(testutil::bounded(rng, 40));
    const auto a = testutil::random_dense<float>(rows, cols, 0.25, rng);
    const index_t p = index_t(1) << testutil::bounded(rng, 6);
    const auto g1 = dense_to_gcoo(a, p);
    const auto g2 = coo_to_gcoo(dense_to_coo(a), p);
    CHECK(g1.values == g2.values);
    CHECK(g1.row_idx == g2.row_idx);
    CHECK(g1.col_idx == g2.col_idx);
    CHECK(g1.g_idxes == g2.g_idxes);
    CHECK(g1.nnz_per_group == g2.nnz_per_group);
  }
}

TEST_CASE("group slices partition the entries by row band") {
  testutil::rng_t rng(23);
  const auto a = testutil::random_dense<float>(37, 53, 0.15, rng);
  const auto g = dense_to_gcoo(a, 8);
  for (std::int64_t gi = 0; gi < g.groups(); ++gi) {
    const std::int64_t lo = g.g_idxes[gi];
    const std::int64_t hi = lo + g.nnz_per_group[gi];
    for (std::int64_t e = lo; e < hi; ++e) {
      CHECK(g.row_idx[e] / 8 == gi);
      if (e > lo) {
        const bool ordered = g.col_idx[e - 1] < g.col_idx[e] ||
                             (g.col_idx[e - 1] == g.col_idx[e] &&
                              g.row_idx[e - 1] < g.row_idx[e]);
        CHECK(ordered);
      }
    }
  }
}

TEST_CASE("sparsity measurements") {
  Dense zero(10, 10);
  CHECK(sparsity(zero) == doctest::Approx(1.0));
  Dense full(10, 10);
  for (auto& v : full.data) v = 2.0f;
  CHECK(sparsity(full) == doctest::Approx(0.0));
  const auto a = example4x4<float>();
  CHECK(sparsity(a) == doctest::Approx(10.0 / 16.0));
}

TEST_CASE("dense matrix rejects degenerate shapes") {
  CHECK_THROWS_AS(Dense(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Dense(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(Dense(-1, 1), std::invalid_argument);
}
