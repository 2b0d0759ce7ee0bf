#include <vector>

#include "doctest.h"
#include "shortres/mat.hpp"

using namespace shortres;

TEST_SUITE_BEGIN("mat");

namespace {

Mat fromInts(const Field& F, std::vector<std::vector<int64_t>> rows) {
  Mat m(F, static_cast<int64_t>(rows.size()), rows.empty() ? 0 : static_cast<int64_t>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      m.setInt(static_cast<int64_t>(i), static_cast<int64_t>(j), rows[i][j]);
  return m;
}

}  // namespace

TEST_CASE("rank basics") {
  Field F(101);
  CHECK(rank(Mat::identity(F, 2)) == 2);
  CHECK(rank(Mat(F, 3, 5)) == 0);
  // Row 2 = 2 * row 1 over F_5.
  Field F5(5);
  CHECK(rank(fromInts(F5, {{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel basics") {
  Field F(101);
  CHECK(kernel(Mat::identity(F, 4)).cols() == 0);
  CHECK(kernel(Mat(F, 3, 4)).cols() == 4);
  Field F3(3);
  Mat m = fromInts(F3, {{1, 1}});
  Mat k = kernel(m);
  CHECK(k.cols() == 1);
  CHECK((m * k).isZero());
}

TEST_CASE("solve basics") {
  Field F(101);
  Rng rng(3);
  Mat b = Mat::random(F, 4, 2, rng);
  auto x = solve(Mat::identity(F, 4), b);
  REQUIRE(x.has_value());
  CHECK(*x == b);
  CHECK(solve(Mat(F, 3, 2), Mat(F, 3, 1)).has_value());  // 0 x = 0
  // Inconsistent: a = [[1],[1]], b = [[1],[2]].
  CHECK_FALSE(solve(fromInts(F, {{1}, {1}}), fromInts(F, {{1}, {2}})).has_value());
}

TEST_CASE("rank/kernel/transpose invariants on random matrices") {
  Field F(101);
  Rng rng(17);
  for (int round = 0; round < 30; ++round) {
    int64_t r = 1 + static_cast<int64_t>(rng.below(12));
    int64_t c = 1 + static_cast<int64_t>(rng.below(12));
    Mat m = Mat::random(F, r, c, rng);
    auto rr = rref(m, true);
    CHECK(rr.rank + rr.kernel.cols() == c);
    CHECK((m * rr.kernel).isZero());
    CHECK(rank(m) == rank(m.transpose()));
    CHECK(rank(rr.kernel) == rr.kernel.cols());
  }
}

TEST_CASE("solve returns actual solutions on random consistent systems") {
  Field F(101);
  Rng rng(23);
  for (int round = 0; round < 25; ++round) {
    int64_t r = 1 + static_cast<int64_t>(rng.below(8));
    int64_t c = 1 + static_cast<int64_t>(rng.below(8));
    Mat a = Mat::random(F, r, c, rng);
    Mat x0 = Mat::random(F, c, 2, rng);
    Mat b = a * x0;
    auto x = solve(a, b);
    REQUIRE(x.has_value());
    CHECK(a * *x == b);
  }
}

TEST_CASE("extension-field reduction matches prime-field behaviour") {
  Field F(101, 2);
  Rng rng(29);
  for (int round = 0; round < 10; ++round) {
    Mat m = Mat::random(F, 6, 9, rng);
    auto rr = rref(m, true);
    CHECK(rr.rank + rr.kernel.cols() == 9);
    CHECK((m * rr.kernel).isZero());
    CHECK(rank(m) == rank(m.transpose()));
  }
}

// The streaming engine must agree with the scalar path bit for bit:
// same ranks, same pivot columns, same kernels under the shared
// first-nonzero pivot policy.
TEST_CASE("streaming engine agrees with scalar elimination") {
  Field F(101);
  Rng rng(31);
  for (int round = 0; round < 12; ++round) {
    int64_t rows = 20 + static_cast<int64_t>(rng.below(40));
    int64_t cols = 250 + static_cast<int64_t>(rng.below(400));
    Mat m(F, rows, cols);
    // Low-ish rank with structured repeats to exercise free columns.
    Mat gen = Mat::random(F, rows, 7, rng);
    Mat mix = Mat::random(F, 7, cols, rng);
    m = gen * mix;
    // A couple of exact duplicates and zero columns.
    for (int64_t j = 0; j + 1 < cols; j += 37)
      for (int64_t i = 0; i < rows; ++i) m.set(i, j + 1, m.at(i, j));

    auto fast = rref(m, true);            // big enough for the float path
    auto slow = rref(m, true, true);      // keepReduced forces the scalar path
    CHECK(fast.rank == slow.rank);
    CHECK(fast.pivotCols == slow.pivotCols);
    REQUIRE(fast.kernel.cols() == slow.kernel.cols());
    CHECK((m * fast.kernel).isZero());
    CHECK(fast.kernel == slow.kernel);
  }
}

TEST_CASE("streaming engine: saturated fast path stays correct") {
  Field F(101);
  Rng rng(37);
  // rows small, many columns: rank saturates early, the remaining
  // kernel coefficients come from the gather+convert path.
  int64_t rows = 10, cols = 3000;
  Mat m = Mat::random(F, rows, cols, rng);
  auto fast = rref(m, true);
  auto slow = rref(m, true, true);
  CHECK(fast.rank == rows);
  CHECK(fast.pivotCols == slow.pivotCols);
  CHECK(fast.kernel == slow.kernel);
  CHECK((m * fast.kernel).isZero());
}

TEST_CASE("streaming engine: rank-only early stop") {
  Field F(101);
  Rng rng(41);
  StreamRref::Options opt;
  opt.wantKernel = false;
  opt.stopWhenRowsSaturated = true;
  StreamRref sr(F, 8, opt);
  std::vector<int32_t> col(8);
  for (int j = 0; j < 500; ++j) {
    for (auto& v : col) v = static_cast<int32_t>(rng.below(101));
    sr.addColumn(col.data());
  }
  sr.finish();
  CHECK(sr.rank() == 8);
  CHECK(sr.saturated());
  CHECK(sr.columnsFed() == 500);
}

TEST_CASE("streaming engine handles zero-row matrices") {
  Field F(101);
  StreamRref::Options opt;
  StreamRref sr(F, 0, opt);
  std::vector<int32_t> dummy;
  sr.addColumn(dummy.data());
  sr.addColumn(dummy.data());
  sr.finish();
  CHECK(sr.rank() == 0);
  CHECK(sr.freeColumnIds().size() == 2);
  CHECK(sr.freeCoeffs(0).empty());
}

TEST_SUITE_END();
