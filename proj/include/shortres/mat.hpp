#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "shortres/field.hpp"
#include "shortres/rng.hpp"

namespace shortres {

/// Dense matrix over a Field. Entries are stored reduced, row-major,
/// with deg() int32 words per entry. Immutable in spirit: operations
/// return fresh values; in-place setters exist only for construction.
class Mat {
public:
  Mat() : field_(101) {}
  Mat(Field f, int64_t rows, int64_t cols);

  static Mat identity(const Field& f, int64_t n);
  static Mat random(const Field& f, int64_t rows, int64_t cols, Rng& rng);

  const Field& field() const { return field_; }
  int64_t rows() const { return rows_; }
  int64_t cols() const { return cols_; }

  FElem at(int64_t i, int64_t j) const;
  void set(int64_t i, int64_t j, const FElem& v);
  void setInt(int64_t i, int64_t j, int64_t v) { set(i, j, field_.fromInt(v)); }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat scaled(const FElem& s) const;
  Mat transpose() const;
  bool operator==(const Mat& o) const;
  bool isZero() const;

  Mat hstack(const Mat& o) const;
  Mat vstack(const Mat& o) const;
  Mat column(int64_t j) const;
  Mat columns(const std::vector<int64_t>& idx) const;
  Mat rowsSubset(const std::vector<int64_t>& idx) const;

  /// Matrix applied to a single column vector held as raw coefficients.
  std::vector<FElem> apply(const std::vector<FElem>& v) const;

private:
  Field field_;
  int64_t rows_ = 0, cols_ = 0;
  std::vector<int32_t> data_;
  int64_t idx(int64_t i, int64_t j) const { return (i * cols_ + j) * field_.deg(); }
};

/// Row-reduction outcome. `reduced` holds the fully reduced matrix when
/// requested; pivot columns are listed in elimination order (which is
/// ascending). Pivoting is deterministic: columns left to right, first
/// nonzero row in original order.
struct RrefResult {
  int64_t rank = 0;
  std::vector<int64_t> pivotCols;
  std::vector<int64_t> pivotRows;  // aligned with pivotCols
  Mat reduced;      // present iff keepReduced
  Mat kernel;       // present iff wantKernel: cols(m) x nullity basis
};

RrefResult rref(const Mat& m, bool wantKernel = false, bool keepReduced = false);

int64_t rank(const Mat& m);

/// Basis of the right null space; rank(kernel(m)) == cols(m) - rank(m).
Mat kernel(const Mat& m);

/// Solve a x = b columnwise; absent when any column of b is outside the
/// column space of a. Free variables are set to zero, deterministically.
std::optional<Mat> solve(const Mat& a, const Mat& b);

/// Streaming left-looking row reduction over the prime field (deg 1).
/// Columns are fed in order; pivot policy matches rref(). Internally the
/// trailing reduction runs on float32 panels with GEMM updates, chunked
/// so every intermediate stays below 2^24 and arithmetic is exact.
///
/// Kernel vectors come out factored: a non-pivot column equals the
/// combination of earlier pivot columns given by its coefficient vector.
class StreamRref {
public:
  struct Options {
    bool wantKernel = true;
    bool stopWhenRowsSaturated = false;  // rank-only early exit
    int panel = 256;
  };

  StreamRref(const Field& f, int64_t rows, Options opt);
  ~StreamRref();

  /// Feed one column (dense int32 residues, length rows). Returns its id.
  int64_t addColumn(const int32_t* col);
  void addColumnSparse(const std::vector<std::pair<int64_t, int32_t>>& entries);

  void finish();

  int64_t rank() const;
  int64_t columnsFed() const;
  bool saturated() const;  // rank == rows
  const std::vector<int64_t>& pivotColumnIds() const;
  const std::vector<int64_t>& pivotRows() const;

  /// Ids of columns that were not pivots (the kernel's free columns).
  const std::vector<int64_t>& freeColumnIds() const;
  /// Coefficients of free column k over the pivot columns, in pivot order
  /// (length = rank at the time the column was processed; later zero).
  const std::vector<int32_t>& freeCoeffs(int64_t k) const;

  /// Reduced pivot-column basis of the column space (rows x rank), i.e.
  /// the E-matrix of the elimination; entries already mod p.
  Mat columnSpaceBasis() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace shortres
