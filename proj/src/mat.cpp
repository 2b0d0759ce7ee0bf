#include "shortres/mat.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace shortres {

// ---------------------------------------------------------------------------
// Mat basics

Mat::Mat(Field f, int64_t rows, int64_t cols) : field_(f), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ContractViolation("negative matrix dimension");
  data_.assign(static_cast<size_t>(rows * cols * field_.deg()), 0);
}

Mat Mat::identity(const Field& f, int64_t n) {
  Mat m(f, n, n);
  for (int64_t i = 0; i < n; ++i) m.set(i, i, f.one());
  return m;
}

Mat Mat::random(const Field& f, int64_t rows, int64_t cols, Rng& rng) {
  Mat m(f, rows, cols);
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) {
      FElem v;
      for (int d = 0; d < f.deg(); ++d)
        v.c[d] = static_cast<int32_t>(rng.below(static_cast<uint64_t>(f.p())));
      m.set(i, j, v);
    }
  return m;
}

FElem Mat::at(int64_t i, int64_t j) const {
  FElem v;
  const int32_t* src = data_.data() + idx(i, j);
  for (int d = 0; d < field_.deg(); ++d) v.c[d] = src[d];
  return v;
}

void Mat::set(int64_t i, int64_t j, const FElem& v) {
  int32_t* dst = data_.data() + idx(i, j);
  for (int d = 0; d < field_.deg(); ++d) dst[d] = v.c[d];
}

Mat Mat::operator+(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractViolation("shape mismatch in +");
  Mat r(field_, rows_, cols_);
  for (int64_t i = 0; i < rows_; ++i)
    for (int64_t j = 0; j < cols_; ++j) r.set(i, j, field_.add(at(i, j), o.at(i, j)));
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractViolation("shape mismatch in -");
  Mat r(field_, rows_, cols_);
  for (int64_t i = 0; i < rows_; ++i)
    for (int64_t j = 0; j < cols_; ++j) r.set(i, j, field_.sub(at(i, j), o.at(i, j)));
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) throw ContractViolation("shape mismatch in *");
  Mat r(field_, rows_, o.cols_);
  if (field_.deg() == 1) {
    const int64_t p = field_.p();
    for (int64_t i = 0; i < rows_; ++i)
      for (int64_t j = 0; j < o.cols_; ++j) {
        int64_t acc = 0;
        int64_t guard = 0;
        for (int64_t k = 0; k < cols_; ++k) {
          acc += int64_t(data_[idx(i, k)]) * o.data_[o.idx(k, j)];
          if (++guard == (int64_t(1) << 12)) {
            acc %= p;
            guard = 0;
          }
        }
        r.data_[r.idx(i, j)] = static_cast<int32_t>(acc % p);
      }
    return r;
  }
  for (int64_t i = 0; i < rows_; ++i)
    for (int64_t j = 0; j < o.cols_; ++j) {
      FElem acc = field_.zero();
      for (int64_t k = 0; k < cols_; ++k)
        acc = field_.add(acc, field_.mul(at(i, k), o.at(k, j)));
      r.set(i, j, acc);
    }
  return r;
}

Mat Mat::scaled(const FElem& s) const {
  Mat r(field_, rows_, cols_);
  for (int64_t i = 0; i < rows_; ++i)
    for (int64_t j = 0; j < cols_; ++j) r.set(i, j, field_.mul(at(i, j), s));
  return r;
}

Mat Mat::transpose() const {
  Mat r(field_, cols_, rows_);
  for (int64_t i = 0; i < rows_; ++i)
    for (int64_t j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

bool Mat::operator==(const Mat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && data_ == o.data_;
}

bool Mat::isZero() const {
  return std::all_of(data_.begin(), data_.end(), [](int32_t v) { return v == 0; });
}

Mat Mat::hstack(const Mat& o) const {
  if (rows_ != o.rows_) throw ContractViolation("row mismatch in hstack");
  Mat r(field_, rows_, cols_ + o.cols_);
  for (int64_t i = 0; i < rows_; ++i) {
    for (int64_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j));
    for (int64_t j = 0; j < o.cols_; ++j) r.set(i, cols_ + j, o.at(i, j));
  }
  return r;
}

Mat Mat::vstack(const Mat& o) const {
  if (cols_ != o.cols_) throw ContractViolation("col mismatch in vstack");
  Mat r(field_, rows_ + o.rows_, cols_);
  for (int64_t i = 0; i < rows_; ++i)
    for (int64_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j));
  for (int64_t i = 0; i < o.rows_; ++i)
    for (int64_t j = 0; j < cols_; ++j) r.set(rows_ + i, j, o.at(i, j));
  return r;
}

Mat Mat::column(int64_t j) const { return columns({j}); }

Mat Mat::columns(const std::vector<int64_t>& sel) const {
  Mat r(field_, rows_, static_cast<int64_t>(sel.size()));
  for (int64_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < sel.size(); ++j) r.set(i, static_cast<int64_t>(j), at(i, sel[j]));
  return r;
}

Mat Mat::rowsSubset(const std::vector<int64_t>& sel) const {
  Mat r(field_, static_cast<int64_t>(sel.size()), cols_);
  for (size_t i = 0; i < sel.size(); ++i)
    for (int64_t j = 0; j < cols_; ++j) r.set(static_cast<int64_t>(i), j, at(sel[i], j));
  return r;
}

std::vector<FElem> Mat::apply(const std::vector<FElem>& v) const {
  if (static_cast<int64_t>(v.size()) != cols_) throw ContractViolation("apply length mismatch");
  std::vector<FElem> r(rows_, field_.zero());
  for (int64_t i = 0; i < rows_; ++i) {
    FElem acc = field_.zero();
    for (int64_t j = 0; j < cols_; ++j) acc = field_.add(acc, field_.mul(at(i, j), v[j]));
    r[i] = acc;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Scalar reduction, generic over the field

namespace {

RrefResult scalarRref(const Mat& m, bool wantKernel, bool keepReduced) {
  const Field& F = m.field();
  Mat w = m;  // working copy
  const int64_t rows = m.rows(), cols = m.cols();
  std::vector<int64_t> pivotRow(static_cast<size_t>(cols), -1);
  std::vector<int64_t> pivots, pivotRowList;
  std::vector<bool> rowUsed(static_cast<size_t>(rows), false);

  for (int64_t j = 0; j < cols; ++j) {
    int64_t pr = -1;
    for (int64_t i = 0; i < rows; ++i)
      if (!rowUsed[static_cast<size_t>(i)] && !F.isZero(w.at(i, j))) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    rowUsed[static_cast<size_t>(pr)] = true;
    pivotRow[static_cast<size_t>(j)] = pr;
    pivots.push_back(j);
    pivotRowList.push_back(pr);
    FElem inv = F.inv(w.at(pr, j));
    for (int64_t jj = j; jj < cols; ++jj) w.set(pr, jj, F.mul(w.at(pr, jj), inv));
    for (int64_t i = 0; i < rows; ++i) {
      if (i == pr) continue;
      FElem f = w.at(i, j);
      if (F.isZero(f)) continue;
      for (int64_t jj = j; jj < cols; ++jj)
        w.set(i, jj, F.sub(w.at(i, jj), F.mul(f, w.at(pr, jj))));
    }
  }

  RrefResult res;
  res.rank = static_cast<int64_t>(pivots.size());
  res.pivotCols = pivots;
  res.pivotRows = pivotRowList;
  if (keepReduced) res.reduced = w;
  if (wantKernel) {
    Mat K(F, cols, cols - res.rank);
    int64_t k = 0;
    for (int64_t j = 0; j < cols; ++j) {
      if (pivotRow[static_cast<size_t>(j)] >= 0) continue;
      K.set(j, k, F.one());
      for (size_t t = 0; t < pivots.size(); ++t) {
        FElem c = w.at(pivotRow[static_cast<size_t>(pivots[t])], j);
        if (!F.isZero(c)) K.set(pivots[t], k, F.neg(c));
      }
      ++k;
    }
    res.kernel = K;
  }
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// Streaming float32 engine.
//
// Left-looking column stream. E holds the fully reduced pivot columns
// (E[pivotRows,:] = I), so the reduction coefficients of an incoming
// column against all existing pivots are just its pivot-row entries, and
// the trailing update is one GEMM. W mirrors every column operation on E
// and tracks E = V*W with V the original pivot columns; kernel
// coefficients over the original columns are then alpha = W*f.

struct StreamRref::Impl {
  Field F;
  int64_t m;
  Options opt;
  int64_t p;
  bool useFloat;
  float fp, finvp;
  int64_t gemmChunk;

  std::vector<float> E;  // column-major m x rank
  std::vector<float> W;  // column-major rank x rank, row index = pivot ordinal
  int64_t wCap = 0;      // allocated row stride of W
  int64_t wCols = 0;     // valid W columns (rank at last W update)

  std::vector<int64_t> pivRows, pivColIds;
  std::vector<int64_t> pivOfRow;  // row -> pivot ordinal or -1
  std::vector<int64_t> freeIds;
  std::vector<std::vector<int32_t>> freeCo;

  std::vector<float> P;  // pending panel, column-major m x w
  std::vector<int64_t> panelIds;

  // Saturated fast path: pending pivot-row gathers awaiting conversion.
  std::vector<float> satF;
  std::vector<int64_t> satIds;

  int64_t nCols = 0;

  Impl(const Field& f, int64_t rows, Options o) : F(f), m(rows), opt(o), p(f.p()) {
    if (f.deg() != 1) throw ContractViolation("StreamRref requires the prime field");
    useFloat = p <= 509;
    fp = static_cast<float>(p);
    finvp = 1.0f / fp;
    gemmChunk = std::max<int64_t>(1, ((int64_t(1) << 24) - p) / ((p - 1) * (p - 1)));
    if (opt.panel > gemmChunk) opt.panel = static_cast<int>(gemmChunk);
    pivOfRow.assign(static_cast<size_t>(std::max<int64_t>(m, 1)), -1);
  }

  int64_t rank() const { return static_cast<int64_t>(pivRows.size()); }
  bool saturated() const { return rank() == m; }

  void modReduce(float* v, int64_t n) const {
    for (int64_t i = 0; i < n; ++i) {
      float x = v[i];
      float q = std::floor(x * finvp);
      x -= q * fp;
      if (x < 0) x += fp;
      if (x >= fp) x -= fp;
      v[i] = x;
    }
  }

  int64_t invMod(int64_t a) const {
    int64_t t = 0, newt = 1, r = p, newr = a % p;
    while (newr != 0) {
      int64_t q = r / newr;
      int64_t tmp = t - q * newt;
      t = newt;
      newt = tmp;
      tmp = r - q * newr;
      r = newr;
      newr = tmp;
    }
    return t < 0 ? t + p : t;
  }

  // W grows in both dimensions; keep a power-of-two row stride and copy
  // only the wCols columns that are valid so far.
  void ensureWCap(int64_t need) {
    if (need <= wCap) return;
    int64_t cap = std::max<int64_t>(64, wCap);
    while (cap < need) cap *= 2;
    std::vector<float> nw(static_cast<size_t>(cap) * static_cast<size_t>(cap), 0.0f);
    for (int64_t t = 0; t < wCols; ++t)
      std::memcpy(nw.data() + static_cast<size_t>(t * cap), W.data() + static_cast<size_t>(t * wCap),
                  sizeof(float) * static_cast<size_t>(wCols));
    W = std::move(nw);
    wCap = cap;
  }

  void addColumn(const int32_t* col) {
    int64_t id = nCols++;
    if (saturated()) {
      if (opt.stopWhenRowsSaturated) return;
      freeIds.push_back(id);
      if (opt.wantKernel) {
        satIds.push_back(id);
        size_t base = satF.size();
        satF.resize(base + static_cast<size_t>(rank()));
        for (int64_t t = 0; t < rank(); ++t)
          satF[base + static_cast<size_t>(t)] = static_cast<float>(col[pivRows[static_cast<size_t>(t)]]);
        if (static_cast<int64_t>(satIds.size()) >= opt.panel) flushSaturated();
      }
      return;
    }
    panelIds.push_back(id);
    size_t base = P.size();
    P.resize(base + static_cast<size_t>(m));
    for (int64_t i = 0; i < m; ++i) P[base + static_cast<size_t>(i)] = static_cast<float>(col[i]);
    if (static_cast<int64_t>(panelIds.size()) >= opt.panel) flushPanel();
  }

  // Convert E-basis coefficient columns to original-pivot coefficients
  // and append to freeCo. fcols is rank x n column-major.
  void emitConverted(const float* fcols, int64_t n, int64_t rk) {
    using MapF = Eigen::Map<Eigen::MatrixXf, 0, Eigen::OuterStride<>>;
    using CMapF = Eigen::Map<const Eigen::MatrixXf, 0, Eigen::OuterStride<>>;
    std::vector<float> alpha(static_cast<size_t>(rk) * static_cast<size_t>(n), 0.0f);
    if (rk > 0) {
      MapF Am(alpha.data(), rk, n, Eigen::OuterStride<>(rk));
      CMapF Fm(fcols, rk, n, Eigen::OuterStride<>(rk));
      MapF Wm(W.data(), rk, rk, Eigen::OuterStride<>(wCap));
      for (int64_t k0 = 0; k0 < rk; k0 += gemmChunk) {
        int64_t kw = std::min(gemmChunk, rk - k0);
        Am.noalias() += Wm.middleCols(k0, kw) * Fm.middleRows(k0, kw);
        modReduce(alpha.data(), rk * n);
      }
    }
    for (int64_t j = 0; j < n; ++j) {
      std::vector<int32_t> co(static_cast<size_t>(rk));
      for (int64_t t = 0; t < rk; ++t)
        co[static_cast<size_t>(t)] = static_cast<int32_t>(alpha[static_cast<size_t>(j * rk + t)]);
      freeCo.push_back(std::move(co));
    }
  }

  void flushSaturated() {
    if (satIds.empty()) return;
    emitConverted(satF.data(), static_cast<int64_t>(satIds.size()), rank());
    satF.clear();
    satIds.clear();
  }

  void flushPanel() {
    if (panelIds.empty()) return;
    if (useFloat)
      flushFloat();
    else
      flushScalar();
    panelIds.clear();
    P.clear();
  }

  void flushFloat() {
    using MapF = Eigen::Map<Eigen::MatrixXf, 0, Eigen::OuterStride<>>;
    const int64_t w = static_cast<int64_t>(panelIds.size());
    const int64_t rho = rank();
    MapF Pm(P.data(), m, w, Eigen::OuterStride<>(m));

    // Coefficients against the existing fully reduced pivot basis.
    std::vector<float> coeff(static_cast<size_t>(std::max<int64_t>(rho, 1)) * static_cast<size_t>(w), 0.0f);
    if (rho > 0) {
      for (int64_t j = 0; j < w; ++j)
        for (int64_t t = 0; t < rho; ++t)
          coeff[static_cast<size_t>(j * rho + t)] =
              P[static_cast<size_t>(j * m) + static_cast<size_t>(pivRows[static_cast<size_t>(t)])];
      MapF Em(E.data(), m, rho, Eigen::OuterStride<>(m));
      MapF Cm(coeff.data(), rho, w, Eigen::OuterStride<>(rho));
      for (int64_t k0 = 0; k0 < rho; k0 += gemmChunk) {
        int64_t kw = std::min(gemmChunk, rho - k0);
        Pm.noalias() -= Em.middleCols(k0, kw) * Cm.middleRows(k0, kw);
        modReduce(P.data(), m * w);
      }
    }

    // In-panel scalar sweep. localCo[j] holds coefficients against the
    // panel's new pivot columns in creation order.
    std::vector<int64_t> newPiv;
    std::vector<float> newPivInv;  // normalization factor per new pivot
    std::vector<std::vector<int32_t>> localCo(static_cast<size_t>(w));
    std::vector<int64_t> freeLocal;
    for (int64_t j = 0; j < w; ++j) {
      float* col = P.data() + static_cast<size_t>(j * m);
      auto& lc = localCo[static_cast<size_t>(j)];
      lc.resize(newPiv.size());
      for (size_t t = 0; t < newPiv.size(); ++t) {
        int64_t prow = pivRows[static_cast<size_t>(rho) + t];
        float f = col[prow];
        lc[t] = static_cast<int32_t>(f);
        if (f != 0.0f) {
          const float* pc = P.data() + static_cast<size_t>(newPiv[t] * m);
          for (int64_t i = 0; i < m; ++i) col[i] -= f * pc[i];
          modReduce(col, m);
        }
      }
      int64_t pr = -1;
      for (int64_t i = 0; i < m; ++i)
        if (pivOfRow[static_cast<size_t>(i)] < 0 && col[i] != 0.0f) {
          pr = i;
          break;
        }
      if (pr < 0) {
        freeLocal.push_back(j);
        freeIds.push_back(panelIds[static_cast<size_t>(j)]);
        continue;
      }
      float fiv = static_cast<float>(invMod(static_cast<int64_t>(col[pr])));
      for (int64_t i = 0; i < m; ++i) col[i] *= fiv;
      modReduce(col, m);
      pivOfRow[static_cast<size_t>(pr)] = rank();
      pivRows.push_back(pr);
      pivColIds.push_back(panelIds[static_cast<size_t>(j)]);
      newPiv.push_back(j);
      newPivInv.push_back(fiv);
    }

    const int64_t k = static_cast<int64_t>(newPiv.size());
    const int64_t rkExt = rho + k;

    if (opt.wantKernel) {
      ensureWCap(rkExt);
      // W columns for the new pivots, sequential in creation order:
      // Wcol(rho+b) = inv_b * (e_(rho+b) - W[:,:rho]*f - sum_c lc_c W[:,rho+c]).
      for (int64_t b = 0; b < k; ++b) {
        int64_t j = newPiv[static_cast<size_t>(b)];
        float* wc = W.data() + static_cast<size_t>((rho + b) * wCap);
        std::fill(wc, wc + static_cast<size_t>(rkExt), 0.0f);
        if (rho > 0) {
          const float* f = coeff.data() + static_cast<size_t>(j * rho);
          int64_t sinceReduce = 0;
          for (int64_t t = 0; t < rho; ++t) {
            float ft = f[t];
            if (ft == 0.0f) continue;
            const float* wt = W.data() + static_cast<size_t>(t * wCap);
            for (int64_t s = 0; s < rho; ++s) wc[s] -= ft * wt[s];
            if (++sinceReduce == gemmChunk) {
              modReduce(wc, rho);
              sinceReduce = 0;
            }
          }
          modReduce(wc, rho);
        }
        const auto& lc = localCo[static_cast<size_t>(j)];
        for (size_t c = 0; c < lc.size(); ++c) {
          if (lc[c] == 0) continue;
          const float* wt = W.data() + static_cast<size_t>((rho + static_cast<int64_t>(c)) * wCap);
          float fc = static_cast<float>(lc[c]);
          for (int64_t s = 0; s < rkExt; ++s) wc[s] -= fc * wt[s];
          modReduce(wc, rkExt);
        }
        wc[rho + b] = 1.0f;
        float scale = newPivInv[static_cast<size_t>(b)];
        for (int64_t s = 0; s < rkExt; ++s) wc[s] *= scale;
        modReduce(wc, rkExt);
      }
      wCols = rkExt;
      // Free-column conversion while this basis is still current.
      if (!freeLocal.empty()) {
        std::vector<float> fext(static_cast<size_t>(std::max<int64_t>(rkExt, 1)) * freeLocal.size(), 0.0f);
        for (size_t q = 0; q < freeLocal.size(); ++q) {
          int64_t j = freeLocal[q];
          for (int64_t t = 0; t < rho; ++t)
            fext[q * static_cast<size_t>(rkExt) + static_cast<size_t>(t)] =
                coeff[static_cast<size_t>(j * rho + t)];
          const auto& lc = localCo[static_cast<size_t>(j)];
          for (size_t c = 0; c < lc.size(); ++c)
            fext[q * static_cast<size_t>(rkExt) + static_cast<size_t>(rho) + c] = static_cast<float>(lc[c]);
        }
        emitConverted(fext.data(), static_cast<int64_t>(freeLocal.size()), rkExt);
      }
    }

    if (k > 0) {
      // Reduce the new pivot columns against each other (later first),
      // mirroring on W.
      for (int64_t a = k - 1; a >= 0; --a) {
        float* ca = P.data() + static_cast<size_t>(newPiv[static_cast<size_t>(a)] * m);
        float* wa = opt.wantKernel ? W.data() + static_cast<size_t>((rho + a) * wCap) : nullptr;
        for (int64_t b = a + 1; b < k; ++b) {
          int64_t rb = pivRows[static_cast<size_t>(rho + b)];
          float f = ca[rb];
          if (f == 0.0f) continue;
          const float* cb = P.data() + static_cast<size_t>(newPiv[static_cast<size_t>(b)] * m);
          for (int64_t i = 0; i < m; ++i) ca[i] -= f * cb[i];
          modReduce(ca, m);
          if (wa) {
            const float* wb = W.data() + static_cast<size_t>((rho + b) * wCap);
            for (int64_t s = 0; s < rkExt; ++s) wa[s] -= f * wb[s];
            modReduce(wa, rkExt);
          }
        }
      }
      // Reduce old E columns against the new pivots: E -= Vnew * S with
      // S = E[newPivRows, :]; mirror on W.
      if (rho > 0) {
        std::vector<float> S(static_cast<size_t>(k) * static_cast<size_t>(rho));
        for (int64_t t = 0; t < rho; ++t)
          for (int64_t b = 0; b < k; ++b)
            S[static_cast<size_t>(t * k + b)] =
                E[static_cast<size_t>(t * m) + static_cast<size_t>(pivRows[static_cast<size_t>(rho + b)])];
        std::vector<float> V(static_cast<size_t>(m) * static_cast<size_t>(k));
        for (int64_t b = 0; b < k; ++b)
          std::memcpy(V.data() + static_cast<size_t>(b * m),
                      P.data() + static_cast<size_t>(newPiv[static_cast<size_t>(b)] * m),
                      sizeof(float) * static_cast<size_t>(m));
        MapF Em(E.data(), m, rho, Eigen::OuterStride<>(m));
        MapF Vm(V.data(), m, k, Eigen::OuterStride<>(m));
        MapF Sm(S.data(), k, rho, Eigen::OuterStride<>(k));
        Em.noalias() -= Vm * Sm;
        modReduce(E.data(), m * rho);
        if (opt.wantKernel) {
          std::vector<float> Wn(static_cast<size_t>(rkExt) * static_cast<size_t>(k));
          for (int64_t b = 0; b < k; ++b)
            std::memcpy(Wn.data() + static_cast<size_t>(b * rkExt),
                        W.data() + static_cast<size_t>((rho + b) * wCap),
                        sizeof(float) * static_cast<size_t>(rkExt));
          MapF Wm(W.data(), rkExt, rho, Eigen::OuterStride<>(wCap));
          MapF Wnm(Wn.data(), rkExt, k, Eigen::OuterStride<>(rkExt));
          MapF Sm2(S.data(), k, rho, Eigen::OuterStride<>(k));
          Wm.noalias() -= Wnm * Sm2;
          for (int64_t t = 0; t < rho; ++t)
            modReduce(W.data() + static_cast<size_t>(t * wCap), rkExt);
        }
      }
      // Append new pivot columns to E.
      size_t base = E.size();
      E.resize(base + static_cast<size_t>(k) * static_cast<size_t>(m));
      for (int64_t b = 0; b < k; ++b)
        std::memcpy(E.data() + base + static_cast<size_t>(b * m),
                    P.data() + static_cast<size_t>(newPiv[static_cast<size_t>(b)] * m),
                    sizeof(float) * static_cast<size_t>(m));
    }
  }

  void flushScalar();

  float eAt(int64_t row, int64_t t) const { return E[static_cast<size_t>(t * m + row)]; }
};

void StreamRref::Impl::flushScalar() {
  // Large-p fallback; same policy in plain int64. Sizes on this path are
  // expected to be modest, so no blocking.
  const int64_t w = static_cast<int64_t>(panelIds.size());
  for (int64_t j = 0; j < w; ++j) {
    if (saturated() && opt.stopWhenRowsSaturated) return;
    const float* colf = P.data() + static_cast<size_t>(j * m);
    std::vector<int64_t> col(static_cast<size_t>(m));
    for (int64_t i = 0; i < m; ++i) col[static_cast<size_t>(i)] = static_cast<int64_t>(colf[i]);
    std::vector<int64_t> fco(pivRows.size());
    for (size_t t = 0; t < pivRows.size(); ++t) {
      int64_t f = col[static_cast<size_t>(pivRows[t])] % p;
      fco[t] = f;
      if (f != 0) {
        const float* pc = E.data() + t * static_cast<size_t>(m);
        for (int64_t i = 0; i < m; ++i) {
          int64_t v = col[static_cast<size_t>(i)] - f * static_cast<int64_t>(pc[i]) % p;
          col[static_cast<size_t>(i)] = (v % p + p) % p;
        }
      }
    }
    int64_t pr = -1;
    for (int64_t i = 0; i < m; ++i)
      if (pivOfRow[static_cast<size_t>(i)] < 0 && col[static_cast<size_t>(i)] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) {
      freeIds.push_back(panelIds[static_cast<size_t>(j)]);
      if (opt.wantKernel) {
        // alpha = W * f over the original pivots.
        std::vector<int32_t> co(pivRows.size(), 0);
        for (size_t t = 0; t < pivRows.size(); ++t) {
          if (fco[t] == 0) continue;
          const float* wt = W.data() + static_cast<size_t>(static_cast<int64_t>(t) * wCap);
          for (size_t s = 0; s < pivRows.size(); ++s)
            co[s] = static_cast<int32_t>(((co[s] + fco[t] * static_cast<int64_t>(wt[s])) % p));
        }
        freeCo.push_back(std::move(co));
      }
      continue;
    }
    int64_t iv = invMod(col[static_cast<size_t>(pr)]);
    for (int64_t i = 0; i < m; ++i)
      col[static_cast<size_t>(i)] = col[static_cast<size_t>(i)] * iv % p;
    int64_t ordinal = rank();
    if (opt.wantKernel) {
      ensureWCap(ordinal + 1);
      float* wc = W.data() + static_cast<size_t>(ordinal * wCap);
      std::fill(wc, wc + static_cast<size_t>(ordinal + 1), 0.0f);
      std::vector<int64_t> acc(static_cast<size_t>(ordinal + 1), 0);
      for (size_t t = 0; t < static_cast<size_t>(ordinal); ++t) {
        if (fco[t] == 0) continue;
        const float* wt = W.data() + static_cast<size_t>(static_cast<int64_t>(t) * wCap);
        for (size_t s = 0; s < static_cast<size_t>(ordinal); ++s)
          acc[s] = (acc[s] - fco[t] * static_cast<int64_t>(wt[s])) % p;
      }
      acc[static_cast<size_t>(ordinal)] = 1;
      for (size_t s = 0; s <= static_cast<size_t>(ordinal); ++s)
        wc[s] = static_cast<float>(((acc[s] * iv) % p + p) % p);
      wCols = ordinal + 1;
    }
    // Reduce existing pivot columns against the new one (keep E fully
    // reduced), mirroring on W.
    for (size_t t = 0; t < pivRows.size(); ++t) {
      float* pc = E.data() + t * static_cast<size_t>(m);
      int64_t f = static_cast<int64_t>(pc[pr]) % p;
      if (f == 0) continue;
      for (int64_t i = 0; i < m; ++i) {
        int64_t v = static_cast<int64_t>(pc[i]) - f * col[static_cast<size_t>(i)] % p;
        pc[i] = static_cast<float>((v % p + p) % p);
      }
      if (opt.wantKernel) {
        float* wt = W.data() + static_cast<size_t>(static_cast<int64_t>(t) * wCap);
        const float* wn = W.data() + static_cast<size_t>(ordinal * wCap);
        for (int64_t s = 0; s <= ordinal; ++s) {
          int64_t v = static_cast<int64_t>(wt[s]) - f * static_cast<int64_t>(wn[s]) % p;
          wt[s] = static_cast<float>((v % p + p) % p);
        }
      }
    }
    pivOfRow[static_cast<size_t>(pr)] = ordinal;
    pivRows.push_back(pr);
    pivColIds.push_back(panelIds[static_cast<size_t>(j)]);
    E.resize(E.size() + static_cast<size_t>(m));
    float* ec = E.data() + (E.size() - static_cast<size_t>(m));
    for (int64_t i = 0; i < m; ++i) ec[i] = static_cast<float>(col[static_cast<size_t>(i)]);
  }
}

StreamRref::StreamRref(const Field& f, int64_t rows, Options opt)
    : impl_(std::make_unique<Impl>(f, rows, opt)) {}
StreamRref::~StreamRref() = default;

int64_t StreamRref::addColumn(const int32_t* col) {
  int64_t id = impl_->nCols;
  impl_->addColumn(col);
  return id;
}

void StreamRref::addColumnSparse(const std::vector<std::pair<int64_t, int32_t>>& entries) {
  std::vector<int32_t> col(static_cast<size_t>(impl_->m), 0);
  for (auto& [i, v] : entries) col[static_cast<size_t>(i)] = v;
  addColumn(col.data());
}

void StreamRref::finish() {
  impl_->flushPanel();
  impl_->flushSaturated();
}

int64_t StreamRref::rank() const { return impl_->rank(); }
int64_t StreamRref::columnsFed() const { return impl_->nCols; }
bool StreamRref::saturated() const { return impl_->saturated(); }
const std::vector<int64_t>& StreamRref::pivotColumnIds() const { return impl_->pivColIds; }
const std::vector<int64_t>& StreamRref::pivotRows() const { return impl_->pivRows; }
const std::vector<int64_t>& StreamRref::freeColumnIds() const { return impl_->freeIds; }
const std::vector<int32_t>& StreamRref::freeCoeffs(int64_t k) const {
  return impl_->freeCo[static_cast<size_t>(k)];
}

Mat StreamRref::columnSpaceBasis() const {
  Mat B(impl_->F, impl_->m, rank());
  for (int64_t t = 0; t < rank(); ++t)
    for (int64_t i = 0; i < impl_->m; ++i) {
      int32_t v = static_cast<int32_t>(impl_->eAt(i, t));
      if (v != 0) B.setInt(i, t, v);
    }
  return B;
}

// ---------------------------------------------------------------------------
// Dispatching front ends

RrefResult rref(const Mat& m, bool wantKernel, bool keepReduced) {
  const Field& F = m.field();
  bool fastEligible = F.deg() == 1 && F.p() <= 509 && !keepReduced &&
                      m.rows() * m.cols() > (int64_t(1) << 14) && m.rows() > 0;
  if (!fastEligible) return scalarRref(m, wantKernel, keepReduced);

  StreamRref::Options opt;
  opt.wantKernel = wantKernel;
  StreamRref sr(F, m.rows(), opt);
  std::vector<int32_t> col(static_cast<size_t>(m.rows()));
  for (int64_t j = 0; j < m.cols(); ++j) {
    for (int64_t i = 0; i < m.rows(); ++i) col[static_cast<size_t>(i)] = m.at(i, j).c[0];
    sr.addColumn(col.data());
  }
  sr.finish();

  RrefResult res;
  res.rank = sr.rank();
  res.pivotCols = sr.pivotColumnIds();  // ascending: columns fed in order
  res.pivotRows = sr.pivotRows();
  if (wantKernel) {
    const auto& frees = sr.freeColumnIds();
    Mat K(F, m.cols(), static_cast<int64_t>(frees.size()));
    const auto& pivIds = sr.pivotColumnIds();
    for (size_t k = 0; k < frees.size(); ++k) {
      K.set(frees[k], static_cast<int64_t>(k), F.one());
      const auto& co = sr.freeCoeffs(static_cast<int64_t>(k));
      for (size_t t = 0; t < co.size(); ++t)
        if (co[t] != 0) K.set(pivIds[t], static_cast<int64_t>(k), F.fromInt(-int64_t(co[t])));
    }
    res.kernel = K;
  }
  return res;
}

int64_t rank(const Mat& m) { return rref(m).rank; }

Mat kernel(const Mat& m) { return rref(m, true).kernel; }

std::optional<Mat> solve(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw ContractViolation("solve: row mismatch");
  const Field& F = a.field();
  RrefResult r = scalarRref(a.hstack(b), false, true);
  Mat x(F, a.cols(), b.cols());
  std::vector<int64_t> pivRowOf(static_cast<size_t>(a.cols()), -1);
  for (size_t t = 0; t < r.pivotCols.size(); ++t) {
    if (r.pivotCols[t] >= a.cols()) return std::nullopt;  // inconsistent
    pivRowOf[static_cast<size_t>(r.pivotCols[t])] = r.pivotRows[t];
  }
  for (int64_t j = 0; j < a.cols(); ++j)
    if (pivRowOf[static_cast<size_t>(j)] >= 0)
      for (int64_t k = 0; k < b.cols(); ++k)
        x.set(j, k, r.reduced.at(pivRowOf[static_cast<size_t>(j)], a.cols() + k));
  return x;
}

}  // namespace shortres
