#include "shortres/resolution.hpp"

#include <algorithm>

namespace shortres {

namespace {

// Incremental echelon of FElem vectors; module-scale work only.
class Echelon {
public:
  Echelon(const Field& f, int64_t len) : F_(f), len_(len) {}

  bool insert(std::vector<FElem>& v) {
    reduce(v);
    int64_t lead = leadOf(v);
    if (lead < 0) return false;
    FElem inv = F_.inv(v[static_cast<size_t>(lead)]);
    for (auto& x : v) x = F_.mul(x, inv);
    rows_.push_back(v);
    leads_.push_back(lead);
    return true;
  }

  void reduce(std::vector<FElem>& v) const {
    for (size_t t = 0; t < rows_.size(); ++t) {
      FElem f = v[static_cast<size_t>(leads_[t])];
      if (F_.isZero(f)) continue;
      for (int64_t i = 0; i < len_; ++i)
        v[static_cast<size_t>(i)] =
            F_.sub(v[static_cast<size_t>(i)], F_.mul(f, rows_[t][static_cast<size_t>(i)]));
    }
  }

  int64_t rank() const { return static_cast<int64_t>(rows_.size()); }

private:
  int64_t leadOf(const std::vector<FElem>& v) const {
    for (int64_t i = 0; i < len_; ++i)
      if (!F_.isZero(v[static_cast<size_t>(i)])) return i;
    return -1;
  }
  Field F_;
  int64_t len_;
  std::vector<std::vector<FElem>> rows_;
  std::vector<int64_t> leads_;
};

// Kernel of L_n in the compact form passed between iterations: free
// column f is e_{freeIds[f]} - sum_t coeffs[f][t] e_{pivotIds[t]}, and
// the trailing extraUnits columns are the unit vectors at
// unitBase, unitBase+1, ... coming from the pure-quadratic generators.
struct FactoredKernel {
  std::vector<int64_t> pivotIds;
  std::vector<int64_t> freeIds;
  std::vector<std::vector<int32_t>> coeffs;
  int64_t unitBase = 0;
  int64_t extraUnits = 0;
  int64_t count() const { return static_cast<int64_t>(freeIds.size()) + extraUnits; }
};

}  // namespace

TruncSeries Resolution::poincare() const {
  std::vector<int64_t> c;
  for (int n = 0; n <= depth; ++n) c.push_back(betti(n));
  return TruncSeries(std::move(c));
}

Resolution resolve(const FiniteModule& m, const ResolveOptions& opt) {
  const ShortAlgebra& A = m.algebra();
  const Field& F = A.field();
  if (F.deg() != 1)
    throw ContractViolation("resolve: resolutions are computed over the prime field");
  const int64_t e = A.e(), r = A.r();
  const int64_t p = F.p();

  Resolution res{m, filtration(m), Mat(), {}, 0, false, Mat(), false};
  res.steps.assign(1, ResolutionStep{});

  // ---- step 0: minimal cover ----------------------------------------------
  const int64_t beta0 = res.filt.h.h0;
  Mat gens(F, m.dim(), beta0);
  for (int64_t i = 0; i < m.dim(); ++i)
    for (int64_t j = 0; j < beta0; ++j) gens.set(i, j, res.filt.basis.at(i, j));
  res.coverGens = gens;
  res.steps[0].beta = beta0;
  res.steps[0].dimOmega = m.dim();
  if (opt.depth == 0 || beta0 == 0) return res;

  // Kernel of m R^{beta0} -> M; columns flat i*e+j (x-part), then
  // beta0*e + i*r+h (z-part).
  Mat Acover(F, m.dim(), beta0 * (e + r));
  for (int64_t i = 0; i < beta0; ++i) {
    for (int64_t j = 0; j < e; ++j) {
      Mat col = m.rho(j) * gens.column(i);
      for (int64_t t = 0; t < m.dim(); ++t) Acover.set(t, i * e + j, col.at(t, 0));
    }
    for (int64_t h = 0; h < r; ++h) {
      Mat col = m.sigma(h) * gens.column(i);
      for (int64_t t = 0; t < m.dim(); ++t) Acover.set(t, beta0 * e + i * r + h, col.at(t, 0));
    }
  }
  Mat K0 = kernel(Acover);
  const int64_t dimOmega1 = K0.cols();

  // x_l . u for kernel vectors u lands in the z-block; build the
  // m Omega_1 echelon and run the greedy generator pick against it.
  auto imageOf = [&](int64_t c0, int64_t l, std::vector<FElem>& img) {
    std::fill(img.begin(), img.end(), F.zero());
    for (int64_t i = 0; i < beta0; ++i)
      for (int64_t j = 0; j < e; ++j) {
        FElem y = K0.at(i * e + j, c0);
        if (F.isZero(y)) continue;
        for (int64_t h = 0; h < r; ++h) {
          FElem cv = A.c(l, j, h);
          if (F.isZero(cv)) continue;
          size_t at = static_cast<size_t>(beta0 * e + i * r + h);
          img[at] = F.add(img[at], F.mul(y, cv));
        }
      }
  };

  Echelon picker(F, beta0 * (e + r));
  {
    std::vector<FElem> img(static_cast<size_t>(beta0 * (e + r)), F.zero());
    for (int64_t c0 = 0; c0 < dimOmega1; ++c0)
      for (int64_t l = 0; l < e; ++l) {
        imageOf(c0, l, img);
        std::vector<FElem> v = img;
        picker.insert(v);
      }
  }
  const int64_t rho1 = picker.rank();

  std::vector<int64_t> chosen;
  for (int64_t c0 = 0; c0 < dimOmega1; ++c0) {
    std::vector<FElem> u(static_cast<size_t>(beta0 * (e + r)));
    for (int64_t t = 0; t < beta0 * (e + r); ++t) u[static_cast<size_t>(t)] = K0.at(t, c0);
    if (picker.insert(u)) chosen.push_back(c0);
  }

  std::vector<int64_t> kGens, wGens;
  for (auto c0 : chosen) {
    bool linear = false;
    for (int64_t t = 0; t < beta0 * e && !linear; ++t) linear = !F.isZero(K0.at(t, c0));
    (linear ? kGens : wGens).push_back(c0);
  }
  const int64_t beta1 = static_cast<int64_t>(chosen.size());
  if (beta1 != dimOmega1 - rho1) throw ContractViolation("resolve: step-0 bookkeeping broken");

  {
    ResolutionStep s1;
    s1.beta = beta1;
    s1.kCount = static_cast<int64_t>(kGens.size());
    s1.wCount = static_cast<int64_t>(wGens.size());
    s1.rho = rho1;
    s1.dimOmega = dimOmega1;
    // Step-1 matrices are the working data of the next iteration; they
    // are always materialized (module-scale memory).
    Mat lam(F, beta0 * e, beta1), qd(F, beta0 * r, beta1);
    for (int64_t g2 = 0; g2 < beta1; ++g2) {
      int64_t c0 = g2 < s1.kCount ? kGens[static_cast<size_t>(g2)]
                                  : wGens[static_cast<size_t>(g2 - s1.kCount)];
      for (int64_t t = 0; t < beta0 * e; ++t) lam.set(t, g2, K0.at(t, c0));
      for (int64_t t = 0; t < beta0 * r; ++t) qd.set(t, g2, K0.at(beta0 * e + t, c0));
    }
    s1.lambdaRank = lam.cols() == 0 ? 0 : rank(lam);
    s1.lambda = std::move(lam);
    s1.quad = std::move(qd);
    s1.hasMatrices = true;
    res.omega1Basis = K0;
    res.omega1Kept = true;
    res.steps.push_back(std::move(s1));
  }
  res.depth = 1;

  // F_{n} lambda columns for the running iteration: dense for n == 1,
  // factored kernel from the previous iteration for n >= 2.
  FactoredKernel prevKernel;

  auto lambdaColumnSupport = [&](int n, int64_t b,
                                 std::vector<std::pair<int64_t, int32_t>>& out) {
    out.clear();
    if (n == 1) {
      const Mat& lam = res.steps[1].lambda;
      for (int64_t t = 0; t < lam.rows(); ++t) {
        FElem v = lam.at(t, b);
        if (!F.isZero(v)) out.push_back({t, v.c[0]});
      }
      return;
    }
    if (b < static_cast<int64_t>(prevKernel.freeIds.size())) {
      const auto& co = prevKernel.coeffs[static_cast<size_t>(b)];
      for (size_t t = 0; t < co.size(); ++t)
        if (co[t] != 0)
          out.push_back({prevKernel.pivotIds[t], static_cast<int32_t>(p - co[t])});
      out.push_back({prevKernel.freeIds[static_cast<size_t>(b)], 1});
      return;
    }
    int64_t u = b - static_cast<int64_t>(prevKernel.freeIds.size());
    out.push_back({prevKernel.unitBase + u, 1});
  };

  // ---- iterations ----------------------------------------------------------
  for (int n = 1; n <= opt.depth; ++n) {
    ResolutionStep& st = res.steps[static_cast<size_t>(n)];
    const int64_t betaPrev = res.steps[static_cast<size_t>(n - 1)].beta;
    const int64_t rows = betaPrev * r;
    const bool lastIteration = (n == opt.depth);

    StreamRref::Options sopt;
    sopt.wantKernel = !lastIteration;
    sopt.stopWhenRowsSaturated = lastIteration;
    StreamRref stream(F, rows, sopt);

    std::vector<int32_t> colBuf(static_cast<size_t>(std::max<int64_t>(rows, 1)));
    std::vector<std::pair<int64_t, int32_t>> support;
    for (int64_t b = 0; b < st.kCount; ++b) {
      lambdaColumnSupport(n, b, support);
      for (int64_t j = 0; j < e; ++j) {
        std::fill(colBuf.begin(), colBuf.begin() + std::max<int64_t>(rows, 1), 0);
        for (auto& [flat, val] : support) {
          int64_t a = flat / e, i = flat % e;
          for (int64_t h = 0; h < r; ++h) {
            FElem cv = A.c(j, i, h);
            if (F.isZero(cv)) continue;
            int64_t at = a * r + h;
            colBuf[static_cast<size_t>(at)] = static_cast<int32_t>(
                (colBuf[static_cast<size_t>(at)] + int64_t(val) * cv.c[0]) % p);
          }
        }
        stream.addColumn(colBuf.data());
      }
    }
    stream.finish();
    st.rho = stream.rank();

    if (n >= 2) {
      // Pure-quadratic generators: complement of m Omega_n = col(L_n)
      // inside m^2 F_{n-1}. Saturation means none.
      std::vector<int64_t> wUnitRows;
      if (st.rho < rows) {
        Mat E = stream.columnSpaceBasis();
        auto rr = rref(E.hstack(Mat::identity(F, rows)));
        for (auto c : rr.pivotCols)
          if (c >= E.cols()) wUnitRows.push_back(c - E.cols());
      }
      st.wCount = static_cast<int64_t>(wUnitRows.size());
      st.beta = st.kCount + st.wCount;
      st.lambdaRank = st.kCount;  // kernel-basis columns are independent
      if (st.dimOmega != st.beta + st.rho)
        throw ContractViolation("resolve: beta bookkeeping violated");
      bool keep = opt.keepMatrices == 1 ||
                  (opt.keepMatrices == -1 && betaPrev * (e + r) * st.beta <= (int64_t(1) << 23));
      if (keep) {
        Mat lam(F, betaPrev * e, st.beta), qd(F, betaPrev * r, st.beta);
        for (int64_t b = 0; b < st.kCount; ++b) {
          lambdaColumnSupport(n, b, support);
          for (auto& [flat, val] : support) lam.setInt(flat, b, val);
        }
        for (int64_t w = 0; w < st.wCount; ++w)
          qd.setInt(wUnitRows[static_cast<size_t>(w)], st.kCount + w, 1);
        st.lambda = std::move(lam);
        st.quad = std::move(qd);
        st.hasMatrices = true;
      }
    } else {
      if (st.beta != st.dimOmega - st.rho)
        throw ContractViolation("resolve: step-1 rank bookkeeping violated");
    }

    res.depth = n;
    if (lastIteration) break;

    FactoredKernel nk;
    nk.pivotIds = stream.pivotColumnIds();
    nk.freeIds = stream.freeColumnIds();
    nk.coeffs.reserve(nk.freeIds.size());
    for (int64_t k = 0; k < static_cast<int64_t>(nk.freeIds.size()); ++k)
      nk.coeffs.push_back(stream.freeCoeffs(k));
    nk.unitBase = st.kCount * e;
    nk.extraUnits = st.wCount * e;

    ResolutionStep next;
    next.kCount = nk.count();
    next.dimOmega = next.kCount + st.beta * r;
    if (next.kCount > opt.columnBudget) {
      res.truncated = true;
      break;
    }
    prevKernel = std::move(nk);
    res.steps.push_back(std::move(next));
  }

  return res;
}

// ---------------------------------------------------------------------------

std::pair<int64_t, FiniteModule> minimalCover(const FiniteModule& m) {
  ResolveOptions opt;
  opt.depth = 1;
  opt.keepMatrices = 1;
  Resolution res = resolve(m, opt);
  return {res.betti(0), syzygy(res, 1)};
}

FiniteModule syzygy(const Resolution& res, int n) {
  if (n < 0) throw ContractViolation("syzygy: n >= 0 required");
  if (n == 0) return res.module;
  if (n > res.depth) throw ContractViolation("syzygy: resolution too shallow");
  const ShortAlgebra& A = res.module.algebra();
  const Field& F = A.field();
  const int64_t e = A.e(), r = A.r();

  if (n == 1) {
    if (!res.omega1Kept) throw ContractViolation("syzygy: omega1 basis not kept");
    const Mat& K0 = res.omega1Basis;
    const int64_t beta0 = res.betti(0);
    const int64_t d = K0.cols();
    Mat images(F, beta0 * (e + r), d * e);
    for (int64_t c0 = 0; c0 < d; ++c0)
      for (int64_t l = 0; l < e; ++l)
        for (int64_t i = 0; i < beta0; ++i)
          for (int64_t j = 0; j < e; ++j) {
            FElem y = K0.at(i * e + j, c0);
            if (F.isZero(y)) continue;
            for (int64_t h = 0; h < r; ++h) {
              FElem cv = A.c(l, j, h);
              if (F.isZero(cv)) continue;
              int64_t row = beta0 * e + i * r + h;
              images.set(row, c0 * e + l, F.add(images.at(row, c0 * e + l), F.mul(y, cv)));
            }
          }
    auto coords = solve(K0, images);
    if (!coords) throw ContractViolation("syzygy: omega1 action failed to close");
    std::vector<Mat> act;
    for (int64_t l = 0; l < e; ++l) {
      Mat rl(F, d, d);
      for (int64_t c0 = 0; c0 < d; ++c0)
        for (int64_t t = 0; t < d; ++t) rl.set(t, c0, coords->at(t, c0 * e + l));
      act.push_back(std::move(rl));
    }
    return FiniteModule(A, d, std::move(act));
  }

  const ResolutionStep& st = res.steps[static_cast<size_t>(n)];
  if (!st.hasMatrices) throw ContractViolation("syzygy: differential matrices not kept");
  const int64_t betaPrev = res.betti(n - 1);
  const int64_t kc = st.kCount;
  const int64_t dim = kc + betaPrev * r;
  // Basis [lambda-generators | standard z-vectors]: the action maps the
  // lambda block into the z-block and kills the z-block.
  std::vector<Mat> act;
  for (int64_t l = 0; l < e; ++l) {
    Mat rl(F, dim, dim);
    for (int64_t b = 0; b < kc; ++b)
      for (int64_t a = 0; a < betaPrev; ++a)
        for (int64_t i = 0; i < e; ++i) {
          FElem y = st.lambda.at(a * e + i, b);
          if (F.isZero(y)) continue;
          for (int64_t h = 0; h < r; ++h) {
            FElem cv = A.c(l, i, h);
            if (F.isZero(cv)) continue;
            int64_t row = kc + a * r + h;
            rl.set(row, b, F.add(rl.at(row, b), F.mul(y, cv)));
          }
        }
    act.push_back(std::move(rl));
  }
  return FiniteModule(A, dim, std::move(act));
}

FiniteModule syzygy(const FiniteModule& m, int n) {
  if (n == 0) return m;
  ResolveOptions opt;
  opt.depth = std::max(n, 1);
  opt.keepMatrices = 1;
  opt.columnBudget = int64_t(1) << 40;
  return syzygy(resolve(m, opt), n);
}

FiniteModule negativeSyzygy(const ShortAlgebra& a, int i) {
  if (!isGorenstein(a)) throw ContractViolation("negativeSyzygy: algebra is not Gorenstein");
  if (i < 1) throw ContractViolation("negativeSyzygy: i >= 1 required");
  FiniteModule omega = syzygy(residueField(a), i);
  return homModule(omega, regularModule(a));
}

TruncSeries poincareTruncated(const FiniteModule& m, int depth, int64_t budget) {
  ResolveOptions opt;
  opt.depth = depth;
  opt.columnBudget = budget;
  opt.keepMatrices = 0;
  Resolution res = resolve(m, opt);
  return res.poincare().truncated(res.depth);
}

Mat materializeL(const Resolution& res, int n) {
  const ResolutionStep& st = res.steps[static_cast<size_t>(n)];
  if (!st.hasMatrices) throw ContractViolation("materializeL: matrices not kept");
  const ShortAlgebra& A = res.module.algebra();
  const Field& F = A.field();
  const int64_t e = A.e(), r = A.r();
  const int64_t betaPrev = res.betti(n - 1);
  Mat L(F, betaPrev * r, st.beta * e);
  for (int64_t b = 0; b < st.beta; ++b)
    for (int64_t j = 0; j < e; ++j)
      for (int64_t a = 0; a < betaPrev; ++a)
        for (int64_t h = 0; h < r; ++h) {
          FElem acc = F.zero();
          for (int64_t i = 0; i < e; ++i)
            acc = F.add(acc, F.mul(A.c(j, i, h), st.lambda.at(a * e + i, b)));
          if (!F.isZero(acc)) L.set(a * r + h, b * e + j, acc);
        }
  return L;
}

Mat expandDifferential(const Resolution& res, int n) {
  const ResolutionStep& st = res.steps[static_cast<size_t>(n)];
  if (!st.hasMatrices) throw ContractViolation("expandDifferential: matrices not kept");
  const ShortAlgebra& A = res.module.algebra();
  const Field& F = A.field();
  const int64_t e = A.e(), r = A.r(), d = A.dim();
  const int64_t betaPrev = res.betti(n - 1);
  Mat out(F, betaPrev * d, st.beta * d);
  for (int64_t b = 0; b < st.beta; ++b) {
    for (int64_t a = 0; a < betaPrev; ++a) {
      for (int64_t i = 0; i < e; ++i) {
        FElem v = st.lambda.at(a * e + i, b);
        if (!F.isZero(v)) out.set(a * d + 1 + i, b * d, v);
      }
      for (int64_t h = 0; h < r; ++h) {
        FElem v = st.quad.at(a * r + h, b);
        if (!F.isZero(v)) out.set(a * d + 1 + e + h, b * d, v);
      }
    }
    for (int64_t j = 0; j < e; ++j)
      for (int64_t a = 0; a < betaPrev; ++a)
        for (int64_t i = 0; i < e; ++i) {
          FElem v = st.lambda.at(a * e + i, b);
          if (F.isZero(v)) continue;
          for (int64_t h = 0; h < r; ++h) {
            FElem cv = A.c(j, i, h);
            if (F.isZero(cv)) continue;
            int64_t row = a * d + 1 + e + h;
            int64_t col = b * d + 1 + j;
            out.set(row, col, F.add(out.at(row, col), F.mul(v, cv)));
          }
        }
    // z_h d(b) = 0: those columns stay zero.
  }
  return out;
}

Mat expandCover(const Resolution& res) {
  const FiniteModule& m = res.module;
  const ShortAlgebra& A = m.algebra();
  const Field& F = A.field();
  const int64_t e = A.e(), r = A.r(), d = A.dim();
  const int64_t beta0 = res.betti(0);
  Mat out(F, m.dim(), beta0 * d);
  for (int64_t i = 0; i < beta0; ++i) {
    Mat v = res.coverGens.column(i);
    for (int64_t t = 0; t < m.dim(); ++t) out.set(t, i * d, v.at(t, 0));
    for (int64_t j = 0; j < e; ++j) {
      Mat xv = m.rho(j) * v;
      for (int64_t t = 0; t < m.dim(); ++t) out.set(t, i * d + 1 + j, xv.at(t, 0));
    }
    for (int64_t h = 0; h < r; ++h) {
      Mat zv = m.sigma(h) * v;
      for (int64_t t = 0; t < m.dim(); ++t) out.set(t, i * d + 1 + e + h, zv.at(t, 0));
    }
  }
  return out;
}

}  // namespace shortres
