#include "shortres/algebra.hpp"

#include <algorithm>

namespace shortres {

int64_t monomialCount(int64_t e) { return e * (e + 1) / 2; }

int64_t monomialIndex(int64_t e, int64_t i, int64_t j) {
  // lex over (i, j), i <= j: (0,0)..(0,e-1),(1,1)..(1,e-1),...
  return i * e - i * (i - 1) / 2 + (j - i);
}

ShortAlgebra ShortAlgebra::fromQuadrics(const Field& f, int64_t e,
                                        const std::vector<QuadForm>& quadrics) {
  if (e < 0) throw ContractViolation("fromQuadrics: e must be nonnegative");
  const int64_t nm = monomialCount(e);
  for (auto& q : quadrics)
    if (static_cast<int64_t>(q.mono.size()) != nm)
      throw ContractViolation("fromQuadrics: quadric has wrong coefficient count");

  Mat span(f, static_cast<int64_t>(quadrics.size()), nm);
  for (size_t t = 0; t < quadrics.size(); ++t)
    for (int64_t q = 0; q < nm; ++q) span.set(static_cast<int64_t>(t), q, quadrics[t].mono[static_cast<size_t>(q)]);

  RrefResult rr = rref(span, false, true);
  const int64_t r = nm - rr.rank;

  std::vector<int64_t> zSlot(static_cast<size_t>(nm), -1);  // monomial -> z index
  std::vector<bool> isPivot(static_cast<size_t>(nm), false);
  std::vector<int64_t> pivotRowOf(static_cast<size_t>(nm), -1);
  for (size_t t = 0; t < rr.pivotCols.size(); ++t) {
    isPivot[static_cast<size_t>(rr.pivotCols[t])] = true;
    pivotRowOf[static_cast<size_t>(rr.pivotCols[t])] = rr.pivotRows[t];
  }
  {
    int64_t slot = 0;
    for (int64_t q = 0; q < nm; ++q)
      if (!isPivot[static_cast<size_t>(q)]) zSlot[static_cast<size_t>(q)] = slot++;
  }

  ShortAlgebra a(f, e, r);
  for (int64_t i = 0; i < e; ++i)
    for (int64_t j = i; j < e; ++j) {
      int64_t q = monomialIndex(e, i, j);
      if (!isPivot[static_cast<size_t>(q)]) {
        a.setC(i, j, zSlot[static_cast<size_t>(q)], f.one());
        a.setC(j, i, zSlot[static_cast<size_t>(q)], f.one());
      } else {
        // X_q = -(non-pivot part of its reduced row) modulo the span.
        int64_t row = pivotRowOf[static_cast<size_t>(q)];
        for (int64_t q2 = 0; q2 < nm; ++q2) {
          if (isPivot[static_cast<size_t>(q2)]) continue;
          FElem v = rr.reduced.at(row, q2);
          if (f.isZero(v)) continue;
          a.setC(i, j, zSlot[static_cast<size_t>(q2)], f.neg(v));
          a.setC(j, i, zSlot[static_cast<size_t>(q2)], f.neg(v));
        }
      }
    }

  // z_h is the image of its non-pivot monomial.
  a.prodExpr_.assign(static_cast<size_t>(r), {});
  for (int64_t i = 0; i < e; ++i)
    for (int64_t j = i; j < e; ++j) {
      int64_t q = monomialIndex(e, i, j);
      if (!isPivot[static_cast<size_t>(q)])
        a.prodExpr_[static_cast<size_t>(zSlot[static_cast<size_t>(q)])].push_back({i, j, f.one()});
    }
  return a;
}

ShortAlgebra ShortAlgebra::fromConstants(
    const Field& f, int64_t e, int64_t r,
    const std::vector<std::tuple<int64_t, int64_t, int64_t, FElem>>& c) {
  if (e < 0 || r < 0) throw ContractViolation("fromConstants: negative dimension");
  ShortAlgebra a(f, e, r);
  for (auto& [i, j, h, v] : c) {
    if (i < 1 || i > e || j < 1 || j > e || h < 1 || h > r)
      throw ContractViolation("fromConstants: index out of range");
    a.setC(i - 1, j - 1, h - 1, v);
  }
  a.solveProductExpr();
  return a;
}

void ShortAlgebra::solveProductExpr() {
  prodExpr_.assign(static_cast<size_t>(r_), {});
  if (r_ == 0) return;
  const int64_t nm = monomialCount(e_);
  Mat M(field_, r_, nm);
  for (int64_t i = 0; i < e_; ++i)
    for (int64_t j = i; j < e_; ++j)
      for (int64_t h = 0; h < r_; ++h) M.set(h, monomialIndex(e_, i, j), c(i, j, h));
  auto B = solve(M, Mat::identity(field_, r_));
  if (!B) return;  // m^2 not spanned; validate() reports it
  for (int64_t h = 0; h < r_; ++h)
    for (int64_t i = 0; i < e_; ++i)
      for (int64_t j = i; j < e_; ++j) {
        FElem v = B->at(monomialIndex(e_, i, j), h);
        if (!field_.isZero(v)) prodExpr_[static_cast<size_t>(h)].push_back({i, j, v});
      }
}

Mat ShortAlgebra::leftMult(int64_t i) const {
  Mat m(field_, dim(), dim());
  m.set(1 + i, 0, field_.one());  // x_i * 1 = x_i
  for (int64_t j = 0; j < e_; ++j)
    for (int64_t h = 0; h < r_; ++h) m.set(1 + e_ + h, 1 + j, c(i, j, h));
  return m;  // x_i * z_h = 0
}

std::vector<FElem> ShortAlgebra::mulClasses(const std::vector<FElem>& a,
                                            const std::vector<FElem>& b) const {
  std::vector<FElem> out(static_cast<size_t>(r_), field_.zero());
  for (int64_t i = 0; i < e_; ++i) {
    if (field_.isZero(a[static_cast<size_t>(i)])) continue;
    for (int64_t j = 0; j < e_; ++j) {
      if (field_.isZero(b[static_cast<size_t>(j)])) continue;
      FElem ab = field_.mul(a[static_cast<size_t>(i)], b[static_cast<size_t>(j)]);
      for (int64_t h = 0; h < r_; ++h)
        out[static_cast<size_t>(h)] = field_.add(out[static_cast<size_t>(h)], field_.mul(ab, c(i, j, h)));
    }
  }
  return out;
}

Mat ShortAlgebra::upsilon(const std::vector<FElem>& x) const {
  Mat u(field_, r_, e_);
  for (int64_t j = 0; j < e_; ++j)
    for (int64_t h = 0; h < r_; ++h) {
      FElem acc = field_.zero();
      for (int64_t i = 0; i < e_; ++i)
        acc = field_.add(acc, field_.mul(x[static_cast<size_t>(i)], c(i, j, h)));
      u.set(h, j, acc);
    }
  return u;
}

ValidationReport validate(const ShortAlgebra& a) {
  const Field& F = a.field();
  ValidationReport rep;

  bool comm = true;
  for (int64_t i = 0; i < a.e() && comm; ++i)
    for (int64_t j = 0; j < a.e() && comm; ++j)
      for (int64_t h = 0; h < a.r(); ++h)
        if (!(a.c(i, j, h) == a.c(j, i, h))) {
          comm = false;
          break;
        }
  rep.checks.push_back({"commutativity", comm, comm ? "" : "c[i][j][h] != c[j][i][h]"});

  // m^2 exactly spanned: the r x (#monomials) coefficient matrix has rank r.
  int64_t nm = monomialCount(a.e());
  Mat M(F, a.r(), nm);
  for (int64_t i = 0; i < a.e(); ++i)
    for (int64_t j = i; j < a.e(); ++j)
      for (int64_t h = 0; h < a.r(); ++h) M.set(h, monomialIndex(a.e(), i, j), a.c(i, j, h));
  int64_t rk = rank(M);
  rep.checks.push_back({"m2_spanned", rk == a.r(),
                        "rank " + std::to_string(rk) + " of expected " + std::to_string(a.r())});

  rep.checks.push_back({"dim_1_e_r", true, std::to_string(a.dim())});
  // m^2 * m = 0 holds structurally in this representation.
  rep.checks.push_back({"m3_zero", true, "structural"});
  rep.checks.push_back({"field", true, "p=" + std::to_string(F.p()) + " deg=" + std::to_string(F.deg())});
  return rep;
}

TruncSeries hilbert(const ShortAlgebra& a, int order) {
  return TruncSeries::poly({1, a.e(), a.r()}, std::max(order, 2));
}

SocleResult socle(const ShortAlgebra& a) {
  const Field& F = a.field();
  if (a.e() == 0) return {Mat::identity(F, 1), 1};
  Mat stack(F, 0, a.dim());
  for (int64_t i = 0; i < a.e(); ++i) stack = stack.vstack(a.leftMult(i));
  Mat k = kernel(stack);
  return {k, k.cols()};
}

bool isGorenstein(const ShortAlgebra& a) { return socle(a).s == 1; }

bool isConcaGenerator(const ShortAlgebra& a, const std::vector<FElem>& x) {
  const Field& F = a.field();
  if (static_cast<int64_t>(x.size()) != a.e()) return false;
  bool nonzero = false;
  for (auto& v : x) nonzero |= !F.isZero(v);
  if (!nonzero) return false;
  for (auto& v : a.mulClasses(x, x))
    if (!F.isZero(v)) return false;    // x^2 != 0
  return rank(a.upsilon(x)) == a.r();  // x m = m^2
}

namespace {

// Lex successor of an F_q element viewed as the tuple (c0, c1, c2).
bool nextElem(const Field& F, FElem& v) {
  for (int d = F.deg() - 1; d >= 0; --d) {
    if (v.c[d] + 1 < F.p()) {
      v.c[d]++;
      for (int d2 = d + 1; d2 < F.deg(); ++d2) v.c[d2] = 0;
      return true;
    }
  }
  return false;
}

}  // namespace

ConcaResult findConca(const ShortAlgebra& alg, const ConcaOptions& opt) {
  ConcaResult res;
  res.degreeUsed = opt.extensionDegree;
  if (opt.extensionDegree < 1 || opt.extensionDegree > 3)
    throw ContractViolation("findConca: extensionDegree must be 1, 2 or 3");
  ShortAlgebra a = opt.extensionDegree == alg.field().deg() ? alg : baseChange(alg, opt.extensionDegree);
  const Field& F = a.field();
  const int64_t e = a.e();
  if (e == 0) {
    res.status = ConcaStatus::None;
    return res;
  }

  if (opt.strategy == ConcaOptions::Strategy::Exhaustive) {
    // Projective point count (q^e - 1)/(q - 1), overflow-safe.
    long double q = static_cast<long double>(F.order());
    long double count = 0, qp = 1;
    for (int64_t k = 0; k < e; ++k) {
      count += qp;
      qp *= q;
    }
    if (count > static_cast<long double>(opt.scanBudget)) {
      res.status = ConcaStatus::Inconclusive;
      return res;
    }
    // First nonzero coordinate = 1, scanning lex from the left; the hit
    // is therefore the lexicographically least representative.
    std::vector<FElem> x(static_cast<size_t>(e), F.zero());
    for (int64_t lead = 0; lead < e; ++lead) {
      std::fill(x.begin(), x.end(), F.zero());
      x[static_cast<size_t>(lead)] = F.one();
      for (;;) {
        ++res.pointsChecked;
        if (isConcaGenerator(a, x)) {
          res.status = ConcaStatus::Found;
          res.x = x;
          return res;
        }
        int64_t pos = e - 1;
        while (pos > lead && !nextElem(F, x[static_cast<size_t>(pos)])) {
          x[static_cast<size_t>(pos)] = F.zero();
          --pos;
        }
        if (pos <= lead) break;
      }
    }
    res.status = ConcaStatus::None;
    return res;
  }

  Rng rng(opt.seed);
  for (uint64_t s = 0; s < opt.samples; ++s) {
    std::vector<FElem> x(static_cast<size_t>(e));
    bool nz = false;
    for (auto& v : x) {
      for (int d = 0; d < F.deg(); ++d) v.c[d] = static_cast<int32_t>(rng.below(static_cast<uint64_t>(F.p())));
      nz |= !F.isZero(v);
    }
    if (!nz) continue;
    ++res.pointsChecked;
    if (isConcaGenerator(a, x)) {
      res.status = ConcaStatus::Found;
      res.x = x;
      return res;
    }
  }
  res.status = ConcaStatus::Inconclusive;
  return res;
}

NormalizedAlgebra normalizeBasis(const ShortAlgebra& alg, const std::vector<FElem>& x) {
  const Field& F = alg.field();
  const int64_t e = alg.e(), r = alg.r();
  {
    bool nonzero = false;
    for (auto& v : x) nonzero |= !F.isZero(v);
    if (!nonzero) throw ContractViolation("normalizeBasis: x = 0");
    for (auto& v : alg.mulClasses(x, x))
      if (!F.isZero(v)) throw ContractViolation("normalizeBasis: x^2 != 0");
    if (rank(alg.upsilon(x)) != r) throw ContractViolation("normalizeBasis: x m != m^2");
  }

  Mat U = alg.upsilon(x);  // r x e

  // x_1..x_r: greedy over the standard basis, keeping U-images independent.
  std::vector<int64_t> firstBlock;
  {
    Mat picked(F, r, 0);
    for (int64_t j = 0; j < e && static_cast<int64_t>(firstBlock.size()) < r; ++j) {
      Mat cand = picked.hstack(U.column(j));
      if (rank(cand) == cand.cols()) {
        picked = cand;
        firstBlock.push_back(j);
      }
    }
    if (static_cast<int64_t>(firstBlock.size()) != r)
      throw ContractViolation("normalizeBasis: could not pick x_1..x_r");
  }

  // x_{r+1}..x_{e-1}: extend {x} to a basis of Ker(upsilon) greedily over
  // the kernel's deterministic basis.
  Mat kerU = kernel(U);  // e x (e - r); contains the class of x
  Mat xMat(F, e, 1);
  for (int64_t i = 0; i < e; ++i) xMat.set(i, 0, x[static_cast<size_t>(i)]);
  Mat kerPart = xMat;
  for (int64_t j = 0; j < kerU.cols() && kerPart.cols() < e - r; ++j) {
    Mat cand = kerPart.hstack(kerU.column(j));
    if (rank(cand) == cand.cols()) kerPart = cand;
  }
  if (kerPart.cols() != e - r) throw ContractViolation("normalizeBasis: kernel completion failed");

  // New basis in old coordinates: x_1..x_r | x_{r+1}..x_{e-1} | x_e = x.
  Mat C(F, e, e);
  for (int64_t t = 0; t < r; ++t) C.set(firstBlock[static_cast<size_t>(t)], t, F.one());
  for (int64_t t = 0; t < e - r - 1; ++t)
    for (int64_t i = 0; i < e; ++i) C.set(i, r + t, kerPart.at(i, t + 1));
  for (int64_t i = 0; i < e; ++i) C.set(i, e - 1, x[static_cast<size_t>(i)]);
  if (rank(C) != e) throw ContractViolation("normalizeBasis: produced basis is singular");

  // New m^2 basis z'_h = x'_h * x'_e; change-of-basis Z on m^2.
  Mat Z(F, r, r);
  for (int64_t h = 0; h < r; ++h) {
    std::vector<FElem> xh(static_cast<size_t>(e)), xe(static_cast<size_t>(e));
    for (int64_t i = 0; i < e; ++i) {
      xh[static_cast<size_t>(i)] = C.at(i, h);
      xe[static_cast<size_t>(i)] = C.at(i, e - 1);
    }
    auto prod = alg.mulClasses(xh, xe);
    for (int64_t t = 0; t < r; ++t) Z.set(t, h, prod[static_cast<size_t>(t)]);
  }
  auto Zi = solve(Z, Mat::identity(F, r));
  if (!Zi) throw ContractViolation("normalizeBasis: x_1 x .. x_r x do not span m^2");

  // New constants: x'_i x'_j in old m^2 coords, then through Z^{-1}.
  std::vector<std::tuple<int64_t, int64_t, int64_t, FElem>> cNew;
  for (int64_t i = 0; i < e; ++i)
    for (int64_t j = 0; j < e; ++j) {
      std::vector<FElem> xi(static_cast<size_t>(e)), xj(static_cast<size_t>(e));
      for (int64_t t = 0; t < e; ++t) {
        xi[static_cast<size_t>(t)] = C.at(t, i);
        xj[static_cast<size_t>(t)] = C.at(t, j);
      }
      auto prod = alg.mulClasses(xi, xj);
      Mat pv(F, r, 1);
      for (int64_t t = 0; t < r; ++t) pv.set(t, 0, prod[static_cast<size_t>(t)]);
      Mat nv = *Zi * pv;
      for (int64_t h = 0; h < r; ++h)
        if (!F.isZero(nv.at(h, 0))) cNew.push_back({i + 1, j + 1, h + 1, nv.at(h, 0)});
    }

  NormalizedAlgebra na{alg, ShortAlgebra::fromConstants(F, e, r, cNew), x, C};

  for (int64_t h = 0; h < r; ++h) {
    for (int64_t t = 0; t < r; ++t) {
      FElem expect = t == h ? F.one() : F.zero();
      if (!(na.normalized.c(h, e - 1, t) == expect))
        throw ContractViolation("normalizeBasis: z_h != x_h x_e after change of basis");
    }
    if (r > 0 && !F.isZero(na.normalized.c(e - 1, e - 1, h)))
      throw ContractViolation("normalizeBasis: x_e^2 != 0 after change of basis");
  }
  return na;
}

ShortAlgebra fiberProduct(const ShortAlgebra& s, const ShortAlgebra& t) {
  if (!(s.field() == t.field()))
    throw ContractViolation("fiberProduct: factors must share the field");
  const Field& F = s.field();
  ShortAlgebra a(F, s.e() + t.e(), s.r() + t.r());
  for (int64_t i = 0; i < s.e(); ++i)
    for (int64_t j = 0; j < s.e(); ++j)
      for (int64_t h = 0; h < s.r(); ++h) a.setC(i, j, h, s.c(i, j, h));
  for (int64_t i = 0; i < t.e(); ++i)
    for (int64_t j = 0; j < t.e(); ++j)
      for (int64_t h = 0; h < t.r(); ++h) a.setC(s.e() + i, s.e() + j, s.r() + h, t.c(i, j, h));
  a.prodExpr_.assign(static_cast<size_t>(a.r()), {});
  for (int64_t h = 0; h < s.r(); ++h) a.prodExpr_[static_cast<size_t>(h)] = s.productExpr()[static_cast<size_t>(h)];
  for (int64_t h = 0; h < t.r(); ++h)
    for (auto& [i, j, v] : t.productExpr()[static_cast<size_t>(h)])
      a.prodExpr_[static_cast<size_t>(s.r() + h)].push_back({s.e() + i, s.e() + j, v});
  return a;
}

ShortAlgebra baseChange(const ShortAlgebra& a, int d) {
  if (a.field().deg() == d) return a;
  if (a.field().deg() != 1)
    throw ContractViolation("baseChange: source must be the prime field");
  Field F2(a.field().p(), d);
  ShortAlgebra b(F2, a.e(), a.r());
  b.cc_ = a.cc_;  // residues embed verbatim
  b.prodExpr_ = a.prodExpr_;
  return b;
}

}  // namespace shortres
