#include "shortres/module.hpp"

#include <algorithm>

namespace shortres {

FiniteModule::FiniteModule(ShortAlgebra alg, int64_t dim, std::vector<Mat> action)
    : alg_(std::move(alg)), dim_(dim), action_(std::move(action)) {
  if (static_cast<int64_t>(action_.size()) != alg_.e())
    throw ContractViolation("FiniteModule: need one action matrix per generator");
  for (auto& a : action_)
    if (a.rows() != dim_ || a.cols() != dim_)
      throw ContractViolation("FiniteModule: action matrix shape mismatch");
  const Field& F = alg_.field();
  sigma_.reserve(static_cast<size_t>(alg_.r()));
  for (int64_t h = 0; h < alg_.r(); ++h) {
    Mat s(F, dim_, dim_);
    for (auto& [i, j, v] : alg_.productExpr()[static_cast<size_t>(h)])
      s = s + (action_[static_cast<size_t>(i)] * action_[static_cast<size_t>(j)]).scaled(v);
    sigma_.push_back(std::move(s));
  }
}

Mat FiniteModule::actionOf(const std::vector<FElem>& xCoords) const {
  Mat acc(alg_.field(), dim_, dim_);
  for (int64_t i = 0; i < alg_.e(); ++i)
    acc = acc + action_[static_cast<size_t>(i)].scaled(xCoords[static_cast<size_t>(i)]);
  return acc;
}

ValidationReport moduleValidate(const FiniteModule& m) {
  const ShortAlgebra& A = m.algebra();
  const Field& F = A.field();
  ValidationReport rep;

  bool comm = true;
  for (int64_t i = 0; i < A.e() && comm; ++i)
    for (int64_t j = i + 1; j < A.e() && comm; ++j)
      comm = (m.rho(i) * m.rho(j) == m.rho(j) * m.rho(i));
  rep.checks.push_back({"action_commutes", comm, ""});

  bool compat = true;
  for (int64_t i = 0; i < A.e() && compat; ++i)
    for (int64_t j = 0; j < A.e() && compat; ++j) {
      Mat want(F, m.dim(), m.dim());
      for (int64_t h = 0; h < A.r(); ++h) want = want + m.sigma(h).scaled(A.c(i, j, h));
      compat = (m.rho(i) * m.rho(j) == want);
    }
  rep.checks.push_back({"relations_hold", compat, compat ? "" : "rho_i rho_j != sum c sigma"});

  bool cube = true;
  for (int64_t i = 0; i < A.e() && cube; ++i)
    for (int64_t j = 0; j < A.e() && cube; ++j)
      for (int64_t l = 0; l < A.e() && cube; ++l)
        cube = (m.rho(i) * m.rho(j) * m.rho(l)).isZero();
  rep.checks.push_back({"m3_kills", cube, ""});
  return rep;
}

FiniteModule residueField(const ShortAlgebra& a) {
  std::vector<Mat> zero(static_cast<size_t>(a.e()), Mat(a.field(), 1, 1));
  return FiniteModule(a, 1, std::move(zero));
}

FiniteModule regularModule(const ShortAlgebra& a) {
  std::vector<Mat> act;
  for (int64_t i = 0; i < a.e(); ++i) act.push_back(a.leftMult(i));
  return FiniteModule(a, a.dim(), std::move(act));
}

namespace {

// Echelon-pivot basis of the union of the listed column spaces.
Mat columnSpaceUnion(const Field& F, int64_t dim, const std::vector<Mat>& mats) {
  Mat all(F, dim, 0);
  for (auto& m : mats) all = all.hstack(m);
  if (all.cols() == 0) return all;
  auto rr = rref(all);
  return all.columns(rr.pivotCols);
}

}  // namespace

HilbertFunction hilbertFunction(const FiniteModule& m) {
  const Field& F = m.algebra().field();
  std::vector<Mat> rhos, sigmas;
  for (int64_t i = 0; i < m.algebra().e(); ++i) rhos.push_back(m.rho(i));
  for (int64_t h = 0; h < m.algebra().r(); ++h) sigmas.push_back(m.sigma(h));
  int64_t mM = columnSpaceUnion(F, m.dim(), rhos).cols();
  int64_t m2M = columnSpaceUnion(F, m.dim(), sigmas).cols();
  return {m.dim() - mM, mM - m2M, m2M};
}

Filtration filtration(const FiniteModule& m) {
  const Field& F = m.algebra().field();
  std::vector<Mat> rhos, sigmas;
  for (int64_t i = 0; i < m.algebra().e(); ++i) rhos.push_back(m.rho(i));
  for (int64_t h = 0; h < m.algebra().r(); ++h) sigmas.push_back(m.sigma(h));
  Mat bM = columnSpaceUnion(F, m.dim(), rhos);    // basis of mM
  Mat b2 = columnSpaceUnion(F, m.dim(), sigmas);  // basis of m^2 M

  // mM-part extends b2 by bM columns; the generator part extends by the
  // standard basis. Pivot order keeps both choices deterministic.
  Mat ext = b2.hstack(bM).hstack(Mat::identity(F, m.dim()));
  auto rr = rref(ext);
  Mat b1(F, m.dim(), 0), b0(F, m.dim(), 0);
  for (auto c : rr.pivotCols) {
    if (c < b2.cols()) continue;
    if (c < b2.cols() + bM.cols())
      b1 = b1.hstack(ext.column(c));
    else
      b0 = b0.hstack(ext.column(c));
  }
  Filtration f;
  f.h = {b0.cols(), b1.cols(), b2.cols()};
  f.basis = b0.hstack(b1).hstack(b2);
  auto inv = solve(f.basis, Mat::identity(F, m.dim()));
  if (!inv) throw ContractViolation("filtration: basis not invertible");
  f.coords = *inv;
  return f;
}

FiniteModule homModule(const FiniteModule& m, const FiniteModule& n) {
  if (!(m.algebra() == n.algebra()))
    throw ContractViolation("homModule: modules over different algebras");
  const ShortAlgebra& A = m.algebra();
  const Field& F = A.field();
  const int64_t dm = m.dim(), dn = n.dim(), e = A.e();
  const int64_t nf = dm * dn;  // entries of f (dn x dm), vectorized b*dn+a

  Mat sys(F, e * nf, nf);
  for (int64_t i = 0; i < e; ++i) {
    const Mat& rn = n.rho(i);
    const Mat& rm = m.rho(i);
    for (int64_t a = 0; a < dn; ++a)
      for (int64_t b = 0; b < dm; ++b) {
        int64_t row = (i * nf) + b * dn + a;
        for (int64_t c = 0; c < dn; ++c) {
          FElem v = rn.at(a, c);
          if (!F.isZero(v)) {
            int64_t col = b * dn + c;
            sys.set(row, col, F.add(sys.at(row, col), v));
          }
        }
        for (int64_t c = 0; c < dm; ++c) {
          FElem v = rm.at(c, b);
          if (!F.isZero(v)) {
            int64_t col = c * dn + a;
            sys.set(row, col, F.sub(sys.at(row, col), v));
          }
        }
      }
  }
  Mat basis = kernel(sys);  // nf x t
  const int64_t t = basis.cols();

  // x_i . f = rho_i^N o f, expressed over the kernel basis.
  std::vector<Mat> act;
  for (int64_t i = 0; i < e; ++i) {
    Mat img(F, nf, t);
    const Mat& rn = n.rho(i);
    for (int64_t k = 0; k < t; ++k)
      for (int64_t b = 0; b < dm; ++b)
        for (int64_t a = 0; a < dn; ++a) {
          FElem acc = F.zero();
          for (int64_t c = 0; c < dn; ++c)
            acc = F.add(acc, F.mul(rn.at(a, c), basis.at(b * dn + c, k)));
          img.set(b * dn + a, k, acc);
        }
    auto coords = solve(basis, img);
    if (!coords) throw ContractViolation("homModule: action does not preserve Hom");
    act.push_back(*coords);
  }
  return FiniteModule(A, t, std::move(act));
}

FiniteModule directSum(const std::vector<FiniteModule>& ms) {
  if (ms.empty()) throw ContractViolation("directSum: empty list");
  const ShortAlgebra& A = ms[0].algebra();
  const Field& F = A.field();
  int64_t dim = 0;
  for (auto& m : ms) {
    if (!(m.algebra() == A)) throw ContractViolation("directSum: algebra mismatch");
    dim += m.dim();
  }
  std::vector<Mat> act;
  for (int64_t i = 0; i < A.e(); ++i) {
    Mat blk(F, dim, dim);
    int64_t off = 0;
    for (auto& m : ms) {
      for (int64_t a = 0; a < m.dim(); ++a)
        for (int64_t b = 0; b < m.dim(); ++b) blk.set(off + a, off + b, m.rho(i).at(a, b));
      off += m.dim();
    }
    act.push_back(std::move(blk));
  }
  return FiniteModule(A, dim, std::move(act));
}

FiniteModule quotientModule(const FiniteModule& m, const Mat& span) {
  const ShortAlgebra& A = m.algebra();
  const Field& F = A.field();
  // Close under the action; the m-adic filtration bounds this at three
  // rounds since m^3 = 0. Working with a pivot basis keeps the column
  // count equal to the rank, which the stability test relies on.
  Mat closed = columnSpaceUnion(F, m.dim(), {span});
  for (int round = 0; round < 3; ++round) {
    std::vector<Mat> parts{closed};
    for (int64_t i = 0; i < A.e(); ++i) parts.push_back(m.rho(i) * closed);
    Mat next = columnSpaceUnion(F, m.dim(), parts);
    if (next.cols() == closed.cols()) break;
    closed = next;
  }
  Mat ext = closed.hstack(Mat::identity(F, m.dim()));
  auto rr = rref(ext);
  Mat comp(F, m.dim(), 0);
  for (auto c : rr.pivotCols)
    if (c >= closed.cols()) comp = comp.hstack(ext.column(c));
  Mat T = closed.hstack(comp);
  auto Ti = solve(T, Mat::identity(F, m.dim()));
  if (!Ti) throw ContractViolation("quotientModule: basis completion failed");

  const int64_t q = comp.cols();
  std::vector<Mat> act;
  for (int64_t i = 0; i < A.e(); ++i) {
    Mat full = *Ti * (m.rho(i) * comp);  // coordinates in [closed | comp]
    Mat blk(F, q, q);
    for (int64_t a = 0; a < q; ++a)
      for (int64_t b = 0; b < q; ++b) blk.set(a, b, full.at(closed.cols() + a, b));
    act.push_back(std::move(blk));
  }
  return FiniteModule(A, q, std::move(act));
}

FiniteModule quotientOfFree(const ShortAlgebra& a, int64_t g, const Mat& relations) {
  const Field& F = a.field();
  const int64_t d = a.dim();
  if (relations.cols() > 0 && relations.rows() != g * d)
    throw ContractViolation("quotientOfFree: relation length must be g*(1+e+r)");
  for (int64_t k = 0; k < relations.cols(); ++k)
    for (int64_t i = 0; i < g; ++i)
      if (!F.isZero(relations.at(i * d, k)))
        throw ContractViolation("quotientOfFree: relations must lie in m R^g");
  return quotientModule(
      directSum(std::vector<FiniteModule>(static_cast<size_t>(g), regularModule(a))), relations);
}

FiniteModule randomModule(const ShortAlgebra& a, int64_t g, double relDensity, uint64_t seed) {
  if (g < 1) throw ContractViolation("randomModule: g >= 1 required");
  const Field& F = a.field();
  const int64_t d = a.dim();
  Rng rng(seed);
  const int64_t nRel = g * a.e();
  Mat rel(F, g * d, nRel);
  const uint64_t densityTicks = static_cast<uint64_t>(relDensity * 1e9);
  for (int64_t k = 0; k < nRel; ++k)
    for (int64_t i = 0; i < g; ++i)
      for (int64_t t = 1; t < d; ++t) {
        if (rng.below(1000000000ull) >= densityTicks) continue;
        rel.setInt(i * d + t, k, 1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(F.p() - 1))));
      }
  return quotientOfFree(a, g, rel);
}

FiniteModule annihilatedByModule(const ShortAlgebra& a, const std::vector<FElem>& x, int64_t g,
                                 uint64_t seed) {
  if (!isConcaGenerator(a, x))
    throw ContractViolation("annihilatedByModule: x is not a Conca generator");
  const Field& F = a.field();
  FiniteModule R = regularModule(a);
  Mat xR = columnSpaceUnion(F, R.dim(), {R.actionOf(x)});
  FiniteModule RmodX = quotientModule(R, xR);
  FiniteModule free = directSum(std::vector<FiniteModule>(static_cast<size_t>(g), RmodX));

  // Random relations inside m * (R/xR)^g as images of random vectors.
  Rng rng(seed);
  const int64_t nRel = g * a.e() / 2 + 1;
  Mat rel(F, free.dim(), nRel);
  for (int64_t k = 0; k < nRel; ++k) {
    Mat v(F, free.dim(), 1);
    for (int64_t t = 0; t < free.dim(); ++t)
      v.setInt(t, 0, static_cast<int64_t>(rng.below(static_cast<uint64_t>(F.p()))));
    int64_t i = static_cast<int64_t>(rng.below(static_cast<uint64_t>(a.e())));
    Mat w = free.rho(i) * v;
    for (int64_t t = 0; t < free.dim(); ++t) rel.set(t, k, w.at(t, 0));
  }
  FiniteModule M = quotientModule(free, rel);
  if (!M.actionOf(x).isZero())
    throw ContractViolation("annihilatedByModule: x does not annihilate the quotient");
  return M;
}

FiniteModule moduleInNormalBasis(const NormalizedAlgebra& na, const FiniteModule& m) {
  if (!(m.algebra() == na.original))
    throw ContractViolation("moduleInNormalBasis: module not over the original algebra");
  const Field& F = na.original.field();
  const int64_t e = na.original.e();
  std::vector<Mat> act;
  for (int64_t i = 0; i < e; ++i) {
    Mat acc(F, m.dim(), m.dim());
    for (int64_t t = 0; t < e; ++t) {
      FElem ct = na.basisChange.at(t, i);
      if (!F.isZero(ct)) acc = acc + m.rho(t).scaled(ct);
    }
    act.push_back(std::move(acc));
  }
  return FiniteModule(na.normalized, m.dim(), std::move(act));
}

}  // namespace shortres
