#pragma once

// Test-only oracle: syzygies computed the obvious way, with full expanded
// k-matrices, generic kernels and solves. Deliberately shares nothing
// with the filtered pipeline in resolution.cpp beyond the module layer.

#include <vector>

#include "shortres/module.hpp"

namespace shortres::testing {

inline FiniteModule naiveSyzygyStep(const FiniteModule& m) {
  const ShortAlgebra& A = m.algebra();
  const Field& F = A.field();
  const int64_t d = A.dim();
  Filtration fl = filtration(m);
  const int64_t g = fl.h.h0;
  if (g == 0) return m;  // zero module: its syzygy is itself

  // Full augmentation R^g -> M over the R-basis (1, x_1..e, z_1..r).
  Mat Afull(F, m.dim(), g * d);
  for (int64_t i = 0; i < g; ++i) {
    Mat v = fl.basis.column(i);
    for (int64_t t = 0; t < m.dim(); ++t) Afull.set(t, i * d, v.at(t, 0));
    for (int64_t j = 0; j < A.e(); ++j) {
      Mat xv = m.rho(j) * v;
      for (int64_t t = 0; t < m.dim(); ++t) Afull.set(t, i * d + 1 + j, xv.at(t, 0));
    }
    for (int64_t h = 0; h < A.r(); ++h) {
      Mat zv = m.sigma(h) * v;
      for (int64_t t = 0; t < m.dim(); ++t) Afull.set(t, i * d + 1 + A.e() + h, zv.at(t, 0));
    }
  }
  Mat K = kernel(Afull);  // g*d x dim(Omega)

  // Action of x_l on the kernel: block left multiplication, then
  // coordinates over the kernel basis.
  std::vector<Mat> act;
  for (int64_t l = 0; l < A.e(); ++l) {
    Mat L = A.leftMult(l);
    Mat big(F, g * d, g * d);
    for (int64_t i = 0; i < g; ++i)
      for (int64_t a = 0; a < d; ++a)
        for (int64_t b = 0; b < d; ++b) big.set(i * d + a, i * d + b, L.at(a, b));
    auto coords = solve(K, big * K);
    if (!coords) throw ContractViolation("oracle: kernel not action-stable");
    act.push_back(*coords);
  }
  return FiniteModule(A, K.cols(), std::move(act));
}

inline std::vector<int64_t> naiveBetti(FiniteModule m, int depth) {
  std::vector<int64_t> betti;
  for (int n = 0; n <= depth; ++n) {
    betti.push_back(hilbertFunction(m).h0);
    if (n < depth) m = naiveSyzygyStep(m);
  }
  return betti;
}

}  // namespace shortres::testing
