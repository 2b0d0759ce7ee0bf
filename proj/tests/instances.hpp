#pragma once

// Shared construction helpers for the algebra instances the tests keep
// coming back to.

#include <vector>

#include "shortres/algebra.hpp"

namespace shortres::testing {

// Quadratic form from (i, j, coeff) monomial triples, 0-based, i <= j.
inline QuadForm quad(const Field& F, int64_t e,
                     std::vector<std::tuple<int64_t, int64_t, int64_t>> terms) {
  QuadForm q;
  q.mono.assign(static_cast<size_t>(monomialCount(e)), F.zero());
  for (auto& [i, j, c] : terms)
    q.mono[static_cast<size_t>(monomialIndex(e, i, j))] =
        F.add(q.mono[static_cast<size_t>(monomialIndex(e, i, j))], F.fromInt(c));
  return q;
}

// k[x,y]/(x^2, y^2): e = 2, r = 1, the Gorenstein workhorse.
inline ShortAlgebra cx2(const Field& F) {
  return ShortAlgebra::fromQuadrics(F, 2, {quad(F, 2, {{0, 0, 1}}), quad(F, 2, {{1, 1, 1}})});
}

// k[x]/(x^3) truncated: e = 1, r = 1, no Conca generator.
inline ShortAlgebra cube(const Field& F) { return ShortAlgebra::fromQuadrics(F, 1, {}); }

// k[x]/(x^2): e = 1, r = 0.
inline ShortAlgebra dual(const Field& F) {
  return ShortAlgebra::fromQuadrics(F, 1, {quad(F, 1, {{0, 0, 1}})});
}

// k[x_1..x_e]/(x_1..x_e)^2: r = 0.
inline ShortAlgebra square(const Field& F, int64_t e) {
  std::vector<QuadForm> qs;
  for (int64_t i = 0; i < e; ++i)
    for (int64_t j = i; j < e; ++j) qs.push_back(quad(F, e, {{i, j, 1}}));
  return ShortAlgebra::fromQuadrics(F, e, qs);
}

// Gorenstein e = 3: k[x,y,z]/(x^2, y^2, z^2 - xy, xz, yz), socle = z^2.
inline ShortAlgebra gorenstein3(const Field& F) {
  return ShortAlgebra::fromQuadrics(
      F, 3,
      {quad(F, 3, {{0, 0, 1}}), quad(F, 3, {{1, 1, 1}}), quad(F, 3, {{2, 2, 1}, {0, 1, -1}}),
       quad(F, 3, {{0, 2, 1}}), quad(F, 3, {{1, 2, 1}})});
}

// Example with e = 5: (X1,X2)^2 + (X3,X4)^2 + (X5)(X1..X5); H = 1+5t+4t^2.
inline ShortAlgebra example5(const Field& F) {
  std::vector<QuadForm> qs;
  qs.push_back(quad(F, 5, {{0, 0, 1}}));
  qs.push_back(quad(F, 5, {{0, 1, 1}}));
  qs.push_back(quad(F, 5, {{1, 1, 1}}));
  qs.push_back(quad(F, 5, {{2, 2, 1}}));
  qs.push_back(quad(F, 5, {{2, 3, 1}}));
  qs.push_back(quad(F, 5, {{3, 3, 1}}));
  for (int64_t i = 0; i <= 4; ++i) qs.push_back(quad(F, 5, {{std::min<int64_t>(i, 4), std::max<int64_t>(i, 4), 1}}));
  return ShortAlgebra::fromQuadrics(F, 5, qs);
}

// Conca generator only after a quadratic extension:
// k[x,y]/(x^2 + a y^2, xy) with a a nonresidue mod p.
inline ShortAlgebra needsExtension(const Field& F) {
  // Least nonresidue is what Field(p, 2) reduces u^2 to.
  Field F2(F.p(), 2);
  int64_t a = F2.reduction()[0];
  return ShortAlgebra::fromQuadrics(F, 2, {quad(F, 2, {{0, 0, 1}, {1, 1, a}}), quad(F, 2, {{0, 1, 1}})});
}

// Fiber product of Remark 4.2 shape: S with m_S^2 = 0 on `p` generators,
// T the truncated polynomial ring k[y]/(y^3) (Gorenstein, r = 1). Its
// socle has rank p + 1 = e, so no Conca generator exists.
inline ShortAlgebra fiberSquareCube(const Field& F, int64_t pGens) {
  return fiberProduct(square(F, pGens), cube(F));
}

// Same shape but with T = k[x,y]/(x^2,y^2), so s = p + 1 <= e - 1 and the
// Conca generator of T survives into the product.
inline ShortAlgebra fiberWithConca(const Field& F, int64_t pGens) {
  return fiberProduct(square(F, pGens), cx2(F));
}

}  // namespace shortres::testing
