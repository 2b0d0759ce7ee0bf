#include "doctest.h"
#include "instances.hpp"
#include "shortres/module.hpp"

using namespace shortres;
using namespace shortres::testing;

TEST_SUITE_BEGIN("module");

namespace {

// The maximal ideal m of cx2 as a module: basis (x, y, xy).
FiniteModule maxIdealCx2(const Field& F) {
  ShortAlgebra a = cx2(F);
  Mat rx(F, 3, 3), ry(F, 3, 3);
  rx.setInt(2, 1, 1);  // x . y = xy
  ry.setInt(2, 0, 1);  // y . x = xy
  return FiniteModule(a, 3, {rx, ry});
}

}  // namespace

TEST_CASE("residue field and regular module") {
  Field F(101);
  ShortAlgebra a = cx2(F);
  FiniteModule k = residueField(a);
  CHECK(k.dim() == 1);
  CHECK(moduleValidate(k).allPass());
  CHECK(hilbertFunction(k) == HilbertFunction{1, 0, 0});

  FiniteModule R = regularModule(a);
  CHECK(moduleValidate(R).allPass());
  CHECK(hilbertFunction(R) == HilbertFunction{1, 2, 1});

  FiniteModule m = maxIdealCx2(F);
  CHECK(moduleValidate(m).allPass());
  CHECK(hilbertFunction(m) == HilbertFunction{2, 1, 0});
}

TEST_CASE("moduleValidate flags a non-commuting action") {
  Field F(101);
  ShortAlgebra a = square(F, 2);
  Mat r1(F, 2, 2), r2(F, 2, 2);
  r1.setInt(0, 1, 1);
  r2.setInt(1, 0, 1);
  FiniteModule bad(a, 2, {r1, r2});
  auto rep = moduleValidate(bad);
  bool commFail = false;
  for (auto& c : rep.checks)
    if (c.name == "action_commutes" && !c.pass) commFail = true;
  CHECK(commFail);
}

TEST_CASE("filtration produces an adapted basis") {
  Field F(101);
  FiniteModule R = regularModule(cx2(F));
  Filtration f = filtration(R);
  CHECK(f.h == HilbertFunction{1, 2, 1});
  CHECK(rank(f.basis) == R.dim());
  CHECK((f.coords * f.basis) == Mat::identity(F, R.dim()));
}

TEST_CASE("homModule: the three spec instances") {
  Field F(101);
  ShortAlgebra a = cx2(F);

  // Hom(k, R) = socle, one-dimensional over the Gorenstein ring.
  FiniteModule h1 = homModule(residueField(a), regularModule(a));
  CHECK(h1.dim() == 1);

  // Hom(R, N) = N via evaluation at 1.
  FiniteModule N = maxIdealCx2(F);
  FiniteModule h2 = homModule(regularModule(a), N);
  CHECK(h2.dim() == N.dim());
  CHECK(moduleValidate(h2).allPass());
  CHECK(hilbertFunction(h2).h0 == hilbertFunction(N).h0);

  // Hom(m, R): three dimensions, Hilbert (1, 2, 0). By hand: f is fixed
  // by f(x) in (0:x) = <x, xy> and f(y) in (0:y) with y f(x) = x f(y).
  FiniteModule h3 = homModule(maxIdealCx2(F), regularModule(a));
  CHECK(h3.dim() == 3);
  CHECK(hilbertFunction(h3) == HilbertFunction{1, 2, 0});
  CHECK(moduleValidate(h3).allPass());

  CHECK_THROWS_AS(homModule(residueField(a), residueField(gorenstein3(F))), ContractViolation);
}

TEST_CASE("directSum") {
  Field F(101);
  ShortAlgebra a = cx2(F);
  FiniteModule k = residueField(a);
  FiniteModule kk = directSum({k, k});
  CHECK(kk.dim() == 2);
  for (int64_t i = 0; i < a.e(); ++i) CHECK(kk.rho(i).isZero());

  FiniteModule R = regularModule(a);
  FiniteModule m = maxIdealCx2(F);
  auto hSum = hilbertFunction(directSum({R, m}));
  CHECK(hSum == HilbertFunction{3, 3, 1});
  auto hR = hilbertFunction(R);
  auto hM = hilbertFunction(m);
  CHECK(hSum.h0 == hR.h0 + hM.h0);
  CHECK(hSum.h1 == hR.h1 + hM.h1);
  CHECK(hSum.h2 == hR.h2 + hM.h2);
}

TEST_CASE("quotientOfFree: boundary cases") {
  Field F(101);
  ShortAlgebra a = cx2(F);
  // No relations: R^2 itself.
  FiniteModule free2 = quotientOfFree(a, 2, Mat(F, 2 * a.dim(), 0));
  CHECK(free2.dim() == 2 * a.dim());
  CHECK(hilbertFunction(free2) == HilbertFunction{2, 4, 2});

  // Relations spanning all of m R^g: the quotient is k^g.
  Mat all(F, a.dim(), 0);
  Mat I = Mat::identity(F, a.dim());
  std::vector<int64_t> mPart;
  for (int64_t t = 1; t < a.dim(); ++t) mPart.push_back(t);
  FiniteModule kq = quotientOfFree(a, 1, I.columns(mPart));
  CHECK(kq.dim() == 1);
  CHECK(hilbertFunction(kq) == HilbertFunction{1, 0, 0});

  // Constant terms are rejected.
  CHECK_THROWS_AS(quotientOfFree(a, 1, I.columns({0})), ContractViolation);
}

TEST_CASE("randomModule: determinism, validity, generator count") {
  Field F(101);
  for (auto alg : {cx2(F), gorenstein3(F), square(F, 3)}) {
    for (uint64_t seed : {1ull, 7ull, 42ull}) {
      FiniteModule m1 = randomModule(alg, 2, 0.5, seed);
      FiniteModule m2 = randomModule(alg, 2, 0.5, seed);
      CHECK(m1.dim() == m2.dim());
      bool same = true;
      for (int64_t i = 0; i < alg.e(); ++i) same = same && (m1.rho(i) == m2.rho(i));
      CHECK(same);  // bit-for-bit reproducibility
      CHECK(moduleValidate(m1).allPass());
      CHECK(hilbertFunction(m1).h0 == 2);  // relations in m R^g keep g generators
    }
  }
  // Density 0: the free module itself.
  FiniteModule free = randomModule(cx2(F), 3, 0.0, 9);
  CHECK(free.dim() == 3 * cx2(F).dim());
}

TEST_CASE("annihilatedByModule") {
  Field F(101);
  ShortAlgebra a = cx2(F);
  auto conca = findConca(a);
  REQUIRE(conca.status == ConcaStatus::Found);

  // R/xR itself: dimension e, x acts as zero.
  FiniteModule R = regularModule(a);
  Mat xAct = R.actionOf(conca.x);
  auto rrk = rref(xAct);
  FiniteModule RmodX = quotientModule(R, xAct.columns(rrk.pivotCols));
  CHECK(RmodX.dim() == a.e());
  CHECK(RmodX.actionOf(conca.x).isZero());
  CHECK(moduleValidate(RmodX).allPass());

  for (uint64_t seed : {3ull, 11ull}) {
    FiniteModule M = annihilatedByModule(a, conca.x, 2, seed);
    CHECK(M.actionOf(conca.x).isZero());
    CHECK(moduleValidate(M).allPass());
  }

  std::vector<FElem> notConca{F.zero(), F.zero()};
  CHECK_THROWS_AS(annihilatedByModule(a, notConca, 1, 1), ContractViolation);
}

TEST_CASE("Matlis duality dimension symmetry over Gorenstein rings") {
  Field F(101);
  for (auto alg : {cx2(F), gorenstein3(F)}) {
    REQUIRE(isGorenstein(alg));
    FiniteModule R = regularModule(alg);
    Rng seeds(2024);
    for (int round = 0; round < 20; ++round) {
      FiniteModule M = randomModule(alg, 1 + static_cast<int64_t>(seeds.below(2)), 0.5, seeds.next());
      CHECK(homModule(M, R).dim() == M.dim());
    }
  }
}

TEST_CASE("moduleInNormalBasis preserves structure") {
  Field F(101);
  ShortAlgebra a = gorenstein3(F);
  auto conca = findConca(a);
  REQUIRE(conca.status == ConcaStatus::Found);
  NormalizedAlgebra na = normalizeBasis(a, conca.x);
  FiniteModule M = randomModule(a, 2, 0.4, 5);
  FiniteModule M2 = moduleInNormalBasis(na, M);
  CHECK(M2.dim() == M.dim());
  CHECK(moduleValidate(M2).allPass());
  auto h1 = hilbertFunction(M), h2 = hilbertFunction(M2);
  CHECK(h1 == h2);
}

TEST_SUITE_END();
