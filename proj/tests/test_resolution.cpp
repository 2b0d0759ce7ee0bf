#include "doctest.h"
#include "instances.hpp"
#include "naive_resolve.hpp"
#include "shortres/resolution.hpp"

using namespace shortres;
using namespace shortres::testing;

TEST_SUITE_BEGIN("resolution");

namespace {

// e = 3, r = 2 with Conca generator z: k[x,y,z]/(x^2, y^2, xy, z^2).
ShortAlgebra e3r2(const Field& F) {
  return ShortAlgebra::fromQuadrics(
      F, 3,
      {quad(F, 3, {{0, 0, 1}}), quad(F, 3, {{1, 1, 1}}), quad(F, 3, {{0, 1, 1}}),
       quad(F, 3, {{2, 2, 1}})});
}

std::vector<int64_t> bettiOf(const Resolution& res) {
  std::vector<int64_t> b;
  for (int n = 0; n <= res.depth; ++n) b.push_back(res.betti(n));
  return b;
}

void checkExactness(const Resolution& res) {
  const int64_t d = res.module.algebra().dim();
  Mat cover = expandCover(res);
  int64_t prevRank = rank(cover);
  for (int n = 1; n <= res.depth; ++n) {
    Mat D = expandDifferential(res, n);
    if (n == 1)
      CHECK((cover * D).isZero());
    else
      CHECK((expandDifferential(res, n - 1) * D).isZero());
    int64_t rk = rank(D);
    CHECK(res.betti(n - 1) * d - prevRank == rk);  // step exactness
    prevRank = rk;
    // Minimality: constant-coefficient rows of each column vanish.
    bool minimal = true;
    for (int64_t b = 0; b < res.betti(n); ++b)
      for (int64_t a = 0; a < res.betti(n - 1); ++a)
        minimal = minimal && res.module.algebra().field().isZero(D.at(a * d, b * d));
    CHECK(minimal);
  }
}

}  // namespace

TEST_CASE("residue field over the Gorenstein e=2 ring: beta_n = n+1") {
  Field F(101);
  ResolveOptions opt;
  opt.depth = 8;
  Resolution res = resolve(residueField(cx2(F)), opt);
  CHECK(bettiOf(res) == std::vector<int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK_FALSE(res.truncated);
}

TEST_CASE("residue field over e=3, r=2: beta_n = 2^{n+1} - 1") {
  Field F(101);
  ShortAlgebra a = e3r2(F);
  REQUIRE(findConca(a).status == ConcaStatus::Found);
  ResolveOptions opt;
  opt.depth = 5;
  Resolution res = resolve(residueField(a), opt);
  CHECK(bettiOf(res) == std::vector<int64_t>{1, 3, 7, 15, 31, 63});
}

TEST_CASE("free modules resolve instantly") {
  Field F(101);
  ShortAlgebra a = cx2(F);
  FiniteModule R2 = directSum({regularModule(a), regularModule(a)});
  ResolveOptions opt;
  opt.depth = 4;
  Resolution res = resolve(R2, opt);
  CHECK(bettiOf(res) == std::vector<int64_t>{2, 0, 0, 0, 0});
}

TEST_CASE("pipeline agrees with the naive expanded-matrix oracle") {
  Field F(101);
  Rng seeds(515);
  std::vector<ShortAlgebra> algebras{cx2(F),          gorenstein3(F),      e3r2(F),
                                     square(F, 3),    fiberWithConca(F, 1), fiberSquareCube(F, 2),
                                     needsExtension(F)};
  for (auto& alg : algebras) {
    std::vector<FiniteModule> mods{residueField(alg)};
    mods.push_back(randomModule(alg, 1, 0.5, seeds.next()));
    mods.push_back(randomModule(alg, 2, 0.35, seeds.next()));
    for (auto& M : mods) {
      ResolveOptions opt;
      opt.depth = 4;
      opt.keepMatrices = 1;
      opt.columnBudget = 100000;
      Resolution res = resolve(M, opt);
      CHECK(bettiOf(res) == naiveBetti(M, res.depth));
      checkExactness(res);
    }
  }
}

TEST_CASE("oracle agreement for e = 4") {
  Field F(101);
  ShortAlgebra a = ShortAlgebra::fromQuadrics(
      F, 4,
      {quad(F, 4, {{0, 0, 1}}), quad(F, 4, {{1, 1, 1}}), quad(F, 4, {{2, 2, 1}}),
       quad(F, 4, {{3, 3, 1}}), quad(F, 4, {{0, 1, 1}}), quad(F, 4, {{0, 2, 1}}),
       quad(F, 4, {{1, 2, 1}})});
  FiniteModule k = residueField(a);
  ResolveOptions opt;
  opt.depth = 3;
  opt.keepMatrices = 1;
  Resolution res = resolve(k, opt);
  CHECK(bettiOf(res) == naiveBetti(k, 3));
  checkExactness(res);
}

TEST_CASE("resolution matrices are bit-reproducible") {
  Field F(101);
  FiniteModule M = randomModule(gorenstein3(F), 2, 0.5, 77);
  ResolveOptions opt;
  opt.depth = 4;
  opt.keepMatrices = 1;
  Resolution r1 = resolve(M, opt);
  Resolution r2 = resolve(M, opt);
  REQUIRE(r1.depth == r2.depth);
  for (int n = 1; n <= r1.depth; ++n) {
    CHECK(r1.steps[static_cast<size_t>(n)].lambda == r2.steps[static_cast<size_t>(n)].lambda);
    CHECK(r1.steps[static_cast<size_t>(n)].quad == r2.steps[static_cast<size_t>(n)].quad);
  }
}

TEST_CASE("minimalCover") {
  Field F(101);
  ShortAlgebra a = cx2(F);
  auto [rk, ker] = minimalCover(regularModule(a));
  CHECK(rk == 1);
  CHECK(ker.dim() == 0);

  auto [rk2, omega1] = minimalCover(residueField(a));
  CHECK(rk2 == 1);
  CHECK(omega1.dim() == 3);  // m inside R
  CHECK(hilbertFunction(omega1) == HilbertFunction{2, 1, 0});
  CHECK(moduleValidate(omega1).allPass());

  auto [rk3, omega1b] = minimalCover(residueField(square(F, 2)));
  CHECK(rk3 == 1);
  CHECK(omega1b.dim() == 2);  // k^2 when m^2 = 0
  CHECK(hilbertFunction(omega1b) == HilbertFunction{2, 0, 0});
}

TEST_CASE("syzygy modules") {
  Field F(101);
  ShortAlgebra a = cx2(F);
  FiniteModule k = residueField(a);

  FiniteModule om1 = syzygy(k, 1);
  CHECK(hilbertFunction(om1) == HilbertFunction{2, 1, 0});

  FiniteModule om2 = syzygy(k, 2);
  CHECK(om2.dim() == 5);
  CHECK(hilbertFunction(om2) == HilbertFunction{3, 2, 0});
  CHECK(moduleValidate(om2).allPass());

  CHECK(syzygy(regularModule(a), 1).dim() == 0);
}

TEST_CASE("negativeSyzygy over Gorenstein rings (Hilbert b_{i-1} + b_i t)") {
  Field F(101);
  {
    ShortAlgebra a = cx2(F);
    FiniteModule d1 = negativeSyzygy(a, 1);
    CHECK(d1.dim() == 3);
    CHECK(hilbertFunction(d1) == HilbertFunction{1, 2, 0});
    FiniteModule d2 = negativeSyzygy(a, 2);
    CHECK(hilbertFunction(d2) == HilbertFunction{2, 3, 0});
  }
  {
    ShortAlgebra a = gorenstein3(F);
    FiniteModule d1 = negativeSyzygy(a, 1);
    CHECK(hilbertFunction(d1) == HilbertFunction{1, 3, 0});
  }
  CHECK_THROWS_AS(negativeSyzygy(square(Field(101), 2), 1), ContractViolation);
}

TEST_CASE("poincareTruncated and budget truncation") {
  Field F(101);
  FiniteModule k = residueField(cx2(F));
  TruncSeries ps = poincareTruncated(k, 5);
  CHECK(ps.coeffs() == std::vector<int64_t>{1, 2, 3, 4, 5, 6});

  CHECK(poincareTruncated(regularModule(cx2(F)), 4)[0] == 1);
  CHECK(poincareTruncated(regularModule(cx2(F)), 4).isPolynomialOfDegree(0));

  ResolveOptions opt;
  opt.depth = 10;
  opt.columnBudget = 4;
  Resolution res = resolve(residueField(e3r2(F)), opt);
  CHECK(res.truncated);
  CHECK(res.depth < 10);
}

TEST_CASE("syzygy modules validate and match rank bookkeeping") {
  Field F(101);
  Rng seeds(99);
  for (auto alg : {cx2(F), e3r2(F)}) {
    FiniteModule M = randomModule(alg, 2, 0.5, seeds.next());
    ResolveOptions opt;
    opt.depth = 3;
    opt.keepMatrices = 1;
    Resolution res = resolve(M, opt);
    for (int n = 1; n <= res.depth; ++n) {
      FiniteModule om = syzygy(res, n);
      CHECK(moduleValidate(om).allPass());
      CHECK(om.dim() == res.steps[static_cast<size_t>(n)].dimOmega);
      CHECK(hilbertFunction(om).h0 == res.betti(n));
      CHECK(hilbertFunction(om).h2 == 0);  // syzygies live in m F
      if (n < res.depth) {
        int64_t lhs = res.steps[static_cast<size_t>(n + 1)].dimOmega;
        CHECK(lhs == res.betti(n) * alg.dim() - om.dim());
      }
    }
  }
}

TEST_SUITE_END();
