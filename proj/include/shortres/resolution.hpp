#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shortres/module.hpp"
#include "shortres/series.hpp"

namespace shortres {

/// Minimal free resolutions over a ShortAlgebra.
///
/// Everything leans on m^3 = 0: a differential column is determined by
/// the linear parts lambda (coefficients of x_1..x_e per target basis
/// element) and quadratic parts (coefficients of z_1..z_r), and from
/// homological degree 2 on every minimal generator is either pure-linear
/// (a kernel vector of the linear-part contraction L_n) or pure-quadratic
/// (a socle generator outside m Omega). The per-step work is one row
/// reduction of L_n, whose rank is dim(m Omega_n).

struct ResolveOptions {
  int depth = 10;
  int64_t columnBudget = 5000;
  /// -1: keep differential matrices while small, 0: never, 1: always.
  int keepMatrices = -1;
};

struct ResolutionStep {
  int64_t beta = 0;      // rank of F_n
  int64_t kCount = 0;    // generators with nonzero linear part
  int64_t wCount = 0;    // pure-quadratic generators
  int64_t rho = 0;       // rank of L_n = dim m Omega_n
  int64_t dimOmega = 0;  // dim_k Omega_n
  int64_t lambdaRank = 0;  // rank of the linear-part matrix of d_n
  bool hasMatrices = false;
  Mat lambda;  // (beta_{n-1} * e) x beta, flat row index a*e + i
  Mat quad;    // (beta_{n-1} * r) x beta, flat row index a*r + h
};

struct Resolution {
  FiniteModule module;
  Filtration filt;     // filtration data of the module
  Mat coverGens;       // dim(M) x beta_0, the chosen generators of M
  std::vector<ResolutionStep> steps;  // steps[n] describes F_n; steps[0] holds beta only
  int depth = 0;       // largest n with beta_n computed
  bool truncated = false;
  Mat omega1Basis;     // basis of Omega_1 in m R^{beta_0} coords (if kept)
  bool omega1Kept = false;

  int64_t betti(int n) const { return steps[static_cast<size_t>(n)].beta; }
  TruncSeries poincare() const;
};

Resolution resolve(const FiniteModule& m, const ResolveOptions& opt = {});

/// rank of the minimal cover and the first syzygy as a module.
std::pair<int64_t, FiniteModule> minimalCover(const FiniteModule& m);

/// Omega_n(M) as a FiniteModule (n = 0 returns M itself). Requires the
/// resolution to have kept matrices through step n.
FiniteModule syzygy(const Resolution& res, int n);
FiniteModule syzygy(const FiniteModule& m, int n);

/// Hom_R(Omega_i(k), R) over a Gorenstein algebra.
FiniteModule negativeSyzygy(const ShortAlgebra& a, int i);

TruncSeries poincareTruncated(const FiniteModule& m, int depth, int64_t budget = 5000);

/// Full k-linear matrix of d_n : F_n ox R -> F_{n-1} ox R in the basis
/// (1, x_1..x_e, z_1..z_r) per free generator; for independent exactness
/// checks. n >= 1, matrices must be kept.
Mat expandDifferential(const Resolution& res, int n);

/// Full k-linear matrix of the augmentation F_0 ox R -> M.
Mat expandCover(const Resolution& res);

/// The linear-part contraction L_n as an explicit matrix
/// (beta_{n-1} r) x (beta_n e); rows flat a*r + h, columns flat b*e + j.
Mat materializeL(const Resolution& res, int n);

}  // namespace shortres
