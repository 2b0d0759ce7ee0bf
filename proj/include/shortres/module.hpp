#pragma once

#include <cstdint>
#include <vector>

#include "shortres/algebra.hpp"
#include "shortres/mat.hpp"
#include "shortres/rng.hpp"

namespace shortres {

/// A finite R-module as commuting action matrices rho_1..rho_e for the
/// generators x_1..x_e of m. The action of the m^2 basis is derived from
/// the algebra's product expressions, so the whole R-action is determined.
class FiniteModule {
public:
  FiniteModule(ShortAlgebra alg, int64_t dim, std::vector<Mat> action);

  const ShortAlgebra& algebra() const { return alg_; }
  int64_t dim() const { return dim_; }
  const Mat& rho(int64_t i) const { return action_[static_cast<size_t>(i)]; }
  const Mat& sigma(int64_t h) const { return sigma_[static_cast<size_t>(h)]; }

  /// Action of sum x_coords[i] * x_i.
  Mat actionOf(const std::vector<FElem>& xCoords) const;

private:
  ShortAlgebra alg_;
  int64_t dim_;
  std::vector<Mat> action_;
  std::vector<Mat> sigma_;
};

ValidationReport moduleValidate(const FiniteModule& m);

FiniteModule residueField(const ShortAlgebra& a);

/// R as a module over itself (left multiplication).
FiniteModule regularModule(const ShortAlgebra& a);

struct HilbertFunction {
  int64_t h0 = 0, h1 = 0, h2 = 0;
  bool operator==(const HilbertFunction&) const = default;
};

HilbertFunction hilbertFunction(const FiniteModule& m);

/// Deterministic filtration-adapted basis: columns of `basis` are
/// [generators | mM part | m^2M part]; `coords` maps module coordinates
/// to this basis (coords = basis^{-1}).
struct Filtration {
  HilbertFunction h;
  Mat basis;
  Mat coords;
};

Filtration filtration(const FiniteModule& m);

/// Hom_R(M, N) with action (x f)(v) = x f(v), computed as the kernel of
/// the intertwining system f rho_i^M = rho_i^N f.
FiniteModule homModule(const FiniteModule& m, const FiniteModule& n);

FiniteModule directSum(const std::vector<FiniteModule>& ms);

/// Quotient of m by the submodule generated by the given spanning
/// vectors (dim x k matrix); closure under the action is taken here.
FiniteModule quotientModule(const FiniteModule& m, const Mat& span);

/// Quotient of R^g by the submodule generated by relation vectors lying
/// in m R^g. Coordinates are g blocks of (1, x_1..x_e, z_1..z_r);
/// nonzero constant parts are a contract violation.
FiniteModule quotientOfFree(const ShortAlgebra& a, int64_t g, const Mat& relations);

/// Random quotient of R^g by g*e relations sampled in m R^g with the
/// given per-coordinate density. Seeded and bit-reproducible.
FiniteModule randomModule(const ShortAlgebra& a, int64_t g, double relDensity, uint64_t seed);

/// Random module annihilated by a verified Conca generator x: a seeded
/// quotient of (R/xR)^g.
FiniteModule annihilatedByModule(const ShortAlgebra& a, const std::vector<FElem>& x, int64_t g,
                                 uint64_t seed);

/// The same module with the action rewritten in the normalized basis
/// x'_i = sum_t C[t][i] x_t of a NormalizedAlgebra.
FiniteModule moduleInNormalBasis(const NormalizedAlgebra& na, const FiniteModule& m);

}  // namespace shortres
