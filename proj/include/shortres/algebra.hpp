#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "shortres/field.hpp"
#include "shortres/mat.hpp"
#include "shortres/rng.hpp"
#include "shortres/series.hpp"

namespace shortres {

/// Quadratic form in e variables as monomial coefficients of X_i X_j for
/// 0 <= i <= j < e, ordered lexicographically by (i, j).
struct QuadForm {
  std::vector<FElem> mono;
};

int64_t monomialCount(int64_t e);
int64_t monomialIndex(int64_t e, int64_t i, int64_t j);  // requires i <= j

/// A local k-algebra R = k + m with m^3 = 0, given by a basis
/// 1, x_1..x_e of m/m^2 lifts, z_1..z_r of m^2, and structure constants
/// x_i x_j = sum_h c[i][j][h] z_h. All products m^2 * m vanish, so the
/// constants determine the multiplication completely.
class ShortAlgebra {
public:
  /// k[X_1..X_e]/(quadrics + cubes): the m^2 basis is picked greedily
  /// from the monomial images in lex order, so construction is
  /// deterministic. r = e(e+1)/2 - rank(span of quadrics).
  static ShortAlgebra fromQuadrics(const Field& f, int64_t e, const std::vector<QuadForm>& quadrics);

  /// Direct structure constants; c entries are (i, j, h, coeff) with
  /// 1-based i, j, h as in the JSON spec format. The expression of each
  /// z_h as a combination of products is solved for during construction
  /// (it exists exactly when m^2 is spanned, which validate() checks).
  static ShortAlgebra fromConstants(const Field& f, int64_t e, int64_t r,
                                    const std::vector<std::tuple<int64_t, int64_t, int64_t, FElem>>& c);

  const Field& field() const { return field_; }
  int64_t e() const { return e_; }
  int64_t r() const { return r_; }
  int64_t dim() const { return 1 + e_ + r_; }

  /// c[i][j][h], 0-based.
  FElem c(int64_t i, int64_t j, int64_t h) const {
    return cc_[static_cast<size_t>((i * e_ + j) * r_ + h)];
  }

  /// z_h as a product combination sum coeff * x_i x_j (0-based, i <= j).
  const std::vector<std::vector<std::tuple<int64_t, int64_t, FElem>>>& productExpr() const {
    return prodExpr_;
  }

  /// Action of x_i on R by left multiplication in the basis
  /// (1, x_1..x_e, z_1..z_r).
  Mat leftMult(int64_t i) const;

  /// m^2-coordinates of (sum a_i x_i)(sum b_j x_j).
  std::vector<FElem> mulClasses(const std::vector<FElem>& a, const std::vector<FElem>& b) const;

  /// The r x e matrix of multiplication by x = sum x_i coords: v -> x v
  /// from m/m^2 to m^2.
  Mat upsilon(const std::vector<FElem>& x) const;

  bool operator==(const ShortAlgebra& o) const {
    return field_ == o.field_ && e_ == o.e_ && r_ == o.r_ && cc_ == o.cc_;
  }

private:
  ShortAlgebra(Field f, int64_t e, int64_t r) : field_(f), e_(e), r_(r) {
    cc_.assign(static_cast<size_t>(e * e * r), FElem{});
  }
  void setC(int64_t i, int64_t j, int64_t h, const FElem& v) {
    cc_[static_cast<size_t>((i * e_ + j) * r_ + h)] = v;
  }
  void solveProductExpr();

  Field field_;
  int64_t e_, r_;
  std::vector<FElem> cc_;
  std::vector<std::vector<std::tuple<int64_t, int64_t, FElem>>> prodExpr_;

  friend ShortAlgebra fiberProduct(const ShortAlgebra&, const ShortAlgebra&);
  friend ShortAlgebra baseChange(const ShortAlgebra&, int);
};

struct ValidationReport {
  struct Check {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Check> checks;
  bool allPass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

ValidationReport validate(const ShortAlgebra& a);

/// 1 + e t + r t^2, padded to the requested order.
TruncSeries hilbert(const ShortAlgebra& a, int order = 2);

struct SocleResult {
  Mat basis;  // dim x s over the algebra basis (1, x_, z_)
  int64_t s = 0;
};
SocleResult socle(const ShortAlgebra& a);

/// Artinian local: Gorenstein iff the socle is one-dimensional.
bool isGorenstein(const ShortAlgebra& a);

enum class ConcaStatus { Found, None, Inconclusive };

struct ConcaResult {
  ConcaStatus status = ConcaStatus::Inconclusive;
  std::vector<FElem> x;  // coordinates in m/m^2 over the (extended) field
  int degreeUsed = 1;
  uint64_t pointsChecked = 0;
};

struct ConcaOptions {
  enum class Strategy { Exhaustive, Random };
  Strategy strategy = Strategy::Exhaustive;
  int extensionDegree = 1;
  uint64_t scanBudget = 100000000;  // projective points
  uint64_t samples = 100000;
  uint64_t seed = 1;
};

/// Search for x with x != 0 = x^2 and x m = m^2. The scan ranges over
/// projective representatives (first nonzero coordinate 1) in lex order,
/// so the exhaustive hit is the lexicographically least one; lifting with
/// zero m^2-part is harmless since both conditions only depend on the
/// class mod m^2 when m^3 = 0.
ConcaResult findConca(const ShortAlgebra& a, const ConcaOptions& opt = {});

/// Direct recheck of the two defining conditions, independent of the
/// search path.
bool isConcaGenerator(const ShortAlgebra& a, const std::vector<FElem>& x);

/// Basis change to the presentation-ready form: x_e = x, x_1 x .. x_r x a
/// basis of m^2, images of x_{r+1}..x_e spanning Ker(v -> xv), and the
/// constants a^{ij}_h with x_i x_j = sum_h a^{ij}_h x_h x_e for
/// i <= j <= e-1.
struct NormalizedAlgebra {
  ShortAlgebra original;
  ShortAlgebra normalized;  // constants in the new basis, z_h = x_h * x_e
  std::vector<FElem> conca;
  Mat basisChange;  // e x e, column j = new x_{j+1} in old m/m^2 coords
  FElem a(int64_t i, int64_t j, int64_t h) const { return normalized.c(i, j, h); }
};

NormalizedAlgebra normalizeBasis(const ShortAlgebra& alg, const std::vector<FElem>& x);

/// S x_k T: m = m_S + m_T with cross products zero.
ShortAlgebra fiberProduct(const ShortAlgebra& s, const ShortAlgebra& t);

/// Scalar extension F_p -> F_{p^d}; structure constants re-read verbatim.
ShortAlgebra baseChange(const ShortAlgebra& a, int d);

}  // namespace shortres
