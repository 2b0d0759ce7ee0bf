#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace shortres {

/// Element of F_{p^d}, d <= 3: coefficients of 1, u, u^2 with 0 <= c[i] < p.
/// Unused coefficients are zero, so elements compare with ==.
struct FElem {
  std::array<int32_t, 3> c{0, 0, 0};
  friend bool operator==(const FElem&, const FElem&) = default;
};

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// A finite field F_{p^d} with p an odd prime and d in {1,2,3}.
///
/// Extensions are realized as F_p[u]/(f) with f the lexicographically
/// smallest monic irreducible of degree d, so seeded runs reproduce
/// bit-for-bit. Extension degrees above 1 require p < 2^20.
class Field {
public:
  explicit Field(int64_t p, int deg = 1);

  int64_t p() const { return p_; }
  int deg() const { return deg_; }
  // p^deg as a double-checked signed value; only valid for deg > 1 gates.
  int64_t order() const;

  FElem zero() const { return FElem{}; }
  FElem one() const { return FElem{{1, 0, 0}}; }
  FElem fromInt(int64_t v) const {
    int64_t r = v % p_;
    if (r < 0) r += p_;
    return FElem{{static_cast<int32_t>(r), 0, 0}};
  }
  // The generator u of the extension (only meaningful for deg > 1).
  FElem gen() const { return deg_ == 1 ? zero() : FElem{{0, 1, 0}}; }

  bool isZero(const FElem& a) const { return a.c[0] == 0 && a.c[1] == 0 && a.c[2] == 0; }

  FElem add(const FElem& a, const FElem& b) const;
  FElem sub(const FElem& a, const FElem& b) const;
  FElem neg(const FElem& a) const;
  FElem mul(const FElem& a, const FElem& b) const;
  FElem inv(const FElem& a) const;
  FElem pow(FElem a, uint64_t n) const;

  /// Base-change embedding from the prime field (or a subfield with the
  /// same characteristic); coefficients are reinterpreted verbatim.
  FElem embed(const FElem& a) const { return a; }

  std::string str(const FElem& a) const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.p_ == b.p_ && a.deg_ == b.deg_;
  }

  /// Coefficients m0,m1,m2 with u^deg = m0 + m1 u + m2 u^2.
  const std::array<int32_t, 3>& reduction() const { return red_; }

  static bool isPrime(int64_t n);

private:
  int64_t p_;
  int deg_;
  std::array<int32_t, 3> red_{0, 0, 0};

  int64_t mod(int64_t v) const {
    int64_t r = v % p_;
    return r < 0 ? r + p_ : r;
  }
};

}  // namespace shortres
