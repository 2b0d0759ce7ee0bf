#include "shortres/field.hpp"

#include <vector>

namespace shortres {

namespace {

// Is x^deg - (m0 + m1 x + m2 x^2) irreducible over F_p? For deg <= 3 it
// suffices to rule out roots (deg 2, 3) since a reducible cubic has a
// linear factor.
bool isIrreducible(int64_t p, int deg, int64_t m0, int64_t m1, int64_t m2) {
  for (int64_t x = 0; x < p; ++x) {
    int64_t lhs = 1;
    for (int i = 0; i < deg; ++i) lhs = lhs * x % p;
    int64_t rhs = (m0 + m1 * x % p + m2 * x % p * x % p) % p;
    if (lhs == rhs % p) return false;
  }
  return true;
}

}  // namespace

bool Field::isPrime(int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

Field::Field(int64_t p, int deg) : p_(p), deg_(deg) {
  if (p < 3 || p > (int64_t(1) << 31) || !isPrime(p))
    throw ContractViolation("field characteristic must be an odd prime <= 2^31");
  if (deg < 1 || deg > 3) throw ContractViolation("extension degree must be 1, 2 or 3");
  if (deg > 1 && p >= (int64_t(1) << 20))
    throw ContractViolation("extension fields are supported only for p < 2^20");
  if (deg == 2) {
    // u^2 = n for the least quadratic nonresidue n.
    for (int64_t n = 2; n < p; ++n) {
      bool residue = false;
      for (int64_t x = 1; !residue && 2 * x <= p; ++x)
        if (x * x % p == n) residue = true;
      if (!residue) {
        red_ = {static_cast<int32_t>(n), 0, 0};
        return;
      }
    }
    throw std::logic_error("no quadratic nonresidue found");
  }
  if (deg == 3) {
    // Lexicographically least (m1, m0) with x^3 - m1 x - m0 irreducible.
    for (int64_t m1 = 0; m1 < p; ++m1)
      for (int64_t m0 = 0; m0 < p; ++m0)
        if (isIrreducible(p, 3, m0, m1, 0)) {
          red_ = {static_cast<int32_t>(m0), static_cast<int32_t>(m1), 0};
          return;
        }
    throw std::logic_error("no irreducible cubic found");
  }
}

int64_t Field::order() const {
  int64_t q = 1;
  for (int i = 0; i < deg_; ++i) q *= p_;
  return q;
}

FElem Field::add(const FElem& a, const FElem& b) const {
  FElem r;
  for (int i = 0; i < deg_; ++i) {
    int32_t v = a.c[i] + b.c[i];
    if (v >= p_) v -= static_cast<int32_t>(p_);
    r.c[i] = v;
  }
  return r;
}

FElem Field::sub(const FElem& a, const FElem& b) const {
  FElem r;
  for (int i = 0; i < deg_; ++i) {
    int32_t v = a.c[i] - b.c[i];
    if (v < 0) v += static_cast<int32_t>(p_);
    r.c[i] = v;
  }
  return r;
}

FElem Field::neg(const FElem& a) const { return sub(zero(), a); }

FElem Field::mul(const FElem& a, const FElem& b) const {
  if (deg_ == 1) {
    return FElem{{static_cast<int32_t>(int64_t(a.c[0]) * b.c[0] % p_), 0, 0}};
  }
  // Schoolbook product then reduction by u^deg = red_.
  int64_t prod[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < deg_; ++i)
    for (int j = 0; j < deg_; ++j) prod[i + j] = (prod[i + j] + int64_t(a.c[i]) * b.c[j]) % p_;
  for (int k = 2 * (deg_ - 1); k >= deg_; --k) {
    int64_t carry = prod[k];
    if (carry == 0) continue;
    prod[k] = 0;
    for (int i = 0; i < deg_; ++i)
      prod[k - deg_ + i] = (prod[k - deg_ + i] + carry * red_[i]) % p_;
  }
  FElem r;
  for (int i = 0; i < deg_; ++i) r.c[i] = static_cast<int32_t>(prod[i]);
  return r;
}

FElem Field::pow(FElem a, uint64_t n) const {
  FElem r = one();
  while (n > 0) {
    if (n & 1) r = mul(r, a);
    a = mul(a, a);
    n >>= 1;
  }
  return r;
}

FElem Field::inv(const FElem& a) const {
  if (isZero(a)) throw ContractViolation("inverse of zero");
  if (deg_ == 1) {
    // Extended Euclid on (a, p).
    int64_t t = 0, newt = 1, r = p_, newr = a.c[0];
    while (newr != 0) {
      int64_t q = r / newr;
      int64_t tmp = t - q * newt;
      t = newt;
      newt = tmp;
      tmp = r - q * newr;
      r = newr;
      newr = tmp;
    }
    if (t < 0) t += p_;
    return FElem{{static_cast<int32_t>(t), 0, 0}};
  }
  // a^(q-2) with q = p^deg; q < 2^60 by the p < 2^20 gate.
  uint64_t q = 1;
  for (int i = 0; i < deg_; ++i) q *= static_cast<uint64_t>(p_);
  return pow(a, q - 2);
}

std::string Field::str(const FElem& a) const {
  if (deg_ == 1) return std::to_string(a.c[0]);
  std::string s = std::to_string(a.c[0]);
  if (a.c[1] != 0) s += "+" + std::to_string(a.c[1]) + "u";
  if (deg_ > 2 && a.c[2] != 0) s += "+" + std::to_string(a.c[2]) + "u^2";
  return s;
}

}  // namespace shortres
