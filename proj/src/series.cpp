#include "shortres/series.hpp"

#include <algorithm>

#include "shortres/field.hpp"

namespace shortres {

namespace {

int64_t checked(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError(std::string("overflow in ") + what);
  return static_cast<int64_t>(v);
}

}  // namespace

TruncSeries TruncSeries::one(int order) {
  std::vector<int64_t> c(static_cast<size_t>(order) + 1, 0);
  c[0] = 1;
  return TruncSeries(std::move(c));
}

TruncSeries TruncSeries::poly(std::vector<int64_t> coeffs, int order) {
  coeffs.resize(static_cast<size_t>(order) + 1, 0);
  return TruncSeries(std::move(coeffs));
}

TruncSeries TruncSeries::truncated(int order) const {
  std::vector<int64_t> c(c_.begin(), c_.begin() + std::min<size_t>(c_.size(), static_cast<size_t>(order) + 1));
  c.resize(static_cast<size_t>(order) + 1, 0);
  return TruncSeries(std::move(c));
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  size_t n = std::max(c_.size(), o.c_.size());
  std::vector<int64_t> c(n, 0);
  for (size_t i = 0; i < n; ++i)
    c[i] = checked(static_cast<__int128>((*this)[static_cast<int>(i)]) + o[static_cast<int>(i)], "+");
  return TruncSeries(std::move(c));
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
  size_t n = std::max(c_.size(), o.c_.size());
  std::vector<int64_t> c(n, 0);
  for (size_t i = 0; i < n; ++i)
    c[i] = checked(static_cast<__int128>((*this)[static_cast<int>(i)]) - o[static_cast<int>(i)], "-");
  return TruncSeries(std::move(c));
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  int n = std::min(order(), o.order());
  std::vector<int64_t> c(static_cast<size_t>(n) + 1, 0);
  for (int i = 0; i <= n; ++i) {
    __int128 acc = 0;
    for (int j = 0; j <= i; ++j)
      acc += static_cast<__int128>((*this)[j]) * o[i - j];
    c[static_cast<size_t>(i)] = checked(acc, "*");
  }
  return TruncSeries(std::move(c));
}

TruncSeries TruncSeries::inverse() const {
  if (c_.empty() || (c_[0] != 1 && c_[0] != -1))
    throw ContractViolation("series inverse requires constant term +-1");
  int n = order();
  std::vector<int64_t> r(static_cast<size_t>(n) + 1, 0);
  int64_t u = c_[0];  // +-1, self-inverse
  r[0] = u;
  for (int i = 1; i <= n; ++i) {
    __int128 acc = 0;
    for (int j = 1; j <= i; ++j) acc += static_cast<__int128>(c_[static_cast<size_t>(j)]) * r[static_cast<size_t>(i - j)];
    r[static_cast<size_t>(i)] = checked(-u * acc, "inverse");
  }
  return TruncSeries(std::move(r));
}

bool TruncSeries::isPolynomialOfDegree(int deg) const {
  for (int i = deg + 1; i <= order(); ++i)
    if ((*this)[i] != 0) return false;
  return true;
}

int TruncSeries::degree() const {
  for (int i = order(); i >= 0; --i)
    if ((*this)[i] != 0) return i;
  return -1;
}

std::string TruncSeries::str(const std::string& var) const {
  std::string s;
  bool any = false;
  for (int i = 0; i <= order(); ++i) {
    int64_t v = (*this)[i];
    if (v == 0) continue;
    if (any) s += v > 0 ? " + " : " - ";
    else if (v < 0) s += "-";
    int64_t a = v < 0 ? -v : v;
    if (a != 1 || i == 0) s += std::to_string(a);
    if (i >= 1) {
      s += var;
      if (i >= 2) s += "^" + std::to_string(i);
    }
    any = true;
  }
  return any ? s : "0";
}

BSequence bSequence(int64_t e, int depth) {
  if (e < 2) throw OverflowError("bSequence requires e >= 2");
  BSequence b;
  b.e = e;
  b.values.resize(static_cast<size_t>(depth) + 1);
  b.values[0] = 1;
  if (depth >= 1) b.values[1] = e;
  for (int n = 1; n < depth; ++n) {
    __int128 next = static_cast<__int128>(e) * b.values[static_cast<size_t>(n)] -
                    b.values[static_cast<size_t>(n - 1)];
    b.values[static_cast<size_t>(n + 1)] = checked(next, "bSequence");
  }
  return b;
}

ClosedFormB closedFormB(int64_t e, int n) {
  ClosedFormB r{};
  __int128 sum = 0;
  for (int j = 0; 2 * j <= n - 1; ++j) {
    __int128 term = 1;
    for (int t = 0; t < j; ++t) term *= e * e - 4;
    for (int t = 0; t < n - 2 * j; ++t) term *= e;
    sum += term;
  }
  r.numerator = sum;
  r.log2Denominator = n + 1;
  BSequence b = bSequence(e, n);
  __int128 expected = static_cast<__int128>(b.values[static_cast<size_t>(n)]);
  for (int t = 0; t <= n; ++t) expected *= 2;
  r.matchesRecurrence = (sum == expected);
  return r;
}

TruncSeries dressKramer(const TruncSeries& pSM, const TruncSeries& pSk, const TruncSeries& pTk) {
  int n = std::min({pSM.order(), pSk.order(), pTk.order()});
  TruncSeries a = pSM.truncated(n), sk = pSk.truncated(n), tk = pTk.truncated(n);
  TruncSeries denom = sk + tk - sk * tk;
  return (a * tk * denom.inverse()).truncated(n);
}

std::optional<TruncSeries> rationalFit(const TruncSeries& s, const TruncSeries& denom, int window) {
  TruncSeries prod = s * denom;
  int n = prod.order();
  for (int i = n - window + 1; i <= n; ++i)
    if (prod[i] != 0) return std::nullopt;
  return prod;
}

}  // namespace shortres
