#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shortres {

struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Truncated integer power series c0 + c1 t + ... + cN t^N with exact
/// int64 coefficients; arithmetic accumulates in 128 bits and throws
/// OverflowError instead of wrapping. Betti numbers live here, so no
/// modular reduction ever happens.
class TruncSeries {
public:
  TruncSeries() = default;
  explicit TruncSeries(std::vector<int64_t> coeffs) : c_(std::move(coeffs)) {}
  static TruncSeries zero(int order) { return TruncSeries(std::vector<int64_t>(order + 1, 0)); }
  static TruncSeries one(int order);
  /// Polynomial from low-degree coefficients, padded to the order.
  static TruncSeries poly(std::vector<int64_t> coeffs, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  int64_t operator[](int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0; }
  const std::vector<int64_t>& coeffs() const { return c_; }

  TruncSeries truncated(int order) const;

  TruncSeries operator+(const TruncSeries& o) const;
  TruncSeries operator-(const TruncSeries& o) const;
  TruncSeries operator*(const TruncSeries& o) const;
  bool operator==(const TruncSeries& o) const = default;

  /// Multiplicative inverse; requires c0 = +-1 or a unit... exactly c0 in
  /// {1,-1} here since coefficients are integers.
  TruncSeries inverse() const;

  /// True iff all coefficients in degrees > deg vanish.
  bool isPolynomialOfDegree(int deg) const;
  /// Largest index with nonzero coefficient, or -1 for the zero series.
  int degree() const;

  std::string str(const std::string& var = "t") const;

private:
  std::vector<int64_t> c_;
};

/// b_0 = 1, b_1 = e, b_{n+1} = e b_n - b_{n-1}: the Betti numbers of the
/// residue field over the Koszul rings with r = 1, and the Hilbert data
/// of the negative syzygies in the Gorenstein classification.
struct BSequence {
  int64_t e = 0;
  std::vector<int64_t> values;  // b_0 .. b_N
};

BSequence bSequence(int64_t e, int depth);

/// The printed closed form for b_n at e >= 3 evaluates to the rational
/// number num/2^{n+1} below; it disagrees with the recurrence (it gives
/// b_0 = 0), which is why bSequence() is recurrence-defined. Exposed so
/// the discrepancy can be reported rather than silently patched.
struct ClosedFormB {
  __int128 numerator;   // sum_{j=0}^{floor((n-1)/2)} (e^2-4)^j e^{n-2j}
  int64_t log2Denominator;  // n+1
  bool matchesRecurrence;   // numerator == b_n * 2^{n+1}
};
ClosedFormB closedFormB(int64_t e, int n);

/// Dress-Kramer change of rings for a fiber product S x_k T:
/// P^R_M = P^S_M * P^T_k / (P^S_k + P^T_k - P^S_k * P^T_k).
TruncSeries dressKramer(const TruncSeries& pSM, const TruncSeries& pSk, const TruncSeries& pTk);

/// p = s * denom if the trailing `window` coefficients of the product all
/// vanish (so the series is plausibly the expansion of p/denom); absent
/// otherwise.
std::optional<TruncSeries> rationalFit(const TruncSeries& s, const TruncSeries& denom,
                                       int window = 3);

}  // namespace shortres
