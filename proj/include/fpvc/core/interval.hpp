#pragma once

#include <fpvc/core/scalar.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpvc {

/// Closed interval {x : lo <= x <= hi}. A missing endpoint is infinite
/// (lo = -oo, hi = +oo). Empty intervals are not representable; operations
/// that could produce one (intersection) report it through std::optional.
class Interval {
 public:
  Interval() = default;  // (-oo, +oo)
  Interval(std::optional<Scalar> lo, std::optional<Scalar> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ && hi_ && *lo_ > *hi_) throw std::invalid_argument("Interval: lo > hi");
  }
  explicit Interval(const Scalar& point) : lo_(point), hi_(point) {}

  static Interval entire() { return {}; }
  static Interval point(const Scalar& v) { return Interval(v); }
  static Interval closed(const Scalar& lo, const Scalar& hi) { return {lo, hi}; }

  bool lo_finite() const { return lo_.has_value(); }
  bool hi_finite() const { return hi_.has_value(); }
  bool bounded() const { return lo_ && hi_; }
  bool is_entire() const { return !lo_ && !hi_; }
  const std::optional<Scalar>& lo() const { return lo_; }
  const std::optional<Scalar>& hi() const { return hi_; }
  const Scalar& lo_value() const { return *lo_; }
  const Scalar& hi_value() const { return *hi_; }

  bool is_point() const { return lo_ && hi_ && *lo_ == *hi_; }
  bool contains(const Scalar& v) const { return (!lo_ || *lo_ <= v) && (!hi_ || v <= *hi_); }
  bool contains_zero() const { return contains(Scalar(0)); }

  /// this ⊆ other
  bool subset_of(const Interval& other) const {
    bool lo_ok = !other.lo_ || (lo_ && *lo_ >= *other.lo_);
    bool hi_ok = !other.hi_ || (hi_ && *hi_ <= *other.hi_);
    return lo_ok && hi_ok;
  }

  std::optional<Scalar> width() const {
    if (!bounded()) return std::nullopt;
    return Scalar(*hi_ - *lo_);
  }

  /// Largest absolute value; nullopt when unbounded.
  std::optional<Scalar> magnitude() const {
    if (!bounded()) return std::nullopt;
    return std::max(abs_of(*lo_), abs_of(*hi_));
  }

  /// Smallest absolute value.
  Scalar mignitude() const {
    if (contains_zero()) return Scalar(0);
    if (lo_ && *lo_ > 0) return *lo_;
    return abs_of(*hi_);
  }

  Scalar midpoint() const {
    if (bounded()) {
      Scalar m = (*lo_ + *hi_) / 2;
      return m;
    }
    if (lo_) return *lo_;
    if (hi_) return *hi_;
    return Scalar(0);
  }

  std::optional<Interval> intersect(const Interval& other) const {
    std::optional<Scalar> lo = lo_, hi = hi_;
    if (other.lo_ && (!lo || *other.lo_ > *lo)) lo = other.lo_;
    if (other.hi_ && (!hi || *other.hi_ < *hi)) hi = other.hi_;
    if (lo && hi && *lo > *hi) return std::nullopt;
    return Interval(std::move(lo), std::move(hi));
  }

  Interval hull(const Interval& other) const {
    std::optional<Scalar> lo, hi;
    if (lo_ && other.lo_) lo = std::min(*lo_, *other.lo_);
    if (hi_ && other.hi_) hi = std::max(*hi_, *other.hi_);
    return {std::move(lo), std::move(hi)};
  }

  /// Interval with both endpoints inflated by r >= 0.
  Interval inflate(const Scalar& r) const {
    std::optional<Scalar> lo, hi;
    if (lo_) lo = *lo_ - r;
    if (hi_) hi = *hi_ + r;
    return {std::move(lo), std::move(hi)};
  }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

  std::string to_string() const {
    std::string s = lo_ ? "[" + to_display_string(*lo_) : "(-oo";
    s += ", ";
    s += hi_ ? to_display_string(*hi_) + "]" : "oo)";
    return s;
  }

 private:
  std::optional<Scalar> lo_;
  std::optional<Scalar> hi_;
};

inline std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << iv.to_string(); }

namespace detail {

// Extended-real value used for interval endpoint products: inf = -1, 0, +1.
struct ExtReal {
  Scalar v;
  int inf = 0;
};

inline ExtReal ext_mul(const ExtReal& a, const ExtReal& b) {
  // 0 * oo = 0 is the usual convention for interval endpoint products.
  if (a.inf == 0 && b.inf == 0) return {a.v * b.v, 0};
  int sa = a.inf != 0 ? a.inf : sgn(a.v);
  int sb = b.inf != 0 ? b.inf : sgn(b.v);
  if (sa == 0 || sb == 0) return {Scalar(0), 0};
  return {Scalar(0), sa * sb};
}

inline bool ext_less(const ExtReal& a, const ExtReal& b) {
  if (a.inf != b.inf) return a.inf < b.inf;
  if (a.inf != 0) return false;
  return a.v < b.v;
}

inline ExtReal lo_ext(const Interval& x) { return x.lo() ? ExtReal{*x.lo(), 0} : ExtReal{Scalar(0), -1}; }
inline ExtReal hi_ext(const Interval& x) { return x.hi() ? ExtReal{*x.hi(), 0} : ExtReal{Scalar(0), 1}; }

}  // namespace detail

inline Interval operator-(const Interval& a) {
  std::optional<Scalar> lo, hi;
  if (a.hi()) lo = Scalar(-*a.hi());
  if (a.lo()) hi = Scalar(-*a.lo());
  return {std::move(lo), std::move(hi)};
}

inline Interval operator+(const Interval& a, const Interval& b) {
  std::optional<Scalar> lo, hi;
  if (a.lo() && b.lo()) lo = Scalar(*a.lo() + *b.lo());
  if (a.hi() && b.hi()) hi = Scalar(*a.hi() + *b.hi());
  return {std::move(lo), std::move(hi)};
}

inline Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

inline Interval operator*(const Interval& a, const Interval& b) {
  using detail::ExtReal;
  // fast path for the common bounded case
  if (a.bounded() && b.bounded()) {
    Scalar p[4] = {*a.lo() * *b.lo(), *a.lo() * *b.hi(), *a.hi() * *b.lo(), *a.hi() * *b.hi()};
    auto [mn, mx] = std::minmax_element(p, p + 4);
    return Interval::closed(*mn, *mx);
  }
  ExtReal al = detail::lo_ext(a), ah = detail::hi_ext(a), bl = detail::lo_ext(b), bh = detail::hi_ext(b);
  ExtReal p[4] = {detail::ext_mul(al, bl), detail::ext_mul(al, bh), detail::ext_mul(ah, bl), detail::ext_mul(ah, bh)};
  const ExtReal* mn = &p[0];
  const ExtReal* mx = &p[0];
  for (auto& e : p) {
    if (detail::ext_less(e, *mn)) mn = &e;
    if (detail::ext_less(*mx, e)) mx = &e;
  }
  std::optional<Scalar> lo, hi;
  if (mn->inf == 0) lo = mn->v;
  if (mx->inf == 0) hi = mx->v;
  return {std::move(lo), std::move(hi)};
}

/// Division; a divisor interval containing zero gives (-oo, +oo).
inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) return Interval::entire();
  std::optional<Scalar> rlo, rhi;
  if (b.hi()) rlo = Scalar(1 / *b.hi());
  else rlo = Scalar(0);
  if (b.lo()) rhi = Scalar(1 / *b.lo());
  else rhi = Scalar(0);
  return a * Interval(std::move(rlo), std::move(rhi));
}

inline Interval abs(const Interval& a) {
  if (a.lo() && *a.lo() >= 0) return a;
  if (a.hi() && *a.hi() <= 0) return -a;
  std::optional<Scalar> hi;
  if (a.bounded()) hi = std::max(Scalar(-*a.lo()), *a.hi());
  return {Scalar(0), std::move(hi)};
}

inline Interval min(const Interval& a, const Interval& b) {
  std::optional<Scalar> lo, hi;
  if (a.lo() && b.lo()) lo = std::min(*a.lo(), *b.lo());
  if (a.hi() || b.hi()) {
    if (a.hi() && b.hi()) hi = std::min(*a.hi(), *b.hi());
    else hi = a.hi() ? a.hi() : b.hi();
  }
  return {std::move(lo), std::move(hi)};
}

inline Interval max(const Interval& a, const Interval& b) { return -min(-a, -b); }

/// Integer power with n >= 0.
inline Interval pow(const Interval& a, unsigned n) {
  if (n == 0) return Interval::point(Scalar(1));
  auto pw = [n](const Scalar& v) {
    Scalar r(1);
    mpz_pow_ui(r.get_num_mpz_t(), v.get_num_mpz_t(), n);
    mpz_pow_ui(r.get_den_mpz_t(), v.get_den_mpz_t(), n);
    return r;
  };
  std::optional<Scalar> lo, hi;
  if (n % 2 == 1) {
    if (a.lo()) lo = pw(*a.lo());
    if (a.hi()) hi = pw(*a.hi());
    return {std::move(lo), std::move(hi)};
  }
  Interval m = abs(a);
  lo = pw(*m.lo());
  if (m.hi()) hi = pw(*m.hi());
  return {std::move(lo), std::move(hi)};
}

using Box = std::map<std::string, Interval>;

}  // namespace fpvc
