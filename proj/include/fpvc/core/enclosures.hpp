#pragma once

// Verified enclosures of the transcendental functions and pi, computed with
// MPFR under directed rounding and returned as exact rationals.

#include <fpvc/core/interval.hpp>

#include <mpfr.h>

#include <map>
#include <mutex>
#include <utility>

namespace fpvc {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  BigFloat(const Scalar& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), rnd);
  }
  ~BigFloat() { mpfr_clear(v_); }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Scalar to_scalar() const {
    Scalar q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

 private:
  mpfr_t v_;
};

namespace enclosure {

inline constexpr long kMinPrec = 16;

inline mpfr_prec_t clamp_prec(unsigned prec) { return static_cast<mpfr_prec_t>(prec < kMinPrec ? kMinPrec : prec); }

inline Scalar round_down(const Scalar& q, unsigned prec) { return BigFloat(q, clamp_prec(prec), MPFR_RNDD).to_scalar(); }
inline Scalar round_up(const Scalar& q, unsigned prec) { return BigFloat(q, clamp_prec(prec), MPFR_RNDU).to_scalar(); }

/// Rational bounds [lo, hi] with lo < pi < hi.
inline std::pair<Scalar, Scalar> pi_bounds(unsigned prec) {
  static std::mutex mu;
  static std::map<unsigned, std::pair<Scalar, Scalar>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(prec);
  if (it != cache.end()) return it->second;
  BigFloat lo(clamp_prec(prec)), hi(clamp_prec(prec));
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  auto r = std::make_pair(lo.to_scalar(), hi.to_scalar());
  cache.emplace(prec, r);
  return r;
}

inline Interval pi(unsigned prec) {
  auto [lo, hi] = pi_bounds(prec);
  return Interval::closed(lo, hi);
}

using MpfrFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

inline Scalar apply(MpfrFn fn, const Scalar& x, unsigned prec, mpfr_rnd_t rnd) {
  // x is already representable at prec (callers round the endpoints outward first)
  BigFloat in(x, clamp_prec(prec), rnd);
  BigFloat out(clamp_prec(prec));
  fn(out.get(), in.get(), rnd);
  return out.to_scalar();
}

inline bool contains_integer(const Interval& t) {
  if (!t.bounded()) return true;
  return ceil_of(*t.lo()) <= floor_of(*t.hi());
}

/// sin or cos over [a, b]: endpoint values plus any extremum whose location
/// k*pi + offset may lie inside the interval (decided against the pi enclosure).
inline Interval periodic(const Interval& x, unsigned prec, bool is_sin) {
  Interval unit = Interval::closed(Scalar(-1), Scalar(1));
  if (!x.bounded()) return unit;
  Scalar a = round_down(*x.lo(), prec);
  Scalar b = round_up(*x.hi(), prec);
  auto [pl, pu] = pi_bounds(prec);
  if (b - a >= 2 * pl) return unit;
  MpfrFn fn = is_sin ? mpfr_sin : mpfr_cos;
  Scalar lo = std::min(apply(fn, a, prec, MPFR_RNDD), apply(fn, b, prec, MPFR_RNDD));
  Scalar hi = std::max(apply(fn, a, prec, MPFR_RNDU), apply(fn, b, prec, MPFR_RNDU));
  // t = x / pi ranges over q
  Interval q = Interval::closed(a, b) / Interval::closed(pl, pu);
  Scalar max_off = is_sin ? Scalar(1, 2) : Scalar(0);  // maxima at t = 2k + max_off
  Scalar min_off = is_sin ? Scalar(-1, 2) : Scalar(1);  // minima at t = 2k + min_off
  Interval half = Interval::point(Scalar(1, 2));
  if (contains_integer((q - Interval::point(max_off)) * half)) hi = 1;
  if (contains_integer((q - Interval::point(min_off)) * half)) lo = -1;
  if (lo < -1) lo = -1;
  if (hi > 1) hi = 1;
  return Interval::closed(lo, hi);
}

inline Interval sin(const Interval& x, unsigned prec) { return periodic(x, prec, true); }
inline Interval cos(const Interval& x, unsigned prec) { return periodic(x, prec, false); }

// exp of arguments beyond this magnitude is clamped to keep rationals small
inline const Scalar& exp_clamp() {
  static const Scalar c(4096);
  return c;
}

inline Interval exp(const Interval& x, unsigned prec) {
  std::optional<Scalar> lo, hi;
  if (x.lo()) {
    Scalar a = round_down(*x.lo(), prec);
    lo = a < -exp_clamp() ? Scalar(0) : apply(mpfr_exp, a, prec, MPFR_RNDD);
  } else {
    lo = Scalar(0);
  }
  if (x.hi()) {
    Scalar b = round_up(*x.hi(), prec);
    if (b <= exp_clamp()) hi = apply(mpfr_exp, b, prec, MPFR_RNDU);
  }
  return {std::move(lo), std::move(hi)};
}

/// Partial: any argument interval reaching x <= 0 gives (-oo, +oo).
inline Interval log(const Interval& x, unsigned prec) {
  if (!x.lo() || *x.lo() <= 0) return Interval::entire();
  Scalar a = round_down(*x.lo(), prec);
  if (a <= 0) return Interval::entire();
  std::optional<Scalar> hi;
  if (x.hi()) hi = apply(mpfr_log, round_up(*x.hi(), prec), prec, MPFR_RNDU);
  return {apply(mpfr_log, a, prec, MPFR_RNDD), std::move(hi)};
}

/// Partial: any argument interval reaching x < 0 gives (-oo, +oo).
inline Interval sqrt(const Interval& x, unsigned prec) {
  if (!x.lo() || *x.lo() < 0) return Interval::entire();
  std::optional<Scalar> hi;
  if (x.hi()) hi = apply(mpfr_sqrt, round_up(*x.hi(), prec), prec, MPFR_RNDU);
  return {apply(mpfr_sqrt, round_down(*x.lo(), prec), prec, MPFR_RNDD), std::move(hi)};
}

}  // namespace enclosure
}  // namespace fpvc
