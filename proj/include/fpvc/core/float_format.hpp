#pragma once

#include <fpvc/core/scalar.hpp>

#include <string>
#include <string_view>

namespace fpvc {

enum class FloatKind : unsigned char { Single, Double };

/// Ties-to-even or ties-away-from-zero; shared by FP rounding and integer rounding.
enum class RoundMode : unsigned char { NearestEven, NearestAway };
using IntRoundMode = RoundMode;

inline std::string_view to_string(FloatKind k) { return k == FloatKind::Single ? "Single" : "Double"; }
inline std::string_view smt_token(RoundMode m) { return m == RoundMode::NearestEven ? "RNE" : "RNA"; }

/// Half-ulp rounding model of one IEEE-754 binary format:
/// |rnd(x) - x| <= eps * |x| + zeta for every x with |x| <= max_finite.
struct FloatFormat {
  FloatKind kind = FloatKind::Single;
  int precision = 24;  // significand bits including the hidden bit
  int emin = -126;     // exponent of the smallest normal number
  int emax = 127;
  int exponent_bits = 8;
  Scalar eps;
  Scalar zeta;
  Scalar max_finite;
  Scalar min_finite;

  static FloatFormat single_format() { return make(FloatKind::Single, 24, -126, 127, 8); }
  static FloatFormat double_format() { return make(FloatKind::Double, 53, -1022, 1023, 11); }
  static FloatFormat of(FloatKind k) { return k == FloatKind::Single ? single_format() : double_format(); }

  int mantissa_bits() const { return precision - 1; }

 private:
  static FloatFormat make(FloatKind kind, int p, int emin, int emax, int ebits) {
    FloatFormat f;
    f.kind = kind;
    f.precision = p;
    f.emin = emin;
    f.emax = emax;
    f.exponent_bits = ebits;
    f.eps = pow2(-p);
    f.zeta = pow2(emin - p);  // half of the smallest subnormal
    f.max_finite = (Scalar(2) - pow2(1 - p)) * pow2(emax);
    f.min_finite = -f.max_finite;
    return f;
  }
};

/// The two formats in use, possibly with overridden eps/zeta (configuration).
struct FormatTable {
  FloatFormat single = FloatFormat::single_format();
  FloatFormat dbl = FloatFormat::double_format();
  const FloatFormat& operator[](FloatKind k) const { return k == FloatKind::Single ? single : dbl; }
};

/// True when q is exactly a finite value of the format (subnormals included).
inline bool is_representable(const Scalar& q, const FloatFormat& f) {
  if (q == 0) return true;
  if (abs_of(q) > f.max_finite) return false;
  BigInt den = q.get_den();
  // denominator must be a power of two
  if ((den & (den - 1)) != 0) return false;
  long k = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;  // q = num / 2^k
  BigInt num = abs(q.get_num());
  long t = static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
  long high = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) - 1 - k;  // position of leading bit
  long low = t - k;                                                           // position of trailing bit
  long ulp_exp = std::max<long>(high, f.emin) - (f.precision - 1);
  return low >= ulp_exp;
}

}  // namespace fpvc
