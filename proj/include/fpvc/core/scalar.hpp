#pragma once

// Exact rational numbers. Every numeric literal, bound and error cushion in
// the IR is a Scalar; nothing in the IR is ever rounded.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fpvc {

using Scalar = mpq_class;
using BigInt = mpz_class;

inline Scalar make_scalar(long num, unsigned long den = 1) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

/// 2^e for any (possibly negative) exponent.
inline Scalar pow2(long e) {
  Scalar q(1);
  if (e >= 0)
    mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return q;
}

inline Scalar pow10(long e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Scalar(p);
  Scalar q(BigInt(1), p);
  q.canonicalize();
  return q;
}

inline BigInt floor_of(const Scalar& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigInt ceil_of(const Scalar& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Scalar& q) { return q.get_den() == 1; }

inline Scalar abs_of(const Scalar& q) { return q < 0 ? Scalar(-q) : q; }

/// Parses integers, decimals ("0.5", "-1.769513e-8", ".5") and fractions
/// ("6851933/8388608"). The result is exact. Returns nullopt on malformed text.
inline std::optional<Scalar> parse_scalar(std::string_view text) {
  std::string s(text);
  // unicode minus sign
  for (std::size_t pos; (pos = s.find("\xE2\x88\x92")) != std::string::npos;) s.replace(pos, 3, "-");
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    auto num = parse_scalar(s.substr(0, slash));
    auto den = parse_scalar(s.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    Scalar q = *num / *den;
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return std::nullopt;
  long exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return std::nullopt;
    ++i;
    std::string e = s.substr(i);
    if (e.empty()) return std::nullopt;
    std::size_t used = 0;
    try {
      exp10 = std::stol(e, &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (used != e.size()) return std::nullopt;
  }
  BigInt mant(digits, 10);
  Scalar q(mant);
  q *= pow10(exp10 - frac_digits);
  if (neg) q = -q;
  return q;
}

inline std::string to_fraction_string(const Scalar& q) {
  if (is_integer(q)) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Exact decimal expansion when the denominator has only factors 2 and 5 and
/// the expansion needs at most max_frac_digits fractional digits.
inline std::optional<std::string> to_exact_decimal(const Scalar& q, int max_frac_digits = 40) {
  if (is_integer(q)) return q.get_num().get_str();
  BigInt den = q.get_den();
  long twos = static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), BigInt(2).get_mpz_t()));
  long fives = static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), BigInt(5).get_mpz_t()));
  if (den != 1) return std::nullopt;
  long k = std::max(twos, fives);
  if (k > max_frac_digits) return std::nullopt;
  Scalar scaled = abs_of(q) * pow10(k);
  std::string digits = scaled.get_num().get_str();
  if (static_cast<long>(digits.size()) <= k) digits = std::string(static_cast<std::size_t>(k) - digits.size() + 1, '0') + digits;
  std::string out = digits.substr(0, digits.size() - static_cast<std::size_t>(k)) + "." + digits.substr(digits.size() - static_cast<std::size_t>(k));
  return (q < 0 ? "-" : "") + out;
}

/// Human-facing rendering: short exact decimals ("-0.5") where possible,
/// otherwise the reduced fraction ("-6851933/8388608").
inline std::string to_display_string(const Scalar& q) {
  if (auto d = to_exact_decimal(q, 10)) return *d;
  return to_fraction_string(q);
}

/// q rounded to `digits` significant decimal digits, towards +inf when up is
/// true and towards -inf otherwise.
inline Scalar round_decimal(const Scalar& q, bool up, int digits) {
  if (q == 0) return q;
  Scalar a = abs_of(q);
  long e10 = 0;
  while (a >= pow10(e10 + 1)) ++e10;
  while (a < pow10(e10)) --e10;
  Scalar scaled = q * pow10(digits - 1 - e10);
  BigInt m = up ? ceil_of(scaled) : floor_of(scaled);
  return Scalar(m) * pow10(e10 - digits + 1);
}

inline double to_double(const Scalar& q) { return q.get_d(); }

}  // namespace fpvc
