#pragma once

// IEEE-754 binary32/binary64 bit patterns <-> exact rationals.

#include <fpvc/core/float_format.hpp>
#include <fpvc/core/nvc.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace fpvc {

class NonFiniteLiteral : public Error {
 public:
  using Error::Error;
};

struct FpBits {
  bool sign = false;
  std::uint64_t exponent = 0;  // biased
  std::uint64_t mantissa = 0;  // trailing significand field
  friend bool operator==(const FpBits&, const FpBits&) = default;
};

inline int exponent_bias(const FloatFormat& f) { return f.emax; }

/// Value of a finite bit pattern. Throws NonFiniteLiteral for NaN/infinity.
inline Scalar decode_fp_literal(const FpBits& b, const FloatFormat& f) {
  std::uint64_t all_ones = (std::uint64_t{1} << f.exponent_bits) - 1;
  if (b.exponent == all_ones) throw NonFiniteLiteral(b.mantissa ? "NaN literal" : "infinite literal");
  Scalar m(static_cast<unsigned long>(b.mantissa));
  Scalar v;
  if (b.exponent == 0) {
    v = m * pow2(f.emin - f.mantissa_bits());
  } else {
    Scalar sig = pow2(f.mantissa_bits()) + m;
    v = sig * pow2(static_cast<long>(b.exponent) - exponent_bias(f) - f.mantissa_bits());
  }
  return b.sign ? Scalar(-v) : v;
}

inline std::uint64_t parse_bits(std::string_view tok, int& width) {
  // "#b0101" or "#x3f80"
  if (tok.size() < 3 || tok[0] != '#') throw Error("malformed bit-vector literal: " + std::string(tok));
  std::uint64_t v = 0;
  if (tok[1] == 'b') {
    width = static_cast<int>(tok.size()) - 2;
    if (width > 64) throw Error("bit-vector literal too wide");
    for (char c : tok.substr(2)) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  } else if (tok[1] == 'x') {
    width = 4 * (static_cast<int>(tok.size()) - 2);
    if (width > 64) throw Error("bit-vector literal too wide");
    v = std::stoull(std::string(tok.substr(2)), nullptr, 16);
  } else {
    throw Error("malformed bit-vector literal: " + std::string(tok));
  }
  return v;
}

/// Decodes (fp #bS #bE #bM); widths select the format (1/8/23 or 1/11/52).
inline std::pair<Scalar, FloatKind> decode_fp_literal(std::string_view sign, std::string_view exponent,
                                                      std::string_view mantissa) {
  int ws = 0, we = 0, wm = 0;
  std::uint64_t s = parse_bits(sign, ws), e = parse_bits(exponent, we), m = parse_bits(mantissa, wm);
  FloatKind k;
  if (ws == 1 && we == 8 && wm == 23) k = FloatKind::Single;
  else if (ws == 1 && we == 11 && wm == 52) k = FloatKind::Double;
  else throw Error("unsupported floating-point literal widths");
  return {decode_fp_literal(FpBits{s != 0, e, m}, FloatFormat::of(k)), k};
}

/// Decodes a whole-word pattern such as #x3f800000 of the given format.
inline Scalar decode_fp_word(std::uint64_t word, const FloatFormat& f) {
  int mb = f.mantissa_bits();
  FpBits b;
  b.mantissa = word & ((std::uint64_t{1} << mb) - 1);
  b.exponent = (word >> mb) & ((std::uint64_t{1} << f.exponent_bits) - 1);
  b.sign = ((word >> (mb + f.exponent_bits)) & 1) != 0;
  return decode_fp_literal(b, f);
}

/// Bit pattern of an exactly representable value (zero encodes as +0).
inline FpBits encode_fp_literal(const Scalar& q, const FloatFormat& f) {
  if (!is_representable(q, f)) throw Error("value not representable: " + to_fraction_string(q));
  FpBits b;
  b.sign = q < 0;
  if (q == 0) return b;
  Scalar a = abs_of(q);
  // exponent e with 2^e <= a < 2^(e+1)
  long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 2));
  if (pow2(e) > a) --e;
  if (pow2(e + 1) <= a) ++e;
  int mb = f.mantissa_bits();
  if (e < f.emin) {
    Scalar m = a / pow2(f.emin - mb);
    b.exponent = 0;
    b.mantissa = m.get_num().get_ui();
  } else {
    Scalar m = a / pow2(e - mb) - pow2(mb);
    b.exponent = static_cast<std::uint64_t>(e + exponent_bias(f));
    b.mantissa = m.get_num().get_ui();
  }
  return b;
}

inline std::string bits_string(std::uint64_t v, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if ((v >> i) & 1) s[static_cast<std::size_t>(width - 1 - i)] = '1';
  return "#b" + s;
}

/// SMT-LIB rendering (fp #bS #bE #bM).
inline std::string fp_literal_smt(const Scalar& q, const FloatFormat& f) {
  FpBits b = encode_fp_literal(q, f);
  return "(fp " + bits_string(b.sign, 1) + " " + bits_string(b.exponent, f.exponent_bits) + " " +
         bits_string(b.mantissa, f.mantissa_bits()) + ")";
}

}  // namespace fpvc
