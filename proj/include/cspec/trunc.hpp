#pragma once

#include <cstdint>

#include "cspec/errors.hpp"

namespace cspec {

// Width configuration for truncated reals. exponent_bits is sized so that
// values can drift by a factor of 2 per round for t_max rounds in either
// direction without leaving the representable range.
struct TruncConfig {
  int mantissa_bits = 0;  // b
  int exponent_bits = 0;
  long t_max = 0;

  static TruncConfig make(int b, long t_max);

  long min_exponent() const { return -(1L << (exponent_bits - 1)); }
  long max_exponent() const { return (1L << (exponent_bits - 1)) - 1; }
};

// Sign/mantissa/exponent value: sign * mantissa * 2^(exponent - b), with
// mantissa in [2^(b-1), 2^b) for nonzero values. Produced by round-toward-zero
// truncation, so decode(encode(x)) is within relative 2^(1-b) of x and never
// exceeds it in magnitude.
class TruncatedReal {
 public:
  TruncatedReal() = default;  // canonical zero

  int sign() const { return sign_; }
  std::uint64_t mantissa() const { return mantissa_; }
  long exponent() const { return exponent_; }
  bool is_zero() const { return sign_ == 0; }

  double decode() const;

  // Serialized width: zero-flag(1), then for nonzero sign(1) +
  // exponent(two's complement) + mantissa with the leading bit implicit.
  int bit_width(const TruncConfig& cfg) const;

  // Round-trip through the serialized layout above. Widths beyond 64 bits are
  // rejected; the defaults stay well under.
  std::uint64_t pack(const TruncConfig& cfg) const;
  static TruncatedReal unpack(std::uint64_t bits, const TruncConfig& cfg);

  static TruncatedReal make(int sign, std::uint64_t mantissa, long exponent, int b);

 private:
  int sign_ = 0;
  std::uint64_t mantissa_ = 0;
  long exponent_ = 0;
  int b_ = 0;
};

// Truncates x to cfg.mantissa_bits significant bits, rounding toward zero.
// Throws NumericError if x is not finite or its exponent falls outside the
// configured range.
TruncatedReal encode(double x, const TruncConfig& cfg);

inline double truncate(double x, const TruncConfig& cfg) { return encode(x, cfg).decode(); }

}  // namespace cspec
