#include "cspec/trunc.hpp"

#include <cmath>
#include <string>

namespace cspec {

TruncConfig TruncConfig::make(int b, long t_max) {
  if (b < 4) throw InvalidArgumentError("mantissa width must be >= 4, got " + std::to_string(b));
  if (b > 51) throw InvalidArgumentError("mantissa width must be <= 51, got " + std::to_string(b));
  if (t_max < 1) throw InvalidArgumentError("t_max must be >= 1");
  TruncConfig cfg;
  cfg.mantissa_bits = b;
  cfg.t_max = t_max;
  int eb = 0;
  while ((1L << eb) < 2 * t_max) ++eb;  // ceil(log2(2*t_max))
  cfg.exponent_bits = eb + 2;
  return cfg;
}

TruncatedReal TruncatedReal::make(int sign, std::uint64_t mantissa, long exponent, int b) {
  TruncatedReal t;
  if (sign == 0) return t;
  if (sign != 1 && sign != -1) throw InvalidArgumentError("sign must be -1, 0 or 1");
  std::uint64_t lo = 1ULL << (b - 1), hi = 1ULL << b;
  if (mantissa < lo || mantissa >= hi)
    throw InvalidArgumentError("mantissa out of normalized range");
  t.sign_ = sign;
  t.mantissa_ = mantissa;
  t.exponent_ = exponent;
  t.b_ = b;
  return t;
}

double TruncatedReal::decode() const {
  if (sign_ == 0) return 0.0;
  return sign_ * std::ldexp((double)mantissa_, (int)(exponent_ - b_));
}

int TruncatedReal::bit_width(const TruncConfig& cfg) const {
  if (sign_ == 0) return 1;
  return 1 + 1 + cfg.exponent_bits + (cfg.mantissa_bits - 1);
}

std::uint64_t TruncatedReal::pack(const TruncConfig& cfg) const {
  if (cfg.mantissa_bits + cfg.exponent_bits + 1 > 64)
    throw NumericError("serialized width exceeds 64 bits");
  // The zero flag sits above the sign/exponent/mantissa fields so unpack can
  // test it without knowing whether the wire width was the 1-bit short form.
  if (sign_ == 0) return 1ULL << (cfg.exponent_bits + cfg.mantissa_bits);
  std::uint64_t bits = 0;  // zero flag clear
  bits = (bits << 1) | (sign_ < 0 ? 1 : 0);
  std::uint64_t emask = (1ULL << cfg.exponent_bits) - 1;
  bits = (bits << cfg.exponent_bits) | ((std::uint64_t)exponent_ & emask);
  std::uint64_t frac = mantissa_ & ((1ULL << (cfg.mantissa_bits - 1)) - 1);  // drop implicit bit
  bits = (bits << (cfg.mantissa_bits - 1)) | frac;
  return bits;
}

TruncatedReal TruncatedReal::unpack(std::uint64_t bits, const TruncConfig& cfg) {
  int fw = cfg.mantissa_bits - 1;
  std::uint64_t frac = bits & ((1ULL << fw) - 1);
  bits >>= fw;
  std::uint64_t eraw = bits & ((1ULL << cfg.exponent_bits) - 1);
  bits >>= cfg.exponent_bits;
  int neg = (int)(bits & 1);
  bits >>= 1;
  if (bits & 1) return TruncatedReal();  // zero flag
  long e = (long)eraw;
  if (e > cfg.max_exponent()) e -= 1L << cfg.exponent_bits;  // sign-extend
  std::uint64_t mant = frac | (1ULL << fw);
  return make(neg ? -1 : 1, mant, e, cfg.mantissa_bits);
}

TruncatedReal encode(double x, const TruncConfig& cfg) {
  if (!std::isfinite(x)) throw NumericError("cannot encode non-finite value");
  if (x == 0.0) return TruncatedReal();
  int b = cfg.mantissa_bits;
  int e;
  double frac = std::frexp(std::fabs(x), &e);  // frac in [0.5, 1)
  if (e < cfg.min_exponent())
    throw NumericError("exponent underflow: value " + std::to_string(x) +
                       " below configured range");
  if (e > cfg.max_exponent())
    throw NumericError("exponent overflow: value " + std::to_string(x) +
                       " above configured range");
  auto mant = (std::uint64_t)std::floor(std::ldexp(frac, b));
  return TruncatedReal::make(x < 0 ? -1 : 1, mant, e, b);
}

}  // namespace cspec
