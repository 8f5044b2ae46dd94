#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "cspec/engine.hpp"
#include "cspec/errors.hpp"
#include "cspec/trunc.hpp"

using namespace cspec;

TEST_CASE("config widths: exponent field covers 2x drift per round") {
  TruncConfig c = TruncConfig::make(16, 512);
  CHECK(c.exponent_bits == 12);  // ceil(log2(1024)) + 2
  CHECK(c.min_exponent() == -2048);
  CHECK(c.max_exponent() == 2047);
  CHECK(encode(1.5, c).bit_width(c) == 29);  // 1 + 1 + 12 + 15

  TruncConfig tiny = TruncConfig::make(4, 1);
  CHECK(tiny.exponent_bits == 3);
  CHECK(encode(1.0, tiny).bit_width(tiny) == 8);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(TruncConfig::make(3, 512), InvalidArgumentError);
  CHECK_THROWS_AS(TruncConfig::make(52, 512), InvalidArgumentError);
  CHECK_THROWS_AS(TruncConfig::make(16, 0), InvalidArgumentError);
}

TEST_CASE("truncating 13 to three significant bits gives 12") {
  // 1101 -> 110 * 2 = 1100. Hand-built config; make() floors b at 4.
  TruncConfig c;
  c.mantissa_bits = 3;
  c.exponent_bits = 12;
  c.t_max = 512;
  CHECK(encode(13.0, c).decode() == 12.0);
  CHECK(encode(-13.0, c).decode() == -12.0);
}

TEST_CASE("four-bit truncation rounds toward zero") {
  TruncConfig c = TruncConfig::make(4, 512);
  CHECK(encode(13.0, c).decode() == 13.0);   // exactly representable
  CHECK(encode(13.7, c).decode() == 13.0);
  CHECK(encode(29.0, c).decode() == 28.0);   // 11101 -> 1110 * 2
  CHECK(encode(-13.7, c).decode() == -13.0);
  CHECK(encode(0.0, c).decode() == 0.0);
}

TEST_CASE("zero costs one bit") {
  TruncConfig c = TruncConfig::make(16, 512);
  TruncatedReal z = encode(0.0, c);
  CHECK(z.is_zero());
  CHECK(z.bit_width(c) == 1);
  CHECK(TruncatedReal::unpack(z.pack(c), c).is_zero());
}

TEST_CASE("non-finite and out-of-range values are rejected") {
  TruncConfig c = TruncConfig::make(16, 4);  // exponent range [-16, 15]
  CHECK_THROWS_AS(encode(std::numeric_limits<double>::infinity(), c), NumericError);
  CHECK_THROWS_AS(encode(std::numeric_limits<double>::quiet_NaN(), c), NumericError);
  CHECK_THROWS_AS(encode(std::ldexp(1.0, 40), c), NumericError);
  CHECK_THROWS_AS(encode(std::ldexp(1.0, -40), c), NumericError);
  CHECK_NOTHROW(encode(std::ldexp(1.0, 14), c));
}

TEST_CASE("mass property sweep: error bound, one-sidedness, idempotence, round-trip") {
  std::mt19937_64 rng(20260815);
  std::uniform_real_distribution<double> frac(0.5, 1.0);
  std::uniform_int_distribution<int> expo(-900, 900);
  std::uniform_int_distribution<int> width(4, 51);

  for (int i = 0; i < 200000; ++i) {
    int b = width(rng);
    TruncConfig c = TruncConfig::make(b, 512);
    double x = std::ldexp(frac(rng), expo(rng));
    if (rng() & 1) x = -x;

    TruncatedReal t = encode(x, c);
    double y = t.decode();

    CHECK(std::abs(y - x) <= std::ldexp(std::abs(x), 1 - b));  // relative 2^{1-b}
    CHECK(std::abs(y) <= std::abs(x));                          // toward zero
    CHECK(y * x >= 0.0);                                        // sign preserved
    CHECK(encode(y, c).decode() == y);                          // idempotent
    CHECK(TruncatedReal::unpack(t.pack(c), c).decode() == y);   // pack round-trip
    CHECK(t.bit_width(c) == b + c.exponent_bits + 1);
  }
}

TEST_CASE("truncation is monotone") {
  TruncConfig c = TruncConfig::make(6, 512);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 50000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    CHECK(truncate(a, c) <= truncate(b, c));
  }
}

TEST_CASE("normalized mantissa invariant and raw constructor checks") {
  TruncConfig c = TruncConfig::make(8, 512);
  TruncatedReal t = encode(100.0, c);
  CHECK(t.mantissa() >= (1ULL << 7));
  CHECK(t.mantissa() < (1ULL << 8));
  CHECK_THROWS_AS(TruncatedReal::make(1, 3, 0, 8), InvalidArgumentError);   // unnormalized
  CHECK_THROWS_AS(TruncatedReal::make(2, 128, 0, 8), InvalidArgumentError); // bad sign
  CHECK(TruncatedReal::make(0, 0, 0, 8).is_zero());
}

TEST_CASE("negative exponents survive the two's complement packing") {
  TruncConfig c = TruncConfig::make(12, 512);
  double x = std::ldexp(1.25, -700);
  TruncatedReal t = encode(x, c);
  CHECK(t.exponent() < 0);
  TruncatedReal u = TruncatedReal::unpack(t.pack(c), c);
  CHECK(u.decode() == t.decode());
  CHECK(u.exponent() == t.exponent());
}

TEST_CASE("default budget scales as 32 ceil(log2 n)") {
  CHECK(default_budget_bits(2) == 32);
  CHECK(default_budget_bits(4) == 64);
  CHECK(default_budget_bits(5) == 96);
  CHECK(default_budget_bits(8) == 96);
  CHECK(default_budget_bits(9) == 128);
  CHECK(default_budget_bits(1 << 20) == 32 * 20);
}
