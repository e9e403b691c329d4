#include "rqmc/digits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rqmc {

namespace {

void check_base(std::uint32_t base) {
  if (base < 2) throw std::invalid_argument("base must be >= 2, got " + std::to_string(base));
}

}  // namespace

DigitVector::DigitVector(std::uint32_t base, std::vector<std::uint32_t> digits)
    : base_(base), digits_(std::move(digits)) {
  check_base(base_);
  if (digits_.empty()) throw std::invalid_argument("digit depth must be >= 1");
  for (auto d : digits_) {
    if (d >= base_) throw std::invalid_argument("digit " + std::to_string(d) + " out of range for base " + std::to_string(base_));
  }
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exponent) {
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (p > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::overflow_error(std::to_string(base) + "^" + std::to_string(exponent) + " overflows 64 bits");
    p *= base;
  }
  return p;
}

std::size_t max_depth(std::uint32_t base) {
  check_base(base);
  std::size_t k = 0;
  std::uint64_t p = 1;
  while (p <= std::numeric_limits<std::uint64_t>::max() / base) {
    p *= base;
    ++k;
  }
  return k;
}

std::size_t default_depth(std::uint32_t base) {
  check_base(base);
  // Powers of two are handled in integers; the floating ratio would land on an integer there.
  std::size_t bits_per_digit = 0;
  if ((base & (base - 1)) == 0) {
    while ((1u << bits_per_digit) < base) ++bits_per_digit;
    return (53 + bits_per_digit - 1) / bits_per_digit;
  }
  return static_cast<std::size_t>(std::ceil(53.0 * std::log(2.0) / std::log(static_cast<double>(base))));
}

namespace {

// x = mant / 2^shift with a 53-bit integer mantissa; shift < 0 never occurs for x < 1.
struct Dyadic {
  std::uint64_t mant = 0;
  int shift = 0;
};

Dyadic dyadic(double x) {
  int e = 0;
  const double f = std::frexp(x, &e);  // x = f * 2^e, f in [0.5, 1)
  return {static_cast<std::uint64_t>(std::ldexp(f, 53)), 53 - e};
}

}  // namespace

std::uint64_t scaled_floor(double x, std::uint64_t d) {
  if (!(x > 0.0)) return 0;
  const Dyadic q = dyadic(x);
  if (q.shift >= 128) return 0;  // mant * d < 2^117
  const unsigned __int128 product = static_cast<unsigned __int128>(q.mant) * d;
  return static_cast<std::uint64_t>(product >> q.shift);
}

double grid_value(std::uint64_t n, std::uint64_t d) {
  // Both integers are exact in long double; one rounding to double after that.
  return static_cast<double>(static_cast<long double>(n) / static_cast<long double>(d));
}

std::uint64_t grid_numerator(double x, std::uint32_t base, std::size_t depth) {
  const std::uint64_t full = checked_pow(base, depth);
  if (!(x > 0.0)) return 0;
  const Dyadic q = dyadic(x);
  if (q.shift >= 128) return 0;  // x < 2^-74 is nowhere near a nonzero grid point
  const unsigned __int128 one = static_cast<unsigned __int128>(1) << q.shift;
  std::uint64_t level = 1;
  for (std::size_t l = 0; l <= depth; ++l) {
    // x * level = s + rem / 2^shift exactly. A grid point within half an ulp of x
    // lies within about level / 2 of the product, so only then is the rounding checked.
    const unsigned __int128 product = static_cast<unsigned __int128>(q.mant) * level;
    const auto s = static_cast<std::uint64_t>(product >> q.shift);
    const unsigned __int128 rem = product & (one - 1);
    const unsigned __int128 reach = level / 2 + level / 1024 + 1;  // slack for long double rounding
    if (rem <= reach && grid_value(s, level) == x) return s * (full / level);
    if (one - rem <= reach && s + 1 < level && grid_value(s + 1, level) == x) return (s + 1) * (full / level);
    if (l < depth) level *= base;
  }
  return scaled_floor(x, full);
}

DigitVector expand(double x, std::uint32_t base, std::size_t depth) {
  check_base(base);
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("expand: x must lie in [0,1), got " + std::to_string(x));
  if (depth == 0) throw std::invalid_argument("expand: depth must be >= 1");
  if (depth > max_depth(base))
    throw std::invalid_argument("expand: depth " + std::to_string(depth) + " exceeds 64-bit range for base " + std::to_string(base));
  std::uint64_t n = grid_numerator(x, base, depth);
  std::vector<std::uint32_t> digits(depth);
  for (std::size_t k = depth; k-- > 0;) {
    digits[k] = static_cast<std::uint32_t>(n % base);
    n /= base;
  }
  return DigitVector(base, std::move(digits));
}

std::uint64_t digits_numerator(std::span<const std::uint32_t> digits, std::uint32_t base) {
  std::uint64_t n = 0;
  for (auto d : digits) n = n * base + d;
  return n;
}

double digits_to_value(std::span<const std::uint32_t> digits, std::uint32_t base) {
  if (digits.size() > max_depth(base))
    throw std::invalid_argument("digit depth " + std::to_string(digits.size()) + " exceeds 64-bit range for base " + std::to_string(base));
  const std::uint64_t n = digits_numerator(digits, base);
  const std::uint64_t denominator = checked_pow(base, digits.size());
  double x = grid_value(n, denominator);
  if (x >= 1.0) x = std::nextafter(1.0, 0.0);
  return x;
}

double value(const DigitVector& dv) { return digits_to_value(dv.digits(), dv.base()); }

}  // namespace rqmc
