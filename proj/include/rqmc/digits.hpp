#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rqmc {

/// Finite base-b expansion x = sum_k digits[k-1] * b^-k of a point in [0,1).
class DigitVector {
 public:
  DigitVector(std::uint32_t base, std::vector<std::uint32_t> digits);

  std::uint32_t base() const { return base_; }
  std::size_t depth() const { return digits_.size(); }
  std::span<const std::uint32_t> digits() const { return digits_; }
  std::uint32_t operator[](std::size_t k) const { return digits_[k]; }

  friend bool operator==(const DigitVector&, const DigitVector&) = default;

 private:
  std::uint32_t base_;
  std::vector<std::uint32_t> digits_;
};

/// Default digit depth: enough base-b digits to cover a 53-bit significand.
std::size_t default_depth(std::uint32_t base);

/// Largest depth K with base^K representable in 64 bits.
std::size_t max_depth(std::uint32_t base);

/// base^exponent; throws std::overflow_error when it does not fit in 64 bits.
std::uint64_t checked_pow(std::uint64_t base, std::size_t exponent);

/// Exact floor(x * d) for x in [0,1), computed without rounding the product.
std::uint64_t scaled_floor(double x, std::uint64_t d);

/// Nearest double to n / d (no clamping).
double grid_value(std::uint64_t n, std::uint64_t d);

/// Numerator of the depth-digit expansion of x. A double that is the rounded
/// image of a grid point n / b^L (L <= depth, coarsest L first) stands for that
/// grid point; any other x is truncated exactly. This keeps 1/3 in base 3 at
/// digits (1,0,...) although the double lies just below one third.
std::uint64_t grid_numerator(double x, std::uint32_t base, std::size_t depth);

/// Greedy (floor) expansion of x to `depth` digits, with grid snapping as in grid_numerator.
DigitVector expand(double x, std::uint32_t base, std::size_t depth);

/// sum_k digits[k-1] * b^-k, rounded to double and kept strictly below 1.
double value(const DigitVector& dv);

/// Same as value() for a raw digit span.
double digits_to_value(std::span<const std::uint32_t> digits, std::uint32_t base);

/// Integer numerator n with value = n / base^digits.size().
std::uint64_t digits_numerator(std::span<const std::uint32_t> digits, std::uint32_t base);

}  // namespace rqmc
