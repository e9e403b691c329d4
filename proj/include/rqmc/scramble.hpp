#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rqmc/digits.hpp"
#include "rqmc/nets.hpp"
#include "rqmc/random.hpp"

namespace rqmc {

enum class ScramblerKind { Nested, Jittered, MatousekLinear, TezukaIBinomial, OwenStriped };

/// CLI name: nested, jittered, matousek, tezuka, striped.
std::string_view scrambler_name(ScramblerKind kind);
ScramblerKind parse_scrambler_kind(std::string_view name);
constexpr bool is_linear(ScramblerKind kind) {
  return kind == ScramblerKind::MatousekLinear || kind == ScramblerKind::TezukaIBinomial ||
         kind == ScramblerKind::OwenStriped;
}

bool is_prime(std::uint32_t n);

struct ScramblerSpec {
  ScramblerKind kind = ScramblerKind::Nested;
  std::uint32_t base = 2;
  std::size_t depth = 0;  // 0 selects default_depth(base)
  bool shift = true;      // linear kinds only

  std::size_t effective_depth() const { return depth == 0 ? default_depth(base) : depth; }

  /// Throws std::invalid_argument for a non-prime base on a linear kind or a bad depth.
  void validate() const;

  /// Row label, e.g. "matousek" or "matousek-noshift".
  std::string label() const;
};

// ---------------------------------------------------------------------------
// Fully nested scrambling

/// Fisher-Yates shuffle of perm, which is first reset to the identity.
void draw_permutation(SplitMix64& gen, std::span<std::uint32_t> perm);

/// Nested scrambling with caller-supplied permutations.
///
/// fill(level, prefix, perm) must write a permutation of Z_b into perm for the
/// digit at `level` (1-based), where `prefix` is the integer value of the
/// input digits alpha_1..alpha_{level-1}. Equal (level, prefix) pairs must
/// produce equal permutations; this is what ties points sharing a prefix to
/// the same node of the permutation tree.
template <class PermutationFn>
NetPoints scramble_nested_with(const NetPoints& pts, std::size_t depth, PermutationFn&& fill) {
  if (depth < pts.m)
    throw std::invalid_argument("nested scrambling: depth " + std::to_string(depth) + " < m = " + std::to_string(pts.m));
  if (depth > max_depth(pts.base)) throw std::invalid_argument("nested scrambling: depth exceeds 64-bit digit range");
  const std::uint32_t b = pts.base;
  const std::size_t n = pts.size();
  NetPoints out{b, pts.m, std::vector<double>(n)};
  std::vector<std::uint32_t> perm(b);
  std::vector<std::uint32_t> scrambled(depth);
  for (std::size_t i = 0; i < n; ++i) {
    const DigitVector input = expand(pts.points[i], b, depth);
    std::uint64_t prefix = 0;
    std::uint64_t stratum = 0;
    for (std::size_t k = 0; k < depth; ++k) {
      std::iota(perm.begin(), perm.end(), 0u);
      fill(k + 1, prefix, std::span<std::uint32_t>(perm));
      scrambled[k] = perm[input[k]];
      if (k < pts.m) stratum = stratum * b + scrambled[k];
      prefix = prefix * b + input[k];
    }
    out.points[i] = place_in_stratum(digits_to_value(scrambled, b), stratum, n);
  }
  return out;
}

/// Nested scrambling with permutations keyed by (level, prefix) on the stream.
NetPoints scramble_nested(const NetPoints& pts, const RandomStream& rs, std::size_t depth);

// ---------------------------------------------------------------------------
// Jittered sampling

/// Point in stratum i moves to (i + offsets[i]) / N; input index order is kept.
NetPoints jitter_with(const NetPoints& pts, std::span<const double> offsets);

/// One Uniform[0,1) offset per stratum, drawn in stratum order.
NetPoints scramble_jittered(const NetPoints& pts, RandomStream& rs);

// ---------------------------------------------------------------------------
// Linear (lower-triangular matrix) scrambling

/// A K x K lower-triangular digit matrix over Z_b plus an additive digit shift.
struct LinearScramble {
  std::uint32_t base = 2;
  std::size_t depth = 0;
  std::vector<std::uint32_t> matrix;  // row-major, depth * depth
  std::vector<std::uint32_t> shift;   // depth digits, all zero when shift is off

  std::uint32_t at(std::size_t row, std::size_t col) const { return matrix[row * depth + col]; }
  std::uint32_t& at(std::size_t row, std::size_t col) { return matrix[row * depth + col]; }

  static LinearScramble identity(std::uint32_t base, std::size_t depth);
};

/// Draws a matrix of the given linear family (and a shift vector when spec.shift).
LinearScramble draw_linear(const ScramblerSpec& spec, RandomStream& rs);

/// x = M a + shift mod b applied to every point's digits.
NetPoints apply_linear(const NetPoints& pts, const LinearScramble& scramble);

namespace detail {
/// Digit-by-digit matrix product for any base; apply_linear uses packed bits for base 2.
NetPoints apply_linear_digitwise(const NetPoints& pts, const LinearScramble& scramble);
}  // namespace detail

/// draw_linear followed by apply_linear.
NetPoints scramble_linear(const NetPoints& pts, const ScramblerSpec& spec, RandomStream& rs);

// ---------------------------------------------------------------------------

/// Dispatches on spec.kind.
NetPoints scramble(const NetPoints& pts, const ScramblerSpec& spec, RandomStream& rs);

}  // namespace rqmc
