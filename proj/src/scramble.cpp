#include "rqmc/scramble.hpp"

#include <bit>
#include <cmath>

namespace rqmc {

namespace {

void require_net(const NetPoints& pts, std::string_view who) {
  if (!is_net(pts)) throw std::invalid_argument(std::string(who) + ": input is not a (0,m,1)-net");
}

std::uint32_t nonzero_digit(RandomStream& rs, std::uint32_t b) { return 1 + rs.below(b - 1); }

// Base-2 path: digits packed as bits, digit 1 in the most significant position.
NetPoints apply_linear_base2(const NetPoints& pts, const LinearScramble& s) {
  const std::size_t depth = s.depth;
  std::vector<std::uint64_t> columns(depth, 0);
  for (std::size_t j = 0; j < depth; ++j) {
    for (std::size_t k = j; k < depth; ++k) {
      if (s.at(k, j) & 1u) columns[j] |= std::uint64_t{1} << (depth - 1 - k);
    }
  }
  std::uint64_t shift = 0;
  for (std::size_t k = 0; k < depth; ++k) {
    if (s.shift[k] & 1u) shift |= std::uint64_t{1} << (depth - 1 - k);
  }
  const double scale = std::ldexp(1.0, static_cast<int>(depth));
  const std::size_t n = pts.size();
  NetPoints out{2, pts.m, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = grid_numerator(pts.points[i], 2, depth);
    std::uint64_t x = shift;
    while (bits != 0) {
      const int top = 63 - std::countl_zero(bits);
      x ^= columns[depth - 1 - static_cast<std::size_t>(top)];
      bits ^= std::uint64_t{1} << top;
    }
    const std::uint64_t stratum = pts.m == 0 ? 0 : x >> (depth - pts.m);
    double v = static_cast<double>(static_cast<long double>(x) / static_cast<long double>(scale));
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    out.points[i] = place_in_stratum(v, stratum, n);
  }
  return out;
}

}  // namespace

std::string_view scrambler_name(ScramblerKind kind) {
  switch (kind) {
    case ScramblerKind::Nested: return "nested";
    case ScramblerKind::Jittered: return "jittered";
    case ScramblerKind::MatousekLinear: return "matousek";
    case ScramblerKind::TezukaIBinomial: return "tezuka";
    case ScramblerKind::OwenStriped: return "striped";
  }
  return "unknown";
}

ScramblerKind parse_scrambler_kind(std::string_view name) {
  for (auto kind : {ScramblerKind::Nested, ScramblerKind::Jittered, ScramblerKind::MatousekLinear,
                    ScramblerKind::TezukaIBinomial, ScramblerKind::OwenStriped}) {
    if (scrambler_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown scrambler '" + std::string(name) +
                              "' (expected nested, jittered, matousek, tezuka or striped)");
}

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void ScramblerSpec::validate() const {
  if (base < 2) throw std::invalid_argument("scrambler base must be >= 2");
  if (is_linear(kind) && !is_prime(base))
    throw std::invalid_argument(std::string(scrambler_name(kind)) + " scrambling needs a prime base, got " +
                                std::to_string(base));
  if (effective_depth() > max_depth(base))
    throw std::invalid_argument("digit depth " + std::to_string(effective_depth()) + " exceeds 64-bit range for base " +
                                std::to_string(base));
}

std::string ScramblerSpec::label() const {
  std::string name(scrambler_name(kind));
  if (is_linear(kind) && !shift) name += "-noshift";
  return name;
}

void draw_permutation(SplitMix64& gen, std::span<std::uint32_t> perm) {
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = perm.size(); i > 1; --i) {
    const std::uint32_t j = gen.below(static_cast<std::uint32_t>(i));
    std::swap(perm[i - 1], perm[j]);
  }
}

NetPoints scramble_nested(const NetPoints& pts, const RandomStream& rs, std::size_t depth) {
  require_net(pts, "nested scrambling");
  return scramble_nested_with(pts, depth, [&rs](std::size_t level, std::uint64_t prefix, std::span<std::uint32_t> perm) {
    SplitMix64 gen = rs.keyed(level, prefix);
    draw_permutation(gen, perm);
  });
}

NetPoints jitter_with(const NetPoints& pts, std::span<const double> offsets) {
  const std::size_t n = pts.size();
  if (offsets.size() != n) throw std::invalid_argument("jitter: need one offset per stratum");
  const std::vector<std::size_t> order = stratum_order(pts);
  NetPoints out{pts.base, pts.m, std::vector<double>(n)};
  const double scale = static_cast<double>(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double u = offsets[s];
    if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("jitter: offsets must lie in [0,1)");
    out.points[order[s]] = place_in_stratum((static_cast<double>(s) + u) / scale, s, n);
  }
  return out;
}

NetPoints scramble_jittered(const NetPoints& pts, RandomStream& rs) {
  std::vector<double> offsets(pts.size());
  for (auto& u : offsets) u = rs.uniform();
  return jitter_with(pts, offsets);
}

LinearScramble LinearScramble::identity(std::uint32_t base, std::size_t depth) {
  LinearScramble s{base, depth, std::vector<std::uint32_t>(depth * depth, 0), std::vector<std::uint32_t>(depth, 0)};
  for (std::size_t k = 0; k < depth; ++k) s.at(k, k) = 1;
  return s;
}

LinearScramble draw_linear(const ScramblerSpec& spec, RandomStream& rs) {
  if (!is_linear(spec.kind))
    throw std::invalid_argument("draw_linear: " + std::string(scrambler_name(spec.kind)) + " is not a linear scrambler");
  spec.validate();
  const std::uint32_t b = spec.base;
  const std::size_t depth = spec.effective_depth();
  LinearScramble s{b, depth, std::vector<std::uint32_t>(depth * depth, 0), std::vector<std::uint32_t>(depth, 0)};
  switch (spec.kind) {
    case ScramblerKind::MatousekLinear:
      for (std::size_t k = 0; k < depth; ++k) {
        for (std::size_t j = 0; j < k; ++j) s.at(k, j) = rs.below(b);
        s.at(k, k) = nonzero_digit(rs, b);
      }
      break;
    case ScramblerKind::TezukaIBinomial: {
      // Toeplitz: entry (k, j) depends only on k - j; first column (h1, g2, g3, ...).
      std::vector<std::uint32_t> column(depth);
      column[0] = nonzero_digit(rs, b);
      for (std::size_t d = 1; d < depth; ++d) column[d] = rs.below(b);
      for (std::size_t k = 0; k < depth; ++k) {
        for (std::size_t j = 0; j <= k; ++j) s.at(k, j) = column[k - j];
      }
      break;
    }
    case ScramblerKind::OwenStriped:
      for (std::size_t j = 0; j < depth; ++j) {
        const std::uint32_t h = nonzero_digit(rs, b);
        for (std::size_t k = j; k < depth; ++k) s.at(k, j) = h;
      }
      break;
    default:
      break;
  }
  if (spec.shift) {
    for (auto& d : s.shift) d = rs.below(b);
  }
  return s;
}

NetPoints apply_linear(const NetPoints& pts, const LinearScramble& s) {
  if (pts.base != s.base) throw std::invalid_argument("apply_linear: net base and matrix base differ");
  if (s.depth < pts.m) throw std::invalid_argument("apply_linear: depth < m");
  if (s.depth > max_depth(s.base)) throw std::invalid_argument("apply_linear: depth exceeds 64-bit digit range");
  if (s.base == 2) return apply_linear_base2(pts, s);
  return detail::apply_linear_digitwise(pts, s);
}

NetPoints detail::apply_linear_digitwise(const NetPoints& pts, const LinearScramble& s) {
  const std::uint32_t b = s.base;
  const std::size_t depth = s.depth;
  const std::size_t n = pts.size();
  NetPoints out{b, pts.m, std::vector<double>(n)};
  std::vector<std::uint32_t> scrambled(depth);
  for (std::size_t i = 0; i < n; ++i) {
    const DigitVector a = expand(pts.points[i], b, depth);
    std::uint64_t stratum = 0;
    for (std::size_t k = 0; k < depth; ++k) {
      std::uint64_t acc = s.shift[k];
      for (std::size_t j = 0; j <= k; ++j) acc += static_cast<std::uint64_t>(s.at(k, j)) * a[j];
      scrambled[k] = static_cast<std::uint32_t>(acc % b);
      if (k < pts.m) stratum = stratum * b + scrambled[k];
    }
    out.points[i] = place_in_stratum(digits_to_value(scrambled, b), stratum, n);
  }
  return out;
}

NetPoints scramble_linear(const NetPoints& pts, const ScramblerSpec& spec, RandomStream& rs) {
  require_net(pts, "linear scrambling");
  if (spec.effective_depth() < pts.m) throw std::invalid_argument("linear scrambling: depth < m");
  return apply_linear(pts, draw_linear(spec, rs));
}

NetPoints scramble(const NetPoints& pts, const ScramblerSpec& spec, RandomStream& rs) {
  switch (spec.kind) {
    case ScramblerKind::Nested:
      spec.validate();
      return scramble_nested(pts, rs, spec.effective_depth());
    case ScramblerKind::Jittered:
      require_net(pts, "jittered sampling");
      return scramble_jittered(pts, rs);
    default:
      return scramble_linear(pts, spec, rs);
  }
}

}  // namespace rqmc
