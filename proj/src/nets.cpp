#include "rqmc/nets.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rqmc/digits.hpp"

namespace rqmc {

std::size_t net_size(std::uint32_t base, std::size_t m) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  const std::uint64_t n = checked_pow(base, m);
  if (n > std::numeric_limits<std::size_t>::max() / 2)
    throw std::overflow_error("net size " + std::to_string(base) + "^" + std::to_string(m) + " is too large");
  return static_cast<std::size_t>(n);
}

std::size_t stratum_of(double x, std::size_t n_strata) {
  if (!(x > 0.0)) return 0;
  if (!(x < 1.0)) return n_strata - 1;
  // A double that rounds from the stratum's left edge belongs to that stratum.
  const std::uint64_t s = scaled_floor(x, n_strata);
  if (s + 1 < n_strata && grid_value(s + 1, n_strata) == x) return static_cast<std::size_t>(s + 1);
  return static_cast<std::size_t>(s);
}

double place_in_stratum(double x, std::size_t stratum, std::size_t n_strata) {
  while (stratum_of(x, n_strata) > stratum) x = std::nextafter(x, 0.0);
  while (stratum_of(x, n_strata) < stratum) x = std::nextafter(x, 1.0);
  return x;
}

NetPoints van_der_corput_net(std::uint32_t base, std::size_t m) {
  const std::size_t n = net_size(base, m);
  NetPoints net{base, m, std::vector<double>(n)};
  std::vector<std::uint32_t> digits(m == 0 ? 1 : m);
  for (std::size_t i = 0; i < n; ++i) {
    // Digits of i, least significant first, become digits 1..m of the point.
    std::size_t rest = i;
    for (std::size_t k = 0; k < m; ++k) {
      digits[k] = static_cast<std::uint32_t>(rest % base);
      rest /= base;
    }
    net.points[i] = m == 0 ? 0.0 : digits_to_value(digits, base);
  }
  return net;
}

bool is_net(const NetPoints& pts) {
  const std::size_t n = net_size(pts.base, pts.m);
  if (pts.points.size() != n)
    throw std::invalid_argument("is_net: expected " + std::to_string(n) + " points, got " + std::to_string(pts.points.size()));
  std::vector<bool> seen(n, false);
  for (double x : pts.points) {
    if (!(x >= 0.0 && x < 1.0)) return false;
    const std::size_t s = stratum_of(x, n);
    if (seen[s]) return false;
    seen[s] = true;
  }
  return true;
}

std::vector<std::size_t> stratum_order(const NetPoints& pts) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> order(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = stratum_of(pts.points[i], n);
    if (order[s] != n) throw std::invalid_argument("stratum_order: point set is not a net");
    order[s] = i;
  }
  return order;
}

}  // namespace rqmc
