#pragma once

#include <cstdint>
#include <vector>

namespace rqmc {

/// An ordered set of N = base^m points in [0,1), claimed to form a (0,m,1)-net.
struct NetPoints {
  std::uint32_t base = 2;
  std::size_t m = 0;
  std::vector<double> points;

  std::size_t size() const { return points.size(); }
};

/// base^m as a point count; throws when it overflows size_t.
std::size_t net_size(std::uint32_t base, std::size_t m);

/// Stratum index floor(x * n_strata), clamped to [0, n_strata - 1]. A double
/// rounded from a stratum edge k / n_strata counts as lying in stratum k.
std::size_t stratum_of(double x, std::size_t n_strata);

/// Moves x by whole ulps until stratum_of(x, n_strata) == stratum.
double place_in_stratum(double x, std::size_t stratum, std::size_t n_strata);

/// Radical-inverse (van der Corput) prefix of length base^m.
NetPoints van_der_corput_net(std::uint32_t base, std::size_t m);

/// True iff every stratum [i/N, (i+1)/N) holds exactly one point.
bool is_net(const NetPoints& pts);

/// For each stratum i, the index of the point lying in it. Requires is_net(pts).
std::vector<std::size_t> stratum_order(const NetPoints& pts);

}  // namespace rqmc
