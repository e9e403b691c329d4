#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rqmc {

enum class Smoothness { Finite, Infinite, Linear, Constant };

/// A test function on [0,1] with its exact integral and gradient energy
/// sigma^2(f) = (1/12) * integral of f'(x)^2 over [0,1].
struct IntegrandSpec {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> derivative;
  double exact_integral = 0.0;
  double exact_sigma2 = 0.0;
  Smoothness smoothness = Smoothness::Finite;

  double sigma() const;
};

/// f1 = x^{3/2}, f2 = exp(-x), linear = x, constant = 1.
IntegrandSpec builtin(std::string_view name);

std::vector<std::string> builtin_names();

/// Midpoint rule with n_panels panels for (f')^2 / 12, with f' from central
/// differences of eval at step panel_width * 1e-3.
double sigma2_by_quadrature(const IntegrandSpec& f, std::size_t n_panels);

}  // namespace rqmc
