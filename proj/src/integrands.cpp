#include "rqmc/integrands.hpp"

#include <cmath>
#include <stdexcept>

namespace rqmc {

double IntegrandSpec::sigma() const { return std::sqrt(exact_sigma2); }

std::vector<std::string> builtin_names() { return {"f1", "f2", "linear", "constant"}; }

IntegrandSpec builtin(std::string_view name) {
  if (name == "f1") {
    return {"f1", [](double x) { return x * std::sqrt(x); }, [](double x) { return 1.5 * std::sqrt(x); },
            0.4, 3.0 / 32.0, Smoothness::Finite};
  }
  if (name == "f2") {
    return {"f2", [](double x) { return std::exp(-x); }, [](double x) { return -std::exp(-x); },
            -std::expm1(-1.0), -std::expm1(-2.0) / 24.0, Smoothness::Infinite};
  }
  if (name == "linear") {
    return {"linear", [](double x) { return x; }, [](double) { return 1.0; }, 0.5, 1.0 / 12.0, Smoothness::Linear};
  }
  if (name == "constant") {
    return {"constant", [](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, 0.0, Smoothness::Constant};
  }
  throw std::invalid_argument("unknown integrand '" + std::string(name) + "' (expected f1, f2, linear or constant)");
}

double sigma2_by_quadrature(const IntegrandSpec& f, std::size_t n_panels) {
  if (n_panels < 16) throw std::invalid_argument("sigma2_by_quadrature: need at least 16 panels");
  const double width = 1.0 / static_cast<double>(n_panels);
  const double step = width * 1e-3;
  double sum = 0.0;
  for (std::size_t i = 0; i < n_panels; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * width;
    const double slope = (f.eval(x + step) - f.eval(x - step)) / (2.0 * step);
    sum += slope * slope;
  }
  return sum * width / 12.0;
}

}  // namespace rqmc
