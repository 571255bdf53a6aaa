#pragma once

// Closed forms and Boost-based quadrature used as independent references.

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "twomat/weights.hpp"

namespace testing_support {

using twomat::cplx;

inline twomat::ModelSpec quartic() { return {{0.0, 0.0, 0.5, 0.0, 0.25}, {0.0, 0.0, 0.0, 0.0, 0.25}, 1.0}; }

// Shifted, so odd moments do not vanish.
inline twomat::ModelSpec asymmetric() { return {{0.0, 0.3, 0.5}, {0.0, -0.2, 0.5}, 0.5}; }

// Probabilists' Hermite He_n, ascending coefficients.
inline std::vector<double> hermite_he(std::size_t n) {
  std::vector<double> prev{1.0}, cur{0.0, 1.0};
  if (n == 0) return prev;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= static_cast<double>(k) * prev[i];
    prev = cur;
    cur = next;
  }
  return cur;
}

// Monic biorthogonal polynomial of the Gaussian model: (1-t^2)^{-n/2} He_n(sqrt(1-t^2) x).
inline std::vector<double> gaussian_p(std::size_t n, double tau) {
  auto c = hermite_he(n);
  const double s = 1.0 - tau * tau;
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] *= std::pow(s, (static_cast<double>(k) - static_cast<double>(n)) / 2.0);
  return c;
}

inline double gaussian_h_sq(std::size_t n, double tau) {
  return 2.0 * std::numbers::pi * std::tgamma(static_cast<double>(n) + 1.0) * std::pow(tau, static_cast<double>(n)) *
         std::pow(1.0 - tau * tau, -(static_cast<double>(n) + 0.5));
}

// Integral over the real line of f; f must decay like a Gaussian. Interior
// break points go at the real parts of nearby poles.
inline cplx line_integral(const std::function<cplx(double)>& f, double half_width = 14.0,
                          std::vector<double> breaks = {}) {
  boost::math::quadrature::tanh_sinh<double> ts;
  breaks.push_back(-half_width);
  breaks.push_back(half_width);
  std::sort(breaks.begin(), breaks.end());
  cplx total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    total += cplx(ts.integrate([&](double t) { return f(t).real(); }, a, b, 1e-14),
                  ts.integrate([&](double t) { return f(t).imag(); }, a, b, 1e-14));
  }
  return total;
}

// Double integral by nested tanh-sinh.
inline cplx plane_integral(const std::function<cplx(double, double)>& f, double half_width = 12.0) {
  return line_integral([&](double x) { return line_integral([&](double y) { return f(x, y); }, half_width); },
                       half_width);
}

}  // namespace testing_support
