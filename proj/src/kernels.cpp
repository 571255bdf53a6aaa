#include "twomat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twomat/errors.hpp"

namespace twomat {

KernelContext::KernelContext(const TransformEvaluator& T, std::size_t m) : T_(T), m_(m) {
  if (m > T.count()) {
    throw IndexError("kernel index " + std::to_string(m) + " needs order " + std::to_string(m - 1) + ", available " +
                     std::to_string(T.count() - 1));
  }
  inv_h_.resize(m);
  for (std::size_t i = 0; i < m; ++i) inv_h_[i] = 1.0 / T.h_sq(i);
  const Discretization& d = T.rules();
  edge_x_ = std::max(std::abs(d.x.lo()), std::abs(d.x.hi()));
  edge_y_ = std::max(std::abs(d.y.lo()), std::abs(d.y.hi()));
}

std::vector<cplx> KernelContext::p_vals(cplx x) const {
  std::vector<cplx> out;
  eval_p_all(T_.system(), m_, x, out);
  return out;
}

std::vector<cplx> KernelContext::q_vals(cplx y) const {
  std::vector<cplx> out;
  eval_q_all(T_.system(), m_, y, out);
  return out;
}

namespace {

// sum_{i<m} a_i b_i / h_i^2
cplx pair_sum(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<double>& inv_h) {
  CompensatedSum<cplx> s;
  for (std::size_t i = 0; i < inv_h.size(); ++i) s.add(a[i] * b[i] * inv_h[i]);
  return s.value();
}

void check_distinct(cplx a, cplx b, const char* what) {
  if (std::abs(a - b) < kCoincidenceTol) throw CoincidenceError(std::string("coincident arguments in ") + what);
}

}  // namespace

double KernelContext::K11(double x1, double x2) const { return pair_sum(p_vals(x1), T_.Q_all(x2), inv_h_).real(); }

double KernelContext::K12(double x, double y) const { return pair_sum(p_vals(x), q_vals(y), inv_h_).real(); }

double KernelContext::K21(double y, double x) const {
  return pair_sum(T_.P_all(y), T_.Q_all(x), inv_h_).real() - T_.weight(x, y);
}

double KernelContext::K22(double y1, double y2) const { return pair_sum(T_.P_all(y1), q_vals(y2), inv_h_).real(); }

cplx KernelContext::K11_tilde(cplx x, cplx v) const {
  check_distinct(x, v, "K11_tilde");
  if (beyond_x(v)) {
    const int m = static_cast<int>(m_);
    return (pair_sum(p_vals(x), T_.Q_tilde_shifted_all(v, m), inv_h_) - std::pow(x, m) / (v - x)) * std::pow(v, -m);
  }
  return pair_sum(p_vals(x), T_.Q_tilde_all(v), inv_h_) - 1.0 / (v - x);
}

cplx KernelContext::K12_tilde(cplx x, cplx y) const { return pair_sum(p_vals(x), q_vals(y), inv_h_); }

cplx KernelContext::K21_tilde(cplx w, cplx v) const {
  const int sw = beyond_y(w) ? static_cast<int>(m_) : 0;
  const int sv = beyond_x(v) ? static_cast<int>(m_) : 0;
  const cplx sum = pair_sum(T_.P_tilde_shifted_all(w, sw), T_.Q_tilde_shifted_all(v, sv), inv_h_);
  return (sum - T_.weight_cauchy(w, v, sw, sv)) * std::pow(w, -sw) * std::pow(v, -sv);
}

cplx KernelContext::K22_tilde(cplx w, cplx y) const {
  check_distinct(w, y, "K22_tilde");
  if (beyond_y(w)) {
    const int m = static_cast<int>(m_);
    return (pair_sum(T_.P_tilde_shifted_all(w, m), q_vals(y), inv_h_) - std::pow(y, m) / (w - y)) * std::pow(w, -m);
  }
  return pair_sum(T_.P_tilde_all(w), q_vals(y), inv_h_) - 1.0 / (w - y);
}

// sum_{i<m} p_i(x) Qtil_i(x) / h_i^2 = m/x + x^{-m} sum p_i(x) Qtil_i^{(m)}(x) / h_i^2.
cplx KernelContext::K11_hat(cplx x) const {
  if (beyond_x(x)) {
    const int m = static_cast<int>(m_);
    return static_cast<double>(m) / x + pair_sum(p_vals(x), T_.Q_tilde_shifted_all(x, m), inv_h_) * std::pow(x, -m);
  }
  return pair_sum(p_vals(x), T_.Q_tilde_all(x), inv_h_);
}

cplx KernelContext::K22_hat(cplx y) const {
  if (beyond_y(y)) {
    const int m = static_cast<int>(m_);
    return static_cast<double>(m) / y + pair_sum(T_.P_tilde_shifted_all(y, m), q_vals(y), inv_h_) * std::pow(y, -m);
  }
  return pair_sum(T_.P_tilde_all(y), q_vals(y), inv_h_);
}

}  // namespace twomat
