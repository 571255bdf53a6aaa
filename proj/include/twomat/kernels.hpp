#pragma once

// Eynard-Mehta kernels and their Cauchy-transformed versions at an explicit
// truncation index m (sums run over i < m).

#include <cstddef>
#include <vector>

#include "twomat/transforms.hpp"

namespace twomat {

inline constexpr double kCoincidenceTol = 1e-12;

class KernelContext {
 public:
  /// Requires m <= T.count(). m = 0 gives the empty sums.
  KernelContext(const TransformEvaluator& T, std::size_t m);

  std::size_t index() const { return m_; }
  const TransformEvaluator& transforms() const { return T_; }

  // Plain kernels, real arguments.
  double K11(double x1, double x2) const;
  double K12(double x, double y) const;
  /// Includes the subtracted weight w(x, y).
  double K21(double y, double x) const;
  double K22(double y1, double y2) const;

  // Cauchy-transformed kernels. v, w off the real axis; x, y may be complex.
  // Beyond the node span the first m orders of 1/(v - xi) are removed with
  // the reproducing property, so the large-argument decay is computed
  // directly rather than by cancellation.
  cplx K11_tilde(cplx x, cplx v) const;
  cplx K12_tilde(cplx x, cplx y) const;
  cplx K21_tilde(cplx w, cplx v) const;
  cplx K22_tilde(cplx w, cplx y) const;

  /// Diagonal entries of the resolvent determinant: the summation formulas
  /// without the rational subtraction.
  cplx K11_hat(cplx x) const;
  cplx K22_hat(cplx y) const;

 private:
  std::vector<cplx> p_vals(cplx x) const;
  std::vector<cplx> q_vals(cplx y) const;
  bool beyond_x(cplx z) const { return std::abs(z) > edge_x_; }
  bool beyond_y(cplx z) const { return std::abs(z) > edge_y_; }

  const TransformEvaluator& T_;
  std::size_t m_;
  std::vector<double> inv_h_;
  double edge_x_, edge_y_;
};

}  // namespace twomat
