#pragma once

// Resolvent correlators, trace moments by contour extraction, and the
// eigenvalue correlation functions.

#include <vector>

#include "twomat/kernels.hpp"

namespace twomat {

/// E[prod_i Tr (x_i - M1)^{-1} prod_j Tr (y_j - M2)^{-1}] for the context's
/// kernel index n. The block determinant has K11_hat / K22_hat on the
/// diagonal and the Cauchy-transformed kernels elsewhere; each pair of
/// arguments on the same axis also contributes -1/(z_i - z_k)^2, which enters
/// as a sum over matchings of same-axis pairs times the complementary minors.
cplx resolvent_generating(const KernelContext& ctx, const std::vector<cplx>& xs, const std::vector<cplx>& ys);

struct ContourOptions {
  std::size_t points = 256;
  /// Radius of the innermost circle; 0 means twice the largest |node|.
  double radius = 0.0;
  /// Agreement required between radius R and 2R, relative to max(1, |value|).
  double doubling_tol = 1e-6;
  bool check_doubling = true;
};

struct TraceResult {
  double value = 0.0;
  double radius = 0.0;
  double doubling_change = 0.0;  // |value(R) - value(2R)|, 0 when unchecked
};

/// E[prod_i Tr M1^{m_i} prod_j Tr M2^{p_j}] from resolvent_generating on
/// nested circles of radii R(1 + 0.25 k), trapezoid rule in each variable.
/// Throws ContourError when the doubled radius disagrees.
TraceResult trace_product_average(const KernelContext& ctx, const std::vector<int>& m_list,
                                  const std::vector<int>& p_list, const ContourOptions& opts = {});

/// Correlation function R_{I,J}: the (I+J) determinant of the plain kernels.
double correlation(const KernelContext& ctx, const std::vector<double>& lams, const std::vector<double>& mus);

}  // namespace twomat
