#pragma once

// Bimoment matrix and the monic biorthogonal families p_n, q_n with norms h_n^2.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "twomat/weights.hpp"

namespace twomat {

inline constexpr std::size_t kDefaultMaxOrder = 12;

/// G[i][j] = integral of x^i y^j against the coupled weight. Entries are
/// stored for the rescaled variables x/sx, y/sy (second moments near 1);
/// `entry` maps back.
struct BimomentMatrix {
  std::size_t order = 0;  // number of rows, N + 1
  Eigen::MatrixXd scaled;
  Eigen::MatrixXd errors;  // doubling estimates, scaled variables
  double sx = 1.0, sy = 1.0;

  double entry(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd unscaled() const;
};

/// Throws BimomentError naming the first entry whose doubling estimate
/// exceeds tol times the entry's absolute-value integral.
BimomentMatrix compute_bimoments(const ModelSpec& model, const Discretization& rules, std::size_t N,
                                 double tol = 1e-10);

struct BiorthogonalSystem {
  std::size_t order = 0;                      // N: p_0..p_N are available
  std::vector<std::vector<double>> p_coeffs;  // row n: ascending coefficients, length n + 1
  std::vector<std::vector<double>> q_coeffs;
  std::vector<double> h_sq;
};

/// LDU factorization without pivoting of the scaled bimoment matrix. A pivot
/// with |D[n][n]| <= pivot_tol * ||G|| raises DegeneracyError(n).
///
/// Negative pivots are allowed: for tau < 0 the pairing is indefinite and
/// h_n^2 carries the sign (-1)^n.
BiorthogonalSystem biorthogonalize(const BimomentMatrix& G, double pivot_tol = 1e-13);

cplx eval_p(const BiorthogonalSystem& sys, std::size_t n, cplx z);
cplx eval_q(const BiorthogonalSystem& sys, std::size_t n, cplx z);
double eval_p(const BiorthogonalSystem& sys, std::size_t n, double z);
double eval_q(const BiorthogonalSystem& sys, std::size_t n, double z);

/// p_0(z)..p_{count-1}(z) (resp. q) written into out.
void eval_p_all(const BiorthogonalSystem& sys, std::size_t count, cplx z, std::vector<cplx>& out);
void eval_q_all(const BiorthogonalSystem& sys, std::size_t count, cplx z, std::vector<cplx>& out);

/// Bimoments and factorization in one step; enforces the order guard.
BiorthogonalSystem build_system(const ModelSpec& model, const Discretization& rules, std::size_t N,
                                std::size_t max_order = kDefaultMaxOrder);

}  // namespace twomat
