#include "twomat/linalg.hpp"

#include <cmath>
#include <limits>

namespace twomat {

Determinant determinant(const Eigen::MatrixXcd& m) {
  Determinant out;
  if (m.rows() == 0) return out;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  out.value = lu.determinant();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double a = std::abs(lu.matrixLU()(i, i));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  out.condition = lo > 0.0 ? std::max(1.0, hi / lo) : std::numeric_limits<double>::infinity();
  return out;
}

double determinant(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

}  // namespace twomat
