#pragma once

#include <Eigen/Dense>

#include "twomat/weights.hpp"

namespace twomat {

struct Determinant {
  cplx value{1.0, 0.0};
  double condition = 1.0;  // largest over smallest pivot magnitude
};

/// LU with partial pivoting. The 0x0 determinant is 1.
Determinant determinant(const Eigen::MatrixXcd& m);
double determinant(const Eigen::MatrixXd& m);

}  // namespace twomat
