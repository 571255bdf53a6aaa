#pragma once

// External sources of a characteristic-polynomial average.

#include <cstddef>
#include <vector>

#include "twomat/weights.hpp"

namespace twomat {

/// Numerator sources xs (M1), ys (M2); denominator sources vs (M1), ws (M2).
struct SourceConfig {
  std::vector<cplx> xs, ys, vs, ws;

  int I() const { return static_cast<int>(xs.size()); }
  int J() const { return static_cast<int>(ys.size()); }
  int K() const { return static_cast<int>(vs.size()); }
  int L() const { return static_cast<int>(ws.size()); }
};

inline constexpr double kDistinctTol = 1e-12;

/// Denominator sources off the real axis (PoleProximityError below
/// min_imag), xs with vs pairwise distinct and ys with ws pairwise distinct
/// (DistinctnessError), and min(I-K, J-L) >= -n (UnsupportedConfigError).
void validate_sources(const SourceConfig& cfg, std::size_t n, double min_imag);

}  // namespace twomat
