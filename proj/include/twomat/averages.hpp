#pragma once

// Averages of products and ratios of characteristic polynomials as
// determinants of kernels, and the Christoffel-type perturbed polynomials.

#include <optional>
#include <string>
#include <vector>

#include "twomat/kernels.hpp"
#include "twomat/sources.hpp"

namespace twomat {

enum class Formula { gencase_a, gencase_b, theorem1, theorem2, theorem3, theorem4 };
const char* formula_name(Formula f);

struct AverageResult {
  cplx value;
  Formula formula_used = Formula::gencase_a;
  int p_index_used = 0;
  double condition_estimate = 1.0;
};

enum class Orientation { automatic, a, b };

struct AverageOptions {
  /// `a` needs I-K >= J-L, `b` needs J-L >= I-K. Automatic picks `a` when
  /// I-K >= J-L.
  Orientation orientation = Orientation::automatic;
  /// Kernel index shift; defaults to max(I-K, J-L).
  std::optional<int> p_shift;
};

/// Highest polynomial index any formula for (n, cfg) touches.
int required_order(std::size_t n, const SourceConfig& cfg);

/// E over the n-eigenvalue ensemble of
/// prod det(x_i - M1) prod det(y_j - M2) / (prod det(v_k - M1) prod det(w_l - M2)).
/// Every configuration, including the one- and two-source special cases,
/// runs through the same block-determinant assembly; `formula_used` labels
/// which named special case it is.
AverageResult average(const TransformEvaluator& T, std::size_t n, const SourceConfig& cfg,
                      const AverageOptions& opts = {});

/// Numerator-only sources with I >= J: I x I determinant of K12 columns and
/// trailing p_{n+J}..p_{n+I-1} columns. p_shift in [J, I], default I.
cplx average_numerator_only(const TransformEvaluator& T, std::size_t n, const std::vector<cplx>& xs,
                            const std::vector<cplx>& ys, std::optional<int> p_shift = std::nullopt);

/// Monic degree-n biorthogonal polynomial in x for the weight
/// prod (x - x_i) w(x, y).
cplx christoffel_A(const BiorthogonalSystem& sys, std::size_t n, const std::vector<cplx>& xs, cplx x);

/// Monic degree-n biorthogonal polynomial in y for the weight
/// prod (x - x_i) prod (y - y_j) w(x, y), I > J. Kernel index n + I.
cplx christoffel_B(const BiorthogonalSystem& sys, std::size_t n, const std::vector<cplx>& xs,
                   const std::vector<cplx>& ys, cplx y);

}  // namespace twomat
