#pragma once

// Named property checks over a model: biorthogonality, kernel identities,
// asymptotics, oracle agreement of the source averages, correlation and
// trace identities, and the Christoffel polynomials.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "twomat/applications.hpp"
#include "twomat/averages.hpp"
#include "twomat/oracle.hpp"

namespace twomat {

/// Everything a check needs for one model, built once.
class Workspace {
 public:
  explicit Workspace(ModelSpec model, std::size_t nodes = kDefaultNodes, std::size_t max_order = kDefaultMaxOrder);

  const ModelSpec& model() const { return model_; }
  const Discretization& rules() const { return rules_; }
  const BiorthogonalSystem& system() const { return T_->system(); }
  const TransformEvaluator& transforms() const { return *T_; }
  const BruteForceOracle& oracle() const;

 private:
  ModelSpec model_;
  std::size_t nodes_;
  Discretization rules_;
  std::unique_ptr<TransformEvaluator> T_;
  mutable std::unique_ptr<BruteForceOracle> oracle_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

/// |int int p_i q_j w - delta_ij h_i^2| / (h_i h_j) for i, j <= N.
CheckResult check_biorthogonality(const Workspace& ws, std::size_t N, double tol = 1e-8);

/// Summation versus integral forms of the transformed kernels, the
/// reproducing and vanishing identities, and the integral relations, for
/// n = 1..max_n at seeded random points. Residuals are relative to the
/// integral of |integrand|.
std::vector<CheckResult> check_kernel_lemmas(const Workspace& ws, std::size_t max_n, std::uint64_t seed,
                                             double tol = 1e-8);

/// The twelve large-argument statements at n: deviation of the leading
/// ratio from 1 at `radius` below 5e-2, and at 2*radius a ratio of
/// deviations in [0.4, 0.6] (`require_halving`) or at most 0.6. A statement
/// that holds exactly (both deviations below 1e-12) passes.
std::vector<CheckResult> check_asymptotics(const Workspace& ws, std::size_t n, bool require_halving,
                                           double radius = 100.0);

struct SweepOptions {
  std::size_t max_n = 4;
  int max_sources = 5;  // I + J + K + L
  std::size_t draws = 5;
  std::uint64_t seed = 1;
  double oracle_tol = 1e-6;
  double shift_tol = 1e-8;
};

/// Every admissible (I, J, K, L) and n: average against the oracle, all
/// admissible kernel index shifts, both orientations when I-K = J-L, and
/// permutation of the source lists.
std::vector<CheckResult> check_average_sweep(const Workspace& ws, const SweepOptions& opts);

/// n = 1 two-point function against w/G00 on a 10 x 10 grid; int R_{1,0}
/// = n for n <= max_n_10; int int R_{1,1} = n^2 for n <= max_n_11.
std::vector<CheckResult> check_correlations(const Workspace& ws, std::size_t max_n_10, std::size_t max_n_11);

/// Contour-extracted single and pairwise trace averages against the
/// finite-difference oracle for exponents <= max_exp and n <= max_n.
/// Relative error is taken against max(1, |oracle|).
CheckResult check_traces(const Workspace& ws, std::size_t max_n, int max_exp, double tol = 1e-4);

/// Biorthogonality residuals and monic leading coefficients of the
/// Christoffel polynomials A_n and B_n for n <= max_n, I <= max_I, J < I.
std::vector<CheckResult> check_christoffel(const Workspace& ws, std::size_t max_n, std::size_t max_I,
                                           std::uint64_t seed, double tol = 1e-8);

struct VerifyOptions {
  std::size_t max_n = 4;
  std::size_t nodes = kDefaultNodes;
  std::uint64_t seed = 1;
  double tol = 1e-8;
};

/// The full suite for one model, at sizes suitable for an interactive run.
std::vector<CheckResult> run_verify(const ModelSpec& model, const VerifyOptions& opts);

}  // namespace twomat
