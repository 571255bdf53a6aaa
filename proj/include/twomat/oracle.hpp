#pragma once

// Brute-force ground truth for source averages: ratios of modified bimoment
// determinants on pole-adapted tensor rules, plus direct low-n eigenvalue
// integrals that do not use the determinant reduction.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "twomat/sources.hpp"
#include "twomat/weights.hpp"

namespace twomat {

/// M[j][k] = int int lam^j mu^k f(lam) g(mu) w(lam, mu).
struct ModifiedBimoment {
  std::size_t order = 0;
  Eigen::MatrixXcd entries;
};

using SourceFactor = std::function<cplx(double)>;

class BruteForceOracle {
 public:
  explicit BruteForceOracle(ModelSpec model, std::size_t nodes = kDefaultNodes, CauchyOptions cauchy = {});

  const ModelSpec& model() const { return model_; }
  const Discretization& rules() const { return base_; }

  /// Converged modified bimoments; `x_poles`/`y_poles` are the poles of f and
  /// g, used to adapt the rules.
  ModifiedBimoment modified_bimoments(std::size_t n, const SourceFactor& f, const SourceFactor& g,
                                      const std::vector<cplx>& x_poles = {},
                                      const std::vector<cplx>& y_poles = {}) const;

  /// det(M^{f,g}) / det(M^{1,1}) with f(lam) = prod(x_i - lam)/prod(v_k - lam),
  /// g(mu) = prod(y_j - mu)/prod(w_l - mu).
  cplx average(std::size_t n, const SourceConfig& cfg) const;

  /// det of the plain bimoment matrix in scaled variables (positive).
  double partition_ratio(std::size_t n) const;

  /// n = 1 by a separate 2D quadrature on a finer discretization.
  cplx direct_n1(const SourceConfig& cfg) const;

  /// n = 2 by a 4D sum over the eigenvalue density on a coarse rule. Poles
  /// must be far from the coarse nodes (UnsupportedConfigError otherwise).
  cplx direct_n2(const SourceConfig& cfg, std::size_t nodes = 72) const;

  /// E[prod_i Tr M1^{m_i} prod_j Tr M2^{p_j}] from central differences of
  /// the determinant ratio under polynomial tilts f = prod(1 + s_i lam^{m_i}),
  /// g = prod(1 + t_j mu^{p_j}), step 1e-4, one Richardson level.
  double trace_moments(std::size_t n, const std::vector<int>& m_list, const std::vector<int>& p_list) const;

  /// E[prod_i sum_a phi_i(lam_a) prod_j sum_b psi_j(mu_b)], extracted exactly
  /// from tilts f = prod(1 + s_i phi_i) with s_i on the (n+1)-th roots of
  /// unity. Poles of the statistics adapt the rules.
  cplx linear_statistics(std::size_t n, const std::vector<SourceFactor>& phis, const std::vector<SourceFactor>& psis,
                         const std::vector<cplx>& x_poles = {}, const std::vector<cplx>& y_poles = {}) const;

 private:
  struct Level {
    QuadratureRule x, y;
    Eigen::MatrixXd E;  // exp(log_weight - offset) * wx * wy
  };
  Level make_level(const QuadratureRule& x, const QuadratureRule& y) const;
  const Level& cached_level(int which) const;
  // Scaled moments (lam/sx)^j (mu/sy)^k and their absolute counterparts.
  void moments(const Level& lv, std::size_t n, const SourceFactor& f, const SourceFactor& g, double sx, double sy,
               Eigen::MatrixXcd& M, Eigen::MatrixXd& A) const;
  void converged_moments(std::size_t n, const SourceFactor& f, const SourceFactor& g, const std::vector<cplx>& x_poles,
                         const std::vector<cplx>& y_poles, double sx, double sy, Eigen::MatrixXcd& Mfg,
                         Eigen::MatrixXcd& M11) const;

  ModelSpec model_;
  CauchyOptions cauchy_;
  Discretization base_, refined_, alt_;
  double offset_ = 0.0;
  mutable std::mutex mutex_;
  mutable std::unique_ptr<Level> base_level_, refined_level_;
};

}  // namespace twomat
