#pragma once

// Transformed functions P_i(y), Q_j(x) and their Cauchy transforms.

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "twomat/biorth.hpp"
#include "twomat/weights.hpp"

namespace twomat {

/// P_i(y) = int p_i(x) w(x, y) dx and Q_j(x) = int q_j(y) w(x, y) dy,
/// evaluated with the discretization's rules, and the Cauchy transforms
/// Ptil_i(w) = int P_i(eta) / (w - eta) d eta, Qtil_j(v) = int Q_j(xi) / (v - xi) d xi.
///
/// Values of P at the y nodes and Q at the x nodes are tabulated once. Cauchy
/// transforms (all indices at once) are memoized per argument when `memoize`
/// is set; memoized and fresh values are identical.
class TransformEvaluator {
 public:
  TransformEvaluator(ModelSpec model, BiorthogonalSystem sys, Discretization rules, CauchyOptions cauchy = {},
                     bool memoize = true);

  const ModelSpec& model() const { return model_; }
  const BiorthogonalSystem& system() const { return sys_; }
  const Discretization& rules() const { return rules_; }
  const CauchyOptions& cauchy_options() const { return cauchy_; }
  /// Number of available indices (order + 1).
  std::size_t count() const { return count_; }
  double h_sq(std::size_t i) const;

  cplx P(std::size_t i, cplx y) const;
  cplx Q(std::size_t j, cplx x) const;
  /// P_0(y)..P_{count-1}(y).
  std::vector<cplx> P_all(cplx y) const;
  std::vector<cplx> Q_all(cplx x) const;

  cplx P_tilde(std::size_t i, cplx w) const;
  cplx Q_tilde(std::size_t j, cplx v) const;
  std::vector<cplx> P_tilde_all(cplx w) const;
  std::vector<cplx> Q_tilde_all(cplx v) const;

  /// int eta^s P_i(eta) / (w - eta) d eta for every i. Biorthogonality makes
  /// Ptil_i(w) = w^{-i} times the shift-i value, and the shifted sums avoid
  /// the cancellation the plain sums suffer at large |w|.
  std::vector<cplx> P_tilde_shifted_all(cplx w, int s) const;
  std::vector<cplx> Q_tilde_shifted_all(cplx v, int s) const;

  /// int int eta^sw xi^sv w(xi, eta) / ((w - eta)(v - xi)) d xi d eta.
  cplx weight_cauchy(cplx w, cplx v, int sw = 0, int sv = 0) const;

  /// Coupled weight at a point.
  double weight(double x, double y) const;

  /// Tables: P_i at y node b, Q_j at x node a.
  double P_node(std::size_t i, std::size_t b) const { return ptab_[i * ny_ + b]; }
  double Q_node(std::size_t j, std::size_t a) const { return qtab_[j * nx_ + a]; }

 private:
  using Key = std::tuple<double, double, int>;
  static Key key(cplx z, int s) { return {z.real(), z.imag(), s}; }

  std::vector<cplx> compute_P_tilde(cplx w, int s) const;
  std::vector<cplx> compute_Q_tilde(cplx v, int s) const;
  // int xi^s w(xi, eta_b) / (v - xi) d xi at every y node b.
  std::shared_ptr<const std::vector<cplx>> y_profile(cplx v, int s) const;
  cplx y_profile_at(cplx v, int s, double eta) const;

  ModelSpec model_;
  BiorthogonalSystem sys_;
  Discretization rules_;
  CauchyOptions cauchy_;
  bool memoize_;
  std::size_t count_, nx_, ny_;
  double offset_;             // max log-weight over the tensor grid
  std::vector<double> expw_;  // exp(log_weight - offset_), x-major
  std::vector<double> px_;    // p_i at x nodes, count x nx
  std::vector<double> qy_;    // q_j at y nodes, count x ny
  std::vector<double> ptab_;  // count x ny
  std::vector<double> qtab_;  // count x nx

  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_ptr<const std::vector<cplx>>> p_tilde_memo_, q_tilde_memo_, profile_memo_;
  mutable std::map<std::pair<Key, Key>, cplx> weight_memo_;
};

}  // namespace twomat
