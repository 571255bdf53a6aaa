#pragma once

// Model definition, the coupled weight exp(-V(x) - W(y) + tau*x*y), and the
// quadrature machinery every other module integrates with.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <vector>

namespace twomat {

using cplx = std::complex<double>;

/// Neumaier-compensated accumulator. Summation order is the call order, so
/// results are reproducible for a fixed loop structure.
template <typename T>
class CompensatedSum {
 public:
  void add(T v) {
    add_component(sum_re_, comp_re_, real_part(v));
    if constexpr (is_complex) add_component(sum_im_, comp_im_, v.imag());
  }
  T value() const {
    if constexpr (is_complex) {
      return T(sum_re_ + comp_re_, sum_im_ + comp_im_);
    } else {
      return sum_re_ + comp_re_;
    }
  }

 private:
  static constexpr bool is_complex = !std::is_floating_point_v<T>;
  static double real_part(const T& v) {
    if constexpr (is_complex) {
      return v.real();
    } else {
      return v;
    }
  }
  static void add_component(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  double sum_re_ = 0.0, comp_re_ = 0.0;
  double sum_im_ = 0.0, comp_im_ = 0.0;
};

/// Polynomial potentials V, W (ascending coefficients) and coupling tau.
struct ModelSpec {
  std::vector<double> v_coeffs;
  std::vector<double> w_coeffs;
  double tau = 0.0;

  /// Throws ModelError unless deg V, deg W are even with positive leading
  /// coefficients, tau != 0, and the quadratic case satisfies tau^2 < 4ab.
  void validate() const;

  double V(double x) const;
  double W(double y) const;
  cplx V(cplx x) const;
  cplx W(cplx y) const;

  static ModelSpec gaussian(double tau);
};

/// Effective degree of a coefficient list (trailing zeros ignored); -1 for
/// the zero polynomial.
int poly_degree(const std::vector<double>& coeffs);
double eval_poly(const std::vector<double>& coeffs, double x);
cplx eval_poly(const std::vector<double>& coeffs, cplx x);

/// -V(x) - W(y) + tau*x*y. The caller exponentiates.
double log_weight(const ModelSpec& model, double x, double y);
cplx log_weight(const ModelSpec& model, cplx x, cplx y);

enum class Axis { X, Y };

/// Nodes/weights for integrals against plain Lebesgue measure. The integrand
/// carries its own exponential weight.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t node_count = 0;
  double center = 0.0;
  double scale = 1.0;      // x = center + scale * t, t a Gauss-Hermite node
  double half_span = 0.0;  // outermost node sits at center +- half_span

  /// Largest gap between consecutive nodes bracketing `x` (or the end gap
  /// when x lies outside the node span).
  double local_spacing(double x) const;
  double lo() const { return nodes.front(); }
  double hi() const { return nodes.back(); }
};

/// Gauss-Hermite rule for exp(-t^2) via Golub-Welsch, Newton-polished.
/// Returns reference nodes and the *bare* weights lambda_i * exp(t_i^2).
void gauss_hermite_reference(std::size_t n, std::vector<double>& nodes, std::vector<double>& bare_weights);

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

/// Hermite rule mapped to center + scale*t with Lebesgue weights.
QuadratureRule hermite_rule(std::size_t n, double center, double scale);

/// Rule for axis X (resp. Y) spanning the region where the marginal of the
/// coupled weight exceeds the tail threshold. Requires node_count >= 8.
QuadratureRule build_rule(const ModelSpec& model, Axis axis, std::size_t node_count);

/// Same span, twice the nodes.
QuadratureRule refine(const QuadratureRule& rule);

struct Discretization {
  QuadratureRule x;
  QuadratureRule y;
};

inline constexpr std::size_t kDefaultNodes = 200;

Discretization make_discretization(const ModelSpec& model, std::size_t nodes = kDefaultNodes);

struct IntegralResult {
  cplx value;
  double error_estimate = 0.0;
  double scale = 0.0;  // integral of |f| * weight, the natural size of the integrand
  bool converged = true;
};

using Integrand2D = std::function<cplx(double, double)>;
using Integrand1D = std::function<cplx(double)>;

/// Tensor quadrature of f(x, y) * exp(log_weight(x, y)). The error estimate
/// is the difference against the doubled rules; `converged` is false when it
/// exceeds tol * scale.
IntegralResult integrate_2d(const ModelSpec& model, const Integrand2D& f, const QuadratureRule& rx,
                            const QuadratureRule& ry, double tol = 1e-10);

struct CauchyOptions {
  double min_imag = 1e-3;
  double tol = 1e-13;
};

/// True when the plain rule resolves 1/(pole - t) to ~tol: the pole sits
/// enough node spacings away from the nodes.
bool pole_is_far(const QuadratureRule& rule, cplx pole, const CauchyOptions& opts = {});

/// Composite 16-point Gauss-Legendre rule covering the span of `base`,
/// graded geometrically towards the real part of every pole that is not far
/// from the base nodes. Each panel is bisected `splits` times. Returns `base`
/// unchanged when every pole is far.
QuadratureRule panel_rule(const QuadratureRule& base, const std::vector<cplx>& poles, int splits = 0,
                          const CauchyOptions& opts = {});

/// Integral of f(t) / (pole - t) dt. Uses the plain rule when the pole is far
/// from the nodes, otherwise graded composite Gauss-Legendre panels refined
/// until the doubling estimate meets tol. Throws PoleProximityError when
/// |Im pole| is below the floor.
cplx cauchy_integrate_1d(const Integrand1D& f, cplx pole, const QuadratureRule& rule, const CauchyOptions& opts = {});

/// Tensor quadrature of f(x, y) against plain dx dy (f carries its own
/// decay), with both axes graded towards the listed poles. The rules are
/// refined (doubled nodes, then bisected panels) until consecutive values
/// agree to tol * integral of |f|; `converged` reports whether they did.
IntegralResult integrate_2d_poles(const Integrand2D& f, const QuadratureRule& rx, const QuadratureRule& ry,
                                  const std::vector<cplx>& x_poles, const std::vector<cplx>& y_poles,
                                  double tol = 1e-10, const CauchyOptions& opts = {});

/// Vector-valued variant: f writes `dim` values at t. Convergence is required
/// componentwise.
using VecIntegrand1D = std::function<void(double, std::vector<cplx>&)>;
std::vector<cplx> cauchy_integrate_vec(const VecIntegrand1D& f, std::size_t dim, cplx pole, const QuadratureRule& rule,
                                       const CauchyOptions& opts = {});

}  // namespace twomat
