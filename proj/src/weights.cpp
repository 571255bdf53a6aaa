#include "twomat/weights.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twomat/errors.hpp"

namespace twomat {

namespace {

// The node span ends where the marginal bound drops below exp(-kTailLog)
// relative to its peak, after allowing for polynomial factors of degree up to
// kDegreeAllowance (in units of the marginal width).
constexpr double kTailLog = 36.0;
constexpr double kDegreeAllowance = 24.0;

template <typename T>
T horner(const std::vector<double>& c, T x) {
  T acc = T(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + T(*it);
  return acc;
}

struct Extremum {
  double arg, val;
};

// Global maximum of a function tending to -inf at both ends: coarse scan over
// an expanding window, then golden section inside the best bracket.
template <typename F>
Extremum maximize(F&& phi) {
  double width = 1.0;
  for (int attempt = 0; attempt < 60; ++attempt, width *= 2.0) {
    constexpr int kScan = 400;
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kScan; ++k) {
      const double s = -width + 2.0 * width * k / kScan;
      const double val = phi(s);
      if (val > best_val) {
        best_val = val;
        best = k;
      }
    }
    if (best == 0 || best == kScan) continue;
    const double h = 2.0 * width / kScan;
    const double grid = -width + h * best;
    double a = grid - h, b = grid + h;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int it = 0; it < 100 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = phi(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = phi(d);
      }
    }
    if (best_val >= std::max(fc, fd)) return {grid, best_val};
    return fc > fd ? Extremum{c, fc} : Extremum{d, fd};
  }
  throw ModelError("potential does not confine: extremum search diverged");
}

// sup_s (u*s - U(s)) for an even-degree polynomial U with positive leading
// coefficient.
double conjugate(const std::vector<double>& coeffs, double u) {
  return maximize([&](double s) { return u * s - eval_poly(coeffs, s); }).val;
}

// Distance from `peak` at which phi has dropped by `level` below phi(peak),
// searching in direction dir.
template <typename F>
double drop_distance(F&& phi, double peak, double dir, double level) {
  const double top = phi(peak);
  double prev = 0.0, cur = 1e-3;
  while (phi(peak + dir * cur) - top > -level) {
    prev = cur;
    cur *= 2.0;
    if (cur > 1e12) throw ModelError("coupled weight is not integrable");
  }
  for (int it = 0; it < 100 && cur - prev > 1e-15 * cur; ++it) {
    const double mid = 0.5 * (prev + cur);
    if (phi(peak + dir * mid) - top > -level) {
      prev = mid;
    } else {
      cur = mid;
    }
  }
  return 0.5 * (prev + cur);
}

// Upper envelope of the log-marginal along one axis:
// own(t) = -U(t) + sup_s (tau*t*s - other(s)).
struct MarginalBound {
  const std::vector<double>& own;
  const std::vector<double>& other;
  double tau;
  double operator()(double t) const { return -eval_poly(own, t) + conjugate(other, tau * t); }
};

struct Span {
  double lo, hi;
};

Span tail_span(const MarginalBound& m) {
  const Extremum top = maximize(m);
  const double peak = top.arg, peak_val = top.val;
  // One standard deviation for a Gaussian marginal.
  const double sigma = std::max(drop_distance(m, peak, 1.0, 0.5), drop_distance(m, peak, -1.0, 0.5));

  auto excess = [&](double dir, double dist) {
    const double poly = kDegreeAllowance * std::log(std::max(1.0, dist / sigma));
    return m(peak + dir * dist) - peak_val + poly + kTailLog;
  };
  auto edge = [&](double dir) {
    double prev = 0.0, cur = sigma;
    while (excess(dir, cur) > 0.0) {
      prev = cur;
      cur += sigma;
      if (cur > 1e6 * sigma) throw ModelError("coupled weight is not integrable");
    }
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (prev + cur);
      if (excess(dir, mid) > 0.0) {
        prev = mid;
      } else {
        cur = mid;
      }
    }
    return cur;
  };
  return {peak - edge(-1.0), peak + edge(1.0)};
}

// Orthonormal Hermite recurrence (weight exp(-t^2)) carried with a running
// log-scale so that large n does not overflow. Returns phi_n / phi_{n-1} and
// log sum_{k<n} phi_k^2.
struct HermiteEval {
  double ratio;     // phi_n(t) / phi_{n-1}(t)
  double log_norm;  // log sum_{k=0}^{n-1} phi_k(t)^2
};

HermiteEval hermite_eval(std::size_t n, double t) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  double log_scale = 0.0;
  double sum = cur * cur;
  for (std::size_t k = 0; k + 1 <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double next = t * std::sqrt(2.0 / (kd + 1.0)) * cur - std::sqrt(kd / (kd + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (k + 1 < n) sum += cur * cur;
    if (std::abs(cur) > 1e100) {
      prev *= 1e-100;
      cur *= 1e-100;
      sum *= 1e-200;
      log_scale += 100.0 * std::log(10.0);
    }
  }
  return {cur / prev, std::log(sum) + 2.0 * log_scale};
}

}  // namespace

int poly_degree(const std::vector<double>& coeffs) {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
    if (coeffs[static_cast<std::size_t>(k)] != 0.0) return k;
  }
  return -1;
}

double eval_poly(const std::vector<double>& coeffs, double x) { return horner(coeffs, x); }
cplx eval_poly(const std::vector<double>& coeffs, cplx x) { return horner(coeffs, x); }

void ModelSpec::validate() const {
  auto check = [](const std::vector<double>& c, const char* name) {
    const int d = poly_degree(c);
    if (d < 2 || d % 2 != 0) {
      throw ModelError(std::string("potential ") + name + " must have even degree >= 2");
    }
    if (c[static_cast<std::size_t>(d)] <= 0.0) {
      throw ModelError(std::string("potential ") + name + " must have a positive leading coefficient");
    }
    for (double v : c) {
      if (!std::isfinite(v)) throw ModelError(std::string("potential ") + name + " has non-finite coefficients");
    }
  };
  check(v_coeffs, "V");
  check(w_coeffs, "W");
  if (!std::isfinite(tau) || tau == 0.0) throw ModelError("coupling tau must be finite and nonzero");
  if (poly_degree(v_coeffs) == 2 && poly_degree(w_coeffs) == 2) {
    const double a = v_coeffs[2], b = w_coeffs[2];
    if (tau * tau >= 4.0 * a * b) {
      throw ModelError("quadratic potentials require tau^2 < 4ab for integrability");
    }
  }
}

double ModelSpec::V(double x) const { return eval_poly(v_coeffs, x); }
double ModelSpec::W(double y) const { return eval_poly(w_coeffs, y); }
cplx ModelSpec::V(cplx x) const { return eval_poly(v_coeffs, x); }
cplx ModelSpec::W(cplx y) const { return eval_poly(w_coeffs, y); }

ModelSpec ModelSpec::gaussian(double tau) { return ModelSpec{{0.0, 0.0, 0.5}, {0.0, 0.0, 0.5}, tau}; }

double log_weight(const ModelSpec& model, double x, double y) { return -model.V(x) - model.W(y) + model.tau * x * y; }

cplx log_weight(const ModelSpec& model, cplx x, cplx y) { return -model.V(x) - model.W(y) + model.tau * x * y; }

double QuadratureRule::local_spacing(double x) const {
  if (nodes.size() < 2) return half_span > 0.0 ? 2.0 * half_span : 1.0;
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it == nodes.begin()) return nodes[1] - nodes[0];
  if (it == nodes.end()) return nodes[nodes.size() - 1] - nodes[nodes.size() - 2];
  const std::size_t k = static_cast<std::size_t>(it - nodes.begin());
  return nodes[k] - nodes[k - 1];
}

void gauss_hermite_reference(std::size_t n, std::vector<double>& nodes, std::vector<double>& bare_weights) {
  if (n == 0) throw std::invalid_argument("gauss_hermite_reference: n must be positive");
  nodes.assign(n, 0.0);
  bare_weights.assign(n, 0.0);
  if (n == 1) {
    bare_weights[0] = std::sqrt(std::numbers::pi);
    return;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(0.5 * static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();

  const double root2n = std::sqrt(2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double t = ev(static_cast<Eigen::Index>(i));
    for (int it = 0; it < 3; ++it) {
      // phi_n' = sqrt(2n) phi_{n-1}
      const double step = hermite_eval(n, t).ratio / root2n;
      t -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(t))) break;
    }
    nodes[i] = t;
  }
  // Exact symmetry of the reference rule.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double t = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    nodes[i] = -t;
    nodes[n - 1 - i] = t;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = nodes[i];
    bare_weights[i] = std::exp(t * t - hermite_eval(n, t).log_norm);
  }
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  if (n == 1) {
    weights[0] = 2.0;
    return;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    sub(static_cast<Eigen::Index>(k - 1)) = kd / std::sqrt(4.0 * kd * kd - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    nodes[i] = es.eigenvalues()(ii);
    const double v0 = es.eigenvectors()(0, ii);
    weights[i] = 2.0 * v0 * v0;
  }
}

QuadratureRule hermite_rule(std::size_t n, double center, double scale) {
  QuadratureRule rule;
  std::vector<double> t, w;
  gauss_hermite_reference(n, t, w);
  rule.node_count = n;
  rule.center = center;
  rule.scale = scale;
  rule.half_span = scale * t.back();
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = center + scale * t[i];
    rule.weights[i] = scale * w[i];
  }
  return rule;
}

QuadratureRule build_rule(const ModelSpec& model, Axis axis, std::size_t node_count) {
  model.validate();
  if (node_count < 8) throw std::invalid_argument("build_rule: node_count must be at least 8");
  const auto& own = axis == Axis::X ? model.v_coeffs : model.w_coeffs;
  const auto& other = axis == Axis::X ? model.w_coeffs : model.v_coeffs;
  const Span span = tail_span(MarginalBound{own, other, model.tau});

  // Width of the uncoupled factor exp(-U): the reference Gaussian exp(-t^2)
  // reproduces it exactly when U is quadratic.
  auto minus_u = [&](double s) { return -eval_poly(own, s); };
  const double u_min = maximize(minus_u).arg;
  const double sigma_u = std::max(drop_distance(minus_u, u_min, 1.0, 0.5), drop_distance(minus_u, u_min, -1.0, 0.5));

  std::vector<double> t, w;
  gauss_hermite_reference(node_count, t, w);
  const double half = 0.5 * (span.hi - span.lo);
  const double fill_scale = half / t.back();
  const double matched_scale = std::sqrt(2.0) * sigma_u;
  // Few nodes: keep the matched width and accept a shorter span. Many nodes:
  // spread them over the full tail span.
  if (matched_scale < fill_scale) return hermite_rule(node_count, u_min, matched_scale);
  return hermite_rule(node_count, 0.5 * (span.lo + span.hi), fill_scale);
}

QuadratureRule refine(const QuadratureRule& rule) {
  std::vector<double> t, w;
  gauss_hermite_reference(2 * rule.node_count, t, w);
  return hermite_rule(2 * rule.node_count, rule.center, rule.half_span / t.back());
}

Discretization make_discretization(const ModelSpec& model, std::size_t nodes) {
  return {build_rule(model, Axis::X, nodes), build_rule(model, Axis::Y, nodes)};
}

namespace {

struct PlainResult {
  cplx value;
  double scale;
};

PlainResult tensor_sum(const ModelSpec& model, const Integrand2D& f, const QuadratureRule& rx,
                       const QuadratureRule& ry) {
  const std::size_t nx = rx.nodes.size(), ny = ry.nodes.size();
  std::vector<double> lw(nx * ny);
  double offset = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      lw[a * ny + b] = log_weight(model, rx.nodes[a], ry.nodes[b]);
      offset = std::max(offset, lw[a * ny + b]);
    }
  }
  CompensatedSum<cplx> sum;
  CompensatedSum<double> mass;
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      const double w = rx.weights[a] * ry.weights[b] * std::exp(lw[a * ny + b] - offset);
      if (w == 0.0) continue;
      const cplx fv = f(rx.nodes[a], ry.nodes[b]);
      sum.add(fv * w);
      mass.add(std::abs(fv) * w);
    }
  }
  const double e = std::exp(offset);
  return {sum.value() * e, mass.value() * e};
}

}  // namespace

IntegralResult integrate_2d(const ModelSpec& model, const Integrand2D& f, const QuadratureRule& rx,
                            const QuadratureRule& ry, double tol) {
  const PlainResult base = tensor_sum(model, f, rx, ry);
  const PlainResult fine = tensor_sum(model, f, refine(rx), refine(ry));
  IntegralResult out;
  out.value = base.value;
  out.scale = base.scale;
  out.error_estimate = std::abs(fine.value - base.value);
  out.converged = out.error_estimate <= tol * std::max(base.scale, std::numeric_limits<double>::min());
  return out;
}

bool pole_is_far(const QuadratureRule& rule, cplx pole, const CauchyOptions& opts) {
  const double h = rule.local_spacing(pole.real());
  const auto it = std::lower_bound(rule.nodes.begin(), rule.nodes.end(), pole.real());
  double dist = std::numeric_limits<double>::infinity();
  if (it != rule.nodes.end()) dist = std::min(dist, std::abs(pole - cplx(*it, 0.0)));
  if (it != rule.nodes.begin()) dist = std::min(dist, std::abs(pole - cplx(*(it - 1), 0.0)));
  // Trapezoid-type error for a simple pole at distance d: ~ 2*pi*exp(-2*pi*d/h).
  const double needed = std::log(2.0 * std::numbers::pi / opts.tol) / (2.0 * std::numbers::pi);
  return dist >= needed * h;
}

namespace {

constexpr std::size_t kPanelOrder = 16;
constexpr double kMaxPanelWidth = 0.5;
constexpr int kMaxSplits = 8;

const std::vector<double>& legendre_nodes() {
  static const std::vector<double> t = [] {
    std::vector<double> n, w;
    gauss_legendre(kPanelOrder, n, w);
    return n;
  }();
  return t;
}

const std::vector<double>& legendre_weights() {
  static const std::vector<double> w = [] {
    std::vector<double> n, wt;
    gauss_legendre(kPanelOrder, n, wt);
    return wt;
  }();
  return w;
}

void check_floor(cplx pole, const CauchyOptions& opts) {
  if (std::abs(pole.imag()) < opts.min_imag) throw PoleProximityError(std::abs(pole.imag()), opts.min_imag);
}

}  // namespace

QuadratureRule panel_rule(const QuadratureRule& base, const std::vector<cplx>& poles, int splits,
                          const CauchyOptions& opts) {
  std::vector<cplx> near;
  for (cplx p : poles) {
    if (!pole_is_far(base, p, opts)) near.push_back(p);
  }
  if (near.empty()) return base;

  const double lo = base.lo() - base.local_spacing(base.lo());
  const double hi = base.hi() + base.local_spacing(base.hi());
  std::vector<double> cuts{lo, hi};
  for (cplx p : near) {
    const double c = std::clamp(p.real(), lo, hi);
    const double d = std::max(std::abs(p.imag()), 1e-6);
    cuts.push_back(c);
    for (double dir : {-1.0, 1.0}) {
      double pos = c, width = d;
      while (width < kMaxPanelWidth) {
        pos += dir * width;
        if (pos <= lo || pos >= hi) break;
        cuts.push_back(pos);
        width *= 2.0;
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> edges{cuts.front()};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double gap = cuts[k + 1] - cuts[k];
    const auto pieces = static_cast<std::size_t>(std::ceil(gap / kMaxPanelWidth - 1e-12));
    const std::size_t count = std::max<std::size_t>(1, pieces) << splits;
    for (std::size_t j = 1; j <= count; ++j) {
      edges.push_back(j == count ? cuts[k + 1] : cuts[k] + gap * static_cast<double>(j) / static_cast<double>(count));
    }
  }

  const auto& gt = legendre_nodes();
  const auto& gw = legendre_weights();
  QuadratureRule rule;
  rule.nodes.reserve((edges.size() - 1) * kPanelOrder);
  rule.weights.reserve((edges.size() - 1) * kPanelOrder);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double half = 0.5 * (edges[k + 1] - edges[k]), mid = 0.5 * (edges[k] + edges[k + 1]);
    if (half <= 0.0) continue;
    for (std::size_t j = 0; j < kPanelOrder; ++j) {
      rule.nodes.push_back(mid + half * gt[j]);
      rule.weights.push_back(half * gw[j]);
    }
  }
  rule.node_count = rule.nodes.size();
  rule.center = 0.5 * (lo + hi);
  rule.scale = 0.0;
  rule.half_span = 0.5 * (hi - lo);
  return rule;
}

IntegralResult integrate_2d_poles(const Integrand2D& f, const QuadratureRule& rx, const QuadratureRule& ry,
                                  const std::vector<cplx>& x_poles, const std::vector<cplx>& y_poles, double tol,
                                  const CauchyOptions& opts) {
  for (cplx p : x_poles) check_floor(p, opts);
  for (cplx p : y_poles) check_floor(p, opts);
  auto sum = [&](const QuadratureRule& a, const QuadratureRule& b) {
    CompensatedSum<cplx> s;
    CompensatedSum<double> m;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      for (std::size_t j = 0; j < b.nodes.size(); ++j) {
        const cplx v = f(a.nodes[i], b.nodes[j]) * (a.weights[i] * b.weights[j]);
        s.add(v);
        m.add(std::abs(v));
      }
    }
    return std::make_pair(s.value(), m.value());
  };
  const QuadratureRule fx = refine(rx), fy = refine(ry);
  IntegralResult out;
  auto prev = sum(panel_rule(rx, x_poles, 0, opts), panel_rule(ry, y_poles, 0, opts));
  for (int level = 1; level <= 3; ++level) {
    const auto cur = sum(panel_rule(fx, x_poles, level - 1, opts), panel_rule(fy, y_poles, level - 1, opts));
    out.value = cur.first;
    out.scale = cur.second;
    out.error_estimate = std::abs(cur.first - prev.first);
    out.converged = out.error_estimate <= tol * std::max(cur.second, std::numeric_limits<double>::min());
    if (out.converged) break;
    prev = cur;
  }
  return out;
}

std::vector<cplx> cauchy_integrate_vec(const VecIntegrand1D& f, std::size_t dim, cplx pole, const QuadratureRule& rule,
                                       const CauchyOptions& opts) {
  check_floor(pole, opts);
  std::vector<cplx> buf(dim);
  auto run = [&](const QuadratureRule& r, std::vector<double>* mass) {
    std::vector<CompensatedSum<cplx>> sums(dim);
    std::vector<CompensatedSum<double>> masses(dim);
    for (std::size_t a = 0; a < r.nodes.size(); ++a) {
      f(r.nodes[a], buf);
      const cplx k = r.weights[a] / (pole - r.nodes[a]);
      for (std::size_t d = 0; d < dim; ++d) {
        sums[d].add(buf[d] * k);
        if (mass) masses[d].add(std::abs(buf[d] * k));
      }
    }
    std::vector<cplx> out(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      out[d] = sums[d].value();
      if (mass) (*mass)[d] = masses[d].value();
    }
    return out;
  };

  if (pole_is_far(rule, pole, opts)) return run(rule, nullptr);

  std::vector<double> mass(dim);
  std::vector<cplx> coarse = run(panel_rule(rule, {pole}, 0, opts), &mass);
  for (int s = 1; s <= kMaxSplits; ++s) {
    std::vector<cplx> fine = run(panel_rule(rule, {pole}, s, opts), &mass);
    bool ok = true;
    for (std::size_t d = 0; d < dim && ok; ++d) {
      ok = std::abs(fine[d] - coarse[d]) <= opts.tol * std::max(mass[d], std::numeric_limits<double>::min());
    }
    if (ok) return fine;
    coarse = std::move(fine);
  }
  throw ConvergenceError("Cauchy integral near the real axis did not converge");
}

cplx cauchy_integrate_1d(const Integrand1D& f, cplx pole, const QuadratureRule& rule, const CauchyOptions& opts) {
  const VecIntegrand1D g = [&](double t, std::vector<cplx>& out) { out[0] = f(t); };
  return cauchy_integrate_vec(g, 1, pole, rule, opts)[0];
}

}  // namespace twomat
