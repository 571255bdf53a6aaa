#include "twomat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twomat/errors.hpp"
#include "twomat/linalg.hpp"

namespace twomat {

namespace {

constexpr double kEntryTol = 1e-10;
constexpr int kMaxLevel = 5;
constexpr double kStep = 1e-4;
constexpr double kNoiseFactor = 1e3;

SourceFactor numerator_factor(const std::vector<cplx>& zeros, const std::vector<cplx>& poles) {
  return [zeros, poles](double t) {
    cplx out = 1.0;
    for (cplx z : zeros) out *= z - t;
    for (cplx p : poles) out /= p - t;
    return out;
  };
}

void check_poles(const std::vector<cplx>& poles, double floor) {
  for (cplx p : poles) {
    if (std::abs(p.imag()) < floor) throw PoleProximityError(std::abs(p.imag()), floor);
  }
}

}  // namespace

BruteForceOracle::BruteForceOracle(ModelSpec model, std::size_t nodes, CauchyOptions cauchy)
    : model_(std::move(model)), cauchy_(cauchy) {
  model_.validate();
  base_ = make_discretization(model_, nodes);
  refined_ = {refine(base_.x), refine(base_.y)};
  alt_ = make_discretization(model_, nodes + nodes / 2 + 1);
  offset_ = -std::numeric_limits<double>::infinity();
  for (double x : base_.x.nodes) {
    for (double y : base_.y.nodes) offset_ = std::max(offset_, log_weight(model_, x, y));
  }
}

BruteForceOracle::Level BruteForceOracle::make_level(const QuadratureRule& x, const QuadratureRule& y) const {
  Level lv{x, y, Eigen::MatrixXd(x.nodes.size(), y.nodes.size())};
  for (std::size_t a = 0; a < x.nodes.size(); ++a) {
    for (std::size_t b = 0; b < y.nodes.size(); ++b) {
      lv.E(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          std::exp(log_weight(model_, x.nodes[a], y.nodes[b]) - offset_) * x.weights[a] * y.weights[b];
    }
  }
  return lv;
}

const BruteForceOracle::Level& BruteForceOracle::cached_level(int which) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = which == 0 ? base_level_ : refined_level_;
  const Discretization& d = which == 0 ? base_ : refined_;
  if (!slot) slot = std::make_unique<Level>(make_level(d.x, d.y));
  return *slot;
}

void BruteForceOracle::moments(const Level& lv, std::size_t n, const SourceFactor& f, const SourceFactor& g, double sx,
                               double sy, Eigen::MatrixXcd& M, Eigen::MatrixXd& A) const {
  const auto nx = static_cast<Eigen::Index>(lv.x.nodes.size());
  const auto ny = static_cast<Eigen::Index>(lv.y.nodes.size());
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd ax(nx, nn), by(ny, nn);
  for (Eigen::Index a = 0; a < nx; ++a) {
    const double t = lv.x.nodes[static_cast<std::size_t>(a)];
    cplx v = f(t);
    for (Eigen::Index j = 0; j < nn; ++j, v *= t / sx) ax(a, j) = v;
  }
  for (Eigen::Index b = 0; b < ny; ++b) {
    const double t = lv.y.nodes[static_cast<std::size_t>(b)];
    cplx v = g(t);
    for (Eigen::Index k = 0; k < nn; ++k, v *= t / sy) by(b, k) = v;
  }
  const Eigen::MatrixXd re = lv.E * by.real();
  const Eigen::MatrixXd im = lv.E * by.imag();
  Eigen::MatrixXcd eb(nx, nn);
  eb.real() = re;
  eb.imag() = im;
  M = ax.transpose() * eb;
  A = ax.cwiseAbs().transpose() * (lv.E * by.cwiseAbs());
}

void BruteForceOracle::converged_moments(std::size_t n, const SourceFactor& f, const SourceFactor& g,
                                         const std::vector<cplx>& x_poles, const std::vector<cplx>& y_poles, double sx,
                                         double sy, Eigen::MatrixXcd& Mfg, Eigen::MatrixXcd& M11) const {
  check_poles(x_poles, cauchy_.min_imag);
  check_poles(y_poles, cauchy_.min_imag);
  const SourceFactor one = [](double) { return cplx(1.0); };
  Eigen::MatrixXcd prev;
  Eigen::MatrixXd abs, abs11;
  double worst = 0.0;
  for (int level = 0; level <= kMaxLevel; ++level) {
    const Discretization& d = level == 0 ? base_ : refined_;
    const QuadratureRule rx = panel_rule(d.x, x_poles, level, cauchy_);
    const QuadratureRule ry = panel_rule(d.y, y_poles, level, cauchy_);
    const bool plain = rx.nodes.size() == d.x.nodes.size() && ry.nodes.size() == d.y.nodes.size() &&
                       rx.nodes.front() == d.x.nodes.front() && ry.nodes.front() == d.y.nodes.front();
    if (plain && level >= 2) break;  // nothing left to refine
    Level fresh;
    const Level* lv;
    if (plain && level <= 1) {
      lv = &cached_level(level);
    } else {
      fresh = make_level(rx, ry);
      lv = &fresh;
    }
    moments(*lv, n, f, g, sx, sy, Mfg, abs);
    moments(*lv, n, one, one, sx, sy, M11, abs11);
    if (level > 0) {
      worst = 0.0;
      for (Eigen::Index i = 0; i < Mfg.size(); ++i) {
        worst = std::max(worst, std::abs(Mfg(i) - prev(i)) / abs(i));
      }
      if (worst <= kEntryTol) return;
    }
    prev = Mfg;
  }
  throw ConvergenceError("modified bimoments did not converge, relative change " + std::to_string(worst));
}

ModifiedBimoment BruteForceOracle::modified_bimoments(std::size_t n, const SourceFactor& f, const SourceFactor& g,
                                                      const std::vector<cplx>& x_poles,
                                                      const std::vector<cplx>& y_poles) const {
  Eigen::MatrixXcd Mfg, M11;
  converged_moments(n, f, g, x_poles, y_poles, 1.0, 1.0, Mfg, M11);
  return {n, Mfg * std::exp(offset_)};
}

cplx BruteForceOracle::average(std::size_t n, const SourceConfig& cfg) const {
  if (n == 0) return 1.0;
  Eigen::MatrixXcd Mfg, M11;
  converged_moments(n, numerator_factor(cfg.xs, cfg.vs), numerator_factor(cfg.ys, cfg.ws), cfg.vs, cfg.ws,
                    base_.x.scale, base_.y.scale, Mfg, M11);
  const Determinant den = determinant(M11);
  if (std::abs(den.value) == 0.0 || !std::isfinite(den.condition)) {
    throw ConvergenceError("plain bimoment determinant is singular");
  }
  return determinant(Mfg).value / den.value;
}

double BruteForceOracle::partition_ratio(std::size_t n) const {
  Eigen::MatrixXcd Mfg, M11;
  const SourceFactor one = [](double) { return cplx(1.0); };
  converged_moments(n, one, one, {}, {}, base_.x.scale, base_.y.scale, Mfg, M11);
  return determinant(M11).value.real();
}

cplx BruteForceOracle::direct_n1(const SourceConfig& cfg) const {
  check_poles(cfg.vs, cauchy_.min_imag);
  check_poles(cfg.ws, cauchy_.min_imag);
  const SourceFactor f = numerator_factor(cfg.xs, cfg.vs);
  const SourceFactor g = numerator_factor(cfg.ys, cfg.ws);
  cplx prev = 0.0;
  double worst = 0.0;
  for (int level = 1; level <= kMaxLevel + 1; ++level) {
    const QuadratureRule rx = panel_rule(alt_.x, cfg.vs, level, cauchy_);
    const QuadratureRule ry = panel_rule(alt_.y, cfg.ws, level, cauchy_);
    std::vector<cplx> gy(ry.nodes.size());
    for (std::size_t b = 0; b < gy.size(); ++b) gy[b] = g(ry.nodes[b]);
    CompensatedSum<cplx> num;
    CompensatedSum<double> den, mag;
    for (std::size_t a = 0; a < rx.nodes.size(); ++a) {
      const cplx fa = f(rx.nodes[a]);
      for (std::size_t b = 0; b < ry.nodes.size(); ++b) {
        const double w =
            std::exp(log_weight(model_, rx.nodes[a], ry.nodes[b]) - offset_) * rx.weights[a] * ry.weights[b];
        num.add(fa * gy[b] * w);
        mag.add(std::abs(fa * gy[b]) * w);
        den.add(w);
      }
    }
    const cplx value = num.value() / den.value();
    if (level > 1) {
      worst = std::abs(value - prev) / (mag.value() / den.value());
      if (worst <= kEntryTol) return value;
    }
    prev = value;
  }
  throw ConvergenceError("direct n = 1 quadrature did not converge, relative change " + std::to_string(worst));
}

cplx BruteForceOracle::direct_n2(const SourceConfig& cfg, std::size_t nodes) const {
  check_poles(cfg.vs, cauchy_.min_imag);
  check_poles(cfg.ws, cauchy_.min_imag);
  const Discretization d = make_discretization(model_, nodes);
  for (cplx v : cfg.vs) {
    if (!pole_is_far(d.x, v, cauchy_))
      throw UnsupportedConfigError("direct n = 2 oracle needs poles far from the nodes");
  }
  for (cplx w : cfg.ws) {
    if (!pole_is_far(d.y, w, cauchy_))
      throw UnsupportedConfigError("direct n = 2 oracle needs poles far from the nodes");
  }
  const SourceFactor f = numerator_factor(cfg.xs, cfg.vs);
  const SourceFactor g = numerator_factor(cfg.ys, cfg.ws);
  const std::size_t nx = d.x.nodes.size(), ny = d.y.nodes.size();
  std::vector<double> E(nx * ny);
  std::vector<cplx> F(nx), G(ny);
  for (std::size_t a = 0; a < nx; ++a) {
    F[a] = f(d.x.nodes[a]);
    for (std::size_t b = 0; b < ny; ++b) {
      E[a * ny + b] =
          std::exp(log_weight(model_, d.x.nodes[a], d.y.nodes[b]) - offset_) * d.x.weights[a] * d.y.weights[b];
    }
  }
  for (std::size_t b = 0; b < ny; ++b) G[b] = g(d.y.nodes[b]);

  // Density of (lam1, lam2, mu1, mu2) up to normalization:
  // (lam2 - lam1)(mu2 - mu1) det[exp(tau lam_i mu_j)] exp(-V - W).
  CompensatedSum<cplx> num;
  CompensatedSum<double> den;
  for (std::size_t a1 = 0; a1 < nx; ++a1) {
    for (std::size_t a2 = 0; a2 < nx; ++a2) {
      const double dl = d.x.nodes[a2] - d.x.nodes[a1];
      const cplx fa = F[a1] * F[a2];
      cplx row_num = 0.0;
      double row_den = 0.0;
      for (std::size_t b1 = 0; b1 < ny; ++b1) {
        for (std::size_t b2 = 0; b2 < ny; ++b2) {
          const double dm = d.y.nodes[b2] - d.y.nodes[b1];
          const double det = E[a1 * ny + b1] * E[a2 * ny + b2] - E[a1 * ny + b2] * E[a2 * ny + b1];
          const double dens = dl * dm * det;
          row_num += dens * G[b1] * G[b2];
          row_den += dens;
        }
      }
      num.add(fa * row_num);
      den.add(row_den);
    }
  }
  return num.value() / den.value();
}

double BruteForceOracle::trace_moments(std::size_t n, const std::vector<int>& m_list,
                                       const std::vector<int>& p_list) const {
  for (int m : m_list) {
    if (m < 0) throw UnsupportedConfigError("trace exponents must be nonnegative");
  }
  for (int p : p_list) {
    if (p < 0) throw UnsupportedConfigError("trace exponents must be nonnegative");
  }
  if (n == 0) return (m_list.empty() && p_list.empty()) ? 1.0 : 0.0;
  const std::size_t I = m_list.size(), d = I + p_list.size();

  // Mixed central difference of the tilted determinant ratio in all d
  // tilt parameters at once. `noise` collects the roundoff floor of the
  // stencil so that moments that vanish do not read as unstable.
  double noise = 0.0;
  auto difference = [&](double h) {
    CompensatedSum<double> acc;
    double mag = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<double> s(d);
      double sign = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        const bool neg = (mask >> i) & 1U;
        s[i] = neg ? -h : h;
        if (neg) sign = -sign;
      }
      const SourceFactor f = [&](double t) {
        cplx out = 1.0;
        for (std::size_t i = 0; i < I; ++i) out *= 1.0 + s[i] * std::pow(t, m_list[i]);
        return out;
      };
      const SourceFactor g = [&](double t) {
        cplx out = 1.0;
        for (std::size_t j = I; j < d; ++j) out *= 1.0 + s[j] * std::pow(t, p_list[j - I]);
        return out;
      };
      Eigen::MatrixXcd Mfg, M11;
      converged_moments(n, f, g, {}, {}, base_.x.scale, base_.y.scale, Mfg, M11);
      const double F = (determinant(Mfg).value / determinant(M11).value).real();
      acc.add(sign * F);
      mag += std::abs(F);
    }
    const double denom = std::pow(2.0 * h, static_cast<double>(d));
    noise = std::max(noise, kNoiseFactor * std::numeric_limits<double>::epsilon() * mag / denom);
    return acc.value() / denom;
  };
  const double coarse = difference(kStep);
  const double fine = difference(kStep / 2);
  const double value = (4.0 * fine - coarse) / 3.0;
  const double correction = std::abs(value - fine);
  if (correction > 0.1 * std::abs(value) + noise) {
    throw FiniteDifferenceError("Richardson correction " + std::to_string(correction) + " exceeds 10% of " +
                                std::to_string(value));
  }
  return value;
}

cplx BruteForceOracle::linear_statistics(std::size_t n, const std::vector<SourceFactor>& phis,
                                         const std::vector<SourceFactor>& psis, const std::vector<cplx>& x_poles,
                                         const std::vector<cplx>& y_poles) const {
  if (n == 0) return (phis.empty() && psis.empty()) ? 1.0 : 0.0;
  const std::size_t I = phis.size(), d = I + psis.size();
  // The tilted ratio is a polynomial of degree <= n in each parameter, so the
  // coefficient of s_1...s_d is exact from an (n+1)-point root-of-unity sum
  // in every parameter.
  const std::size_t K = n + 1;
  std::vector<cplx> roots(K);
  for (std::size_t k = 0; k < K; ++k) {
    roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(K));
  }
  CompensatedSum<cplx> acc;
  std::vector<std::size_t> at(d, 0);
  std::vector<cplx> s(d);
  while (true) {
    cplx phase = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      s[i] = roots[at[i]];
      phase *= std::conj(s[i]);
    }
    const SourceFactor f = [&](double t) {
      cplx out = 1.0;
      for (std::size_t i = 0; i < I; ++i) out *= 1.0 + s[i] * phis[i](t);
      return out;
    };
    const SourceFactor g = [&](double t) {
      cplx out = 1.0;
      for (std::size_t j = I; j < d; ++j) out *= 1.0 + s[j] * psis[j - I](t);
      return out;
    };
    Eigen::MatrixXcd Mfg, M11;
    converged_moments(n, f, g, x_poles, y_poles, base_.x.scale, base_.y.scale, Mfg, M11);
    acc.add(phase * determinant(Mfg).value / determinant(M11).value);
    std::size_t i = 0;
    while (i < d && ++at[i] == K) at[i++] = 0;
    if (i == d) break;
  }
  return acc.value() / std::pow(static_cast<double>(K), static_cast<double>(d));
}

}  // namespace twomat
