#include "twomat/transforms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "twomat/errors.hpp"

namespace twomat {

TransformEvaluator::TransformEvaluator(ModelSpec model, BiorthogonalSystem sys, Discretization rules,
                                       CauchyOptions cauchy, bool memoize)
    : model_(std::move(model)),
      sys_(std::move(sys)),
      rules_(std::move(rules)),
      cauchy_(cauchy),
      memoize_(memoize),
      count_(sys_.order + 1),
      nx_(rules_.x.nodes.size()),
      ny_(rules_.y.nodes.size()) {
  const auto& xs = rules_.x.nodes;
  const auto& ys = rules_.y.nodes;
  expw_.resize(nx_ * ny_);
  offset_ = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nx_; ++a) {
    for (std::size_t b = 0; b < ny_; ++b) {
      expw_[a * ny_ + b] = log_weight(model_, xs[a], ys[b]);
      offset_ = std::max(offset_, expw_[a * ny_ + b]);
    }
  }
  for (double& e : expw_) e = std::exp(e - offset_);

  px_.resize(count_ * nx_);
  qy_.resize(count_ * ny_);
  auto& px = px_;
  auto& qy = qy_;
  for (std::size_t i = 0; i < count_; ++i) {
    for (std::size_t a = 0; a < nx_; ++a) px[i * nx_ + a] = eval_p(sys_, i, xs[a]);
    for (std::size_t b = 0; b < ny_; ++b) qy[i * ny_ + b] = eval_q(sys_, i, ys[b]);
  }
  const double scale = std::exp(offset_);
  ptab_.assign(count_ * ny_, 0.0);
  qtab_.assign(count_ * nx_, 0.0);
  for (std::size_t i = 0; i < count_; ++i) {
    for (std::size_t b = 0; b < ny_; ++b) {
      CompensatedSum<double> s;
      for (std::size_t a = 0; a < nx_; ++a) s.add(rules_.x.weights[a] * px[i * nx_ + a] * expw_[a * ny_ + b]);
      ptab_[i * ny_ + b] = s.value() * scale;
    }
    for (std::size_t a = 0; a < nx_; ++a) {
      CompensatedSum<double> s;
      for (std::size_t b = 0; b < ny_; ++b) s.add(rules_.y.weights[b] * qy[i * ny_ + b] * expw_[a * ny_ + b]);
      qtab_[i * nx_ + a] = s.value() * scale;
    }
  }
}

double TransformEvaluator::h_sq(std::size_t i) const {
  if (i >= count_) throw IndexError("h_sq index " + std::to_string(i) + " exceeds order " + std::to_string(sys_.order));
  return sys_.h_sq[i];
}

double TransformEvaluator::weight(double x, double y) const { return std::exp(log_weight(model_, x, y)); }

std::vector<cplx> TransformEvaluator::P_all(cplx y) const {
  const auto& xs = rules_.x.nodes;
  std::vector<cplx> lw(nx_);
  double off = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nx_; ++a) {
    lw[a] = -model_.V(xs[a]) + model_.tau * xs[a] * y;
    off = std::max(off, lw[a].real());
  }
  std::vector<CompensatedSum<cplx>> sums(count_);
  for (std::size_t a = 0; a < nx_; ++a) {
    const cplx e = rules_.x.weights[a] * std::exp(lw[a] - off);
    for (std::size_t i = 0; i < count_; ++i) sums[i].add(e * px_[i * nx_ + a]);
  }
  const cplx scale = std::exp(off - model_.W(y));
  std::vector<cplx> out(count_);
  for (std::size_t i = 0; i < count_; ++i) out[i] = sums[i].value() * scale;
  return out;
}

std::vector<cplx> TransformEvaluator::Q_all(cplx x) const {
  const auto& ys = rules_.y.nodes;
  std::vector<cplx> lw(ny_);
  double off = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < ny_; ++b) {
    lw[b] = -model_.W(ys[b]) + model_.tau * x * ys[b];
    off = std::max(off, lw[b].real());
  }
  std::vector<CompensatedSum<cplx>> sums(count_);
  for (std::size_t b = 0; b < ny_; ++b) {
    const cplx e = rules_.y.weights[b] * std::exp(lw[b] - off);
    for (std::size_t j = 0; j < count_; ++j) sums[j].add(e * qy_[j * ny_ + b]);
  }
  const cplx scale = std::exp(off - model_.V(x));
  std::vector<cplx> out(count_);
  for (std::size_t j = 0; j < count_; ++j) out[j] = sums[j].value() * scale;
  return out;
}

cplx TransformEvaluator::P(std::size_t i, cplx y) const {
  h_sq(i);
  return P_all(y)[i];
}

cplx TransformEvaluator::Q(std::size_t j, cplx x) const {
  h_sq(j);
  return Q_all(x)[j];
}

std::vector<cplx> TransformEvaluator::compute_P_tilde(cplx w, int s) const {
  if (pole_is_far(rules_.y, w, cauchy_)) {
    std::vector<CompensatedSum<cplx>> sums(count_);
    for (std::size_t b = 0; b < ny_; ++b) {
      const double eta = rules_.y.nodes[b];
      const cplx k = rules_.y.weights[b] * std::pow(eta, s) / (w - eta);
      for (std::size_t i = 0; i < count_; ++i) sums[i].add(k * ptab_[i * ny_ + b]);
    }
    std::vector<cplx> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = sums[i].value();
    return out;
  }
  return cauchy_integrate_vec(
      [this, s](double eta, std::vector<cplx>& out) {
        out = P_all(eta);
        const double f = std::pow(eta, s);
        for (cplx& o : out) o *= f;
      },
      count_, w, rules_.y, cauchy_);
}

std::vector<cplx> TransformEvaluator::compute_Q_tilde(cplx v, int s) const {
  if (pole_is_far(rules_.x, v, cauchy_)) {
    std::vector<CompensatedSum<cplx>> sums(count_);
    for (std::size_t a = 0; a < nx_; ++a) {
      const double xi = rules_.x.nodes[a];
      const cplx k = rules_.x.weights[a] * std::pow(xi, s) / (v - xi);
      for (std::size_t j = 0; j < count_; ++j) sums[j].add(k * qtab_[j * nx_ + a]);
    }
    std::vector<cplx> out(count_);
    for (std::size_t j = 0; j < count_; ++j) out[j] = sums[j].value();
    return out;
  }
  return cauchy_integrate_vec(
      [this, s](double xi, std::vector<cplx>& out) {
        out = Q_all(xi);
        const double f = std::pow(xi, s);
        for (cplx& o : out) o *= f;
      },
      count_, v, rules_.x, cauchy_);
}

namespace {

template <typename Map, typename K, typename F>
auto memo_lookup(std::mutex& m, Map& map, bool enabled, const K& k, F&& compute) {
  if (enabled) {
    std::lock_guard<std::mutex> lock(m);
    auto it = map.find(k);
    if (it != map.end()) return it->second;
  }
  auto value = compute();
  if (enabled) {
    std::lock_guard<std::mutex> lock(m);
    map.emplace(k, value);
  }
  return value;
}

}  // namespace

std::vector<cplx> TransformEvaluator::P_tilde_shifted_all(cplx w, int s) const {
  if (std::abs(w.imag()) < cauchy_.min_imag) throw PoleProximityError(std::abs(w.imag()), cauchy_.min_imag);
  if (s < 0) throw IndexError("negative moment shift");
  return *memo_lookup(mutex_, p_tilde_memo_, memoize_, key(w, s),
                      [&] { return std::make_shared<const std::vector<cplx>>(compute_P_tilde(w, s)); });
}

std::vector<cplx> TransformEvaluator::Q_tilde_shifted_all(cplx v, int s) const {
  if (std::abs(v.imag()) < cauchy_.min_imag) throw PoleProximityError(std::abs(v.imag()), cauchy_.min_imag);
  if (s < 0) throw IndexError("negative moment shift");
  return *memo_lookup(mutex_, q_tilde_memo_, memoize_, key(v, s),
                      [&] { return std::make_shared<const std::vector<cplx>>(compute_Q_tilde(v, s)); });
}

std::vector<cplx> TransformEvaluator::P_tilde_all(cplx w) const { return P_tilde_shifted_all(w, 0); }

std::vector<cplx> TransformEvaluator::Q_tilde_all(cplx v) const { return Q_tilde_shifted_all(v, 0); }

cplx TransformEvaluator::P_tilde(std::size_t i, cplx w) const {
  h_sq(i);
  return P_tilde_all(w)[i];
}

cplx TransformEvaluator::Q_tilde(std::size_t j, cplx v) const {
  h_sq(j);
  return Q_tilde_all(v)[j];
}

cplx TransformEvaluator::y_profile_at(cplx v, int s, double eta) const {
  const auto& xs = rules_.x.nodes;
  if (pole_is_far(rules_.x, v, cauchy_)) {
    CompensatedSum<cplx> sum;
    for (std::size_t a = 0; a < nx_; ++a) {
      sum.add(rules_.x.weights[a] * std::pow(xs[a], s) * std::exp(log_weight(model_, xs[a], eta)) / (v - xs[a]));
    }
    return sum.value();
  }
  return cauchy_integrate_1d([&](double xi) { return cplx(std::pow(xi, s) * std::exp(log_weight(model_, xi, eta))); },
                             v, rules_.x, cauchy_);
}

std::shared_ptr<const std::vector<cplx>> TransformEvaluator::y_profile(cplx v, int s) const {
  return memo_lookup(mutex_, profile_memo_, memoize_, key(v, s), [&] {
    std::vector<cplx> prof(ny_);
    if (pole_is_far(rules_.x, v, cauchy_)) {
      std::vector<cplx> k(nx_);
      for (std::size_t a = 0; a < nx_; ++a) {
        k[a] = rules_.x.weights[a] * std::pow(rules_.x.nodes[a], s) / (v - rules_.x.nodes[a]);
      }
      const double scale = std::exp(offset_);
      for (std::size_t b = 0; b < ny_; ++b) {
        CompensatedSum<cplx> s;
        for (std::size_t a = 0; a < nx_; ++a) s.add(k[a] * expw_[a * ny_ + b]);
        prof[b] = s.value() * scale;
      }
    } else {
      for (std::size_t b = 0; b < ny_; ++b) prof[b] = y_profile_at(v, s, rules_.y.nodes[b]);
    }
    return std::make_shared<const std::vector<cplx>>(std::move(prof));
  });
}

cplx TransformEvaluator::weight_cauchy(cplx w, cplx v, int sw, int sv) const {
  for (cplx z : {w, v}) {
    if (std::abs(z.imag()) < cauchy_.min_imag) throw PoleProximityError(std::abs(z.imag()), cauchy_.min_imag);
  }
  if (sw < 0 || sv < 0) throw IndexError("negative moment shift");
  const auto k = std::make_pair(key(w, sw), key(v, sv));
  if (memoize_) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = weight_memo_.find(k);
    if (it != weight_memo_.end()) return it->second;
  }
  cplx value;
  if (pole_is_far(rules_.y, w, cauchy_)) {
    const auto prof = y_profile(v, sv);
    CompensatedSum<cplx> s;
    for (std::size_t b = 0; b < ny_; ++b) {
      const double eta = rules_.y.nodes[b];
      s.add(rules_.y.weights[b] * std::pow(eta, sw) * (*prof)[b] / (w - eta));
    }
    value = s.value();
  } else {
    value = cauchy_integrate_1d([&](double eta) { return std::pow(eta, sw) * y_profile_at(v, sv, eta); }, w, rules_.y,
                                cauchy_);
  }
  if (memoize_) {
    std::lock_guard<std::mutex> lock(mutex_);
    weight_memo_.emplace(k, value);
  }
  return value;
}

}  // namespace twomat
