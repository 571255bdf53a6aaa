#include "twomat/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "twomat/errors.hpp"
#include "twomat/linalg.hpp"

namespace twomat {

namespace {

struct MatchingSum {
  const Eigen::MatrixXcd& M;
  const std::vector<cplx>& z;
  const std::vector<int>& axis;
  std::vector<char> alive;
  CompensatedSum<cplx> total;

  cplx minor() const {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (alive[i]) idx.push_back(static_cast<Eigen::Index>(i));
    }
    const auto s = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd sub(s, s);
    for (Eigen::Index r = 0; r < s; ++r) {
      for (Eigen::Index c = 0; c < s; ++c) {
        sub(r, c) = M(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
      }
    }
    return determinant(sub).value;
  }

  // Index i is either left unmatched or paired with a later same-axis index.
  void run(std::size_t i, cplx weight) {
    while (i < alive.size() && !alive[i]) ++i;
    if (i >= alive.size()) {
      total.add(weight * minor());
      return;
    }
    run(i + 1, weight);
    for (std::size_t k = i + 1; k < alive.size(); ++k) {
      if (!alive[k] || axis[k] != axis[i]) continue;
      const cplx d = z[i] - z[k];
      alive[i] = alive[k] = 0;
      run(i + 1, -weight / (d * d));
      alive[i] = alive[k] = 1;
    }
  }
};

void check_list(const std::vector<cplx>& zs, double floor, const char* what) {
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (std::abs(zs[i].imag()) < floor) throw PoleProximityError(std::abs(zs[i].imag()), floor);
    for (std::size_t k = i + 1; k < zs.size(); ++k) {
      if (std::abs(zs[i] - zs[k]) < kCoincidenceTol) throw CoincidenceError(std::string("coincident ") + what);
    }
  }
}

}  // namespace

cplx resolvent_generating(const KernelContext& ctx, const std::vector<cplx>& xs, const std::vector<cplx>& ys) {
  const double floor = ctx.transforms().cauchy_options().min_imag;
  check_list(xs, floor, "resolvent arguments in xs");
  check_list(ys, floor, "resolvent arguments in ys");
  const std::size_t I = xs.size(), J = ys.size();
  const auto S = static_cast<Eigen::Index>(I + J);
  Eigen::MatrixXcd M(S, S);
  std::vector<cplx> z(xs);
  z.insert(z.end(), ys.begin(), ys.end());
  std::vector<int> axis(I, 0);
  axis.resize(I + J, 1);
  for (std::size_t i = 0; i < I; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < I; ++k) {
      M(r, static_cast<Eigen::Index>(k)) = i == k ? ctx.K11_hat(xs[i]) : ctx.K11_tilde(xs[i], xs[k]);
    }
    for (std::size_t j = 0; j < J; ++j) M(r, static_cast<Eigen::Index>(I + j)) = ctx.K12_tilde(xs[i], ys[j]);
  }
  for (std::size_t j = 0; j < J; ++j) {
    const auto r = static_cast<Eigen::Index>(I + j);
    for (std::size_t k = 0; k < I; ++k) M(r, static_cast<Eigen::Index>(k)) = ctx.K21_tilde(ys[j], xs[k]);
    for (std::size_t l = 0; l < J; ++l) {
      M(r, static_cast<Eigen::Index>(I + l)) = j == l ? ctx.K22_hat(ys[j]) : ctx.K22_tilde(ys[j], ys[l]);
    }
  }
  MatchingSum ms{M, z, axis, std::vector<char>(I + J, 1), {}};
  ms.run(0, 1.0);
  return ms.total.value();
}

namespace {

double contour_sum(const KernelContext& ctx, const std::vector<int>& m_list, const std::vector<int>& p_list, double R,
                   std::size_t K) {
  const std::size_t I = m_list.size(), d = I + p_list.size();
  std::vector<int> exps(m_list);
  exps.insert(exps.end(), p_list.begin(), p_list.end());
  // Variable i on the circle of radius R(1 + 0.25 i); same-axis arguments
  // never meet and the trapezoid rule sees distinct circles.
  std::vector<std::vector<cplx>> pts(d), fac(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double r = R * (1.0 + 0.25 * static_cast<double>(i));
    for (std::size_t k = 0; k < K; ++k) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(K);
      const cplx zk = std::polar(r, theta);
      pts[i].push_back(zk);
      fac[i].push_back(std::pow(zk, exps[i] + 1));
    }
  }
  CompensatedSum<cplx> acc;
  std::vector<std::size_t> at(d, 0);
  std::vector<cplx> xs(I), ys(d - I);
  while (true) {
    cplx f = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      f *= fac[i][at[i]];
      if (i < I) {
        xs[i] = pts[i][at[i]];
      } else {
        ys[i - I] = pts[i][at[i]];
      }
    }
    acc.add(f * resolvent_generating(ctx, xs, ys));
    std::size_t i = 0;
    while (i < d && ++at[i] == K) at[i++] = 0;
    if (i == d) break;
  }
  return acc.value().real() / std::pow(static_cast<double>(K), static_cast<double>(d));
}

}  // namespace

TraceResult trace_product_average(const KernelContext& ctx, const std::vector<int>& m_list,
                                  const std::vector<int>& p_list, const ContourOptions& opts) {
  for (int m : m_list) {
    if (m < 0) throw UnsupportedConfigError("trace exponents must be nonnegative");
  }
  for (int p : p_list) {
    if (p < 0) throw UnsupportedConfigError("trace exponents must be nonnegative");
  }
  if (opts.points == 0) throw UnsupportedConfigError("contour needs at least one point");
  TraceResult out;
  out.radius = opts.radius;
  if (out.radius <= 0.0) {
    const Discretization& d = ctx.transforms().rules();
    out.radius = 2.0 * std::max({std::abs(d.x.lo()), std::abs(d.x.hi()), std::abs(d.y.lo()), std::abs(d.y.hi())});
  }
  out.value = contour_sum(ctx, m_list, p_list, out.radius, opts.points);
  if (opts.check_doubling) {
    const double doubled = contour_sum(ctx, m_list, p_list, 2.0 * out.radius, opts.points);
    out.doubling_change = std::abs(doubled - out.value);
    if (out.doubling_change > opts.doubling_tol * std::max(1.0, std::abs(out.value))) {
      throw ContourError("contour radius " + std::to_string(out.radius) + " too small: doubling changed the value by " +
                         std::to_string(out.doubling_change));
    }
  }
  return out;
}

double correlation(const KernelContext& ctx, const std::vector<double>& lams, const std::vector<double>& mus) {
  const std::size_t I = lams.size(), J = mus.size();
  const auto S = static_cast<Eigen::Index>(I + J);
  Eigen::MatrixXd M(S, S);
  for (std::size_t i = 0; i < I; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < I; ++k) M(r, static_cast<Eigen::Index>(k)) = ctx.K11(lams[i], lams[k]);
    for (std::size_t j = 0; j < J; ++j) M(r, static_cast<Eigen::Index>(I + j)) = ctx.K12(lams[i], mus[j]);
  }
  for (std::size_t j = 0; j < J; ++j) {
    const auto r = static_cast<Eigen::Index>(I + j);
    for (std::size_t k = 0; k < I; ++k) M(r, static_cast<Eigen::Index>(k)) = ctx.K21(mus[j], lams[k]);
    for (std::size_t l = 0; l < J; ++l) M(r, static_cast<Eigen::Index>(I + l)) = ctx.K22(mus[j], mus[l]);
  }
  return determinant(M);
}

}  // namespace twomat
