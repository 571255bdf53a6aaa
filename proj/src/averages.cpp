#include "twomat/averages.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twomat/errors.hpp"
#include "twomat/linalg.hpp"

namespace twomat {

const char* formula_name(Formula f) {
  switch (f) {
    case Formula::gencase_a:
      return "gencase_a";
    case Formula::gencase_b:
      return "gencase_b";
    case Formula::theorem1:
      return "theorem1";
    case Formula::theorem2:
      return "theorem2";
    case Formula::theorem3:
      return "theorem3";
    case Formula::theorem4:
      return "theorem4";
  }
  return "unknown";
}

int required_order(std::size_t n, const SourceConfig& cfg) {
  return static_cast<int>(n) + std::max(cfg.I() - cfg.K(), cfg.J() - cfg.L()) - 1;
}

namespace {

// prod_{i<j} (z_j - z_i)
cplx vandermonde(const std::vector<cplx>& z) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) out *= z[j] - z[i];
  }
  return out;
}

// prod_{k<l} (z_k - z_l), the reversed orientation used for denominator sources.
cplx vandermonde_rev(const std::vector<cplx>& z) {
  cplx out = 1.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    for (std::size_t l = k + 1; l < z.size(); ++l) out *= z[k] - z[l];
  }
  return out;
}

cplx cross(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx out = 1.0;
  for (cplx u : a) {
    for (cplx v : b) out *= u - v;
  }
  return out;
}

// (-1)^{(I+K)L} times the h^2 product for a trailing-row count `d`:
// prod_{i=0}^{d-1} h_{n+i}^2 when d >= 0, prod_{i=d}^{-1} h_{n+i}^{-2} otherwise.
cplx constant_C(const TransformEvaluator& T, std::size_t n, int d, int sign_exp) {
  cplx c = (sign_exp % 2 == 0) ? 1.0 : -1.0;
  const int nn = static_cast<int>(n);
  if (d >= 0) {
    for (int i = 0; i < d; ++i) c *= T.h_sq(static_cast<std::size_t>(nn + i));
  } else {
    for (int i = d; i < 0; ++i) c /= T.h_sq(static_cast<std::size_t>(nn + i));
  }
  return c;
}

Formula label(const SourceConfig& cfg) {
  const int I = cfg.I(), J = cfg.J(), K = cfg.K(), L = cfg.L();
  auto is = [&](int a, int b, int c, int d) { return I == a && J == b && K == c && L == d; };
  if (is(1, 0, 0, 0) || is(0, 1, 0, 0)) return Formula::theorem1;
  if (is(0, 0, 1, 0) || is(0, 0, 0, 1)) return Formula::theorem2;
  if (is(1, 0, 1, 0) || is(1, 1, 0, 0) || is(0, 0, 1, 1) || is(0, 1, 0, 1)) return Formula::theorem3;
  if (K == 0 && L == 0 && I >= J) return Formula::theorem4;
  return I - K >= J - L ? Formula::gencase_a : Formula::gencase_b;
}

void check_order(const TransformEvaluator& T, int needed) {
  if (needed > static_cast<int>(T.count()) - 1) {
    throw IndexError("configuration needs biorthogonal order " + std::to_string(needed) + ", available " +
                     std::to_string(T.count() - 1));
  }
}

}  // namespace

AverageResult average(const TransformEvaluator& T, std::size_t n, const SourceConfig& cfg, const AverageOptions& opts) {
  validate_sources(cfg, n, T.cauchy_options().min_imag);
  const int I = cfg.I(), J = cfg.J(), K = cfg.K(), L = cfg.L();
  const int nn = static_cast<int>(n);
  const int dA = I - K, dB = J - L;

  bool use_a = dA >= dB;
  if (opts.orientation == Orientation::a) {
    if (dA < dB) throw UnsupportedConfigError("orientation a needs I-K >= J-L");
    use_a = true;
  } else if (opts.orientation == Orientation::b) {
    if (dB < dA) throw UnsupportedConfigError("orientation b needs J-L >= I-K");
    use_a = false;
  }
  const int p_lo = std::min(dA, dB), p_hi = std::max(dA, dB);
  const int p = opts.p_shift.value_or(p_hi);
  if (p < p_lo || p > p_hi) {
    throw UnsupportedConfigError("kernel index shift " + std::to_string(p) + " outside [" + std::to_string(p_lo) +
                                 ", " + std::to_string(p_hi) + "]");
  }
  check_order(T, std::max(nn + p_hi - 1, nn + p - 1));
  const KernelContext ctx(T, static_cast<std::size_t>(nn + p));

  const std::size_t sz = static_cast<std::size_t>(use_a ? I + L : J + K);
  Eigen::MatrixXcd M(static_cast<Eigen::Index>(sz), static_cast<Eigen::Index>(sz));
  auto set = [&M](std::size_t r, std::size_t c, cplx v) {
    M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
  };
  std::vector<cplx> vals;
  if (use_a) {
    // Columns x_1..x_I, w_1..w_L. Rows v_k, y_j, then p_r / Ptil_r for
    // r = n+J-L .. n+I-K-1.
    for (int i = 0; i < I; ++i) {
      const cplx x = cfg.xs[static_cast<std::size_t>(i)];
      const auto c = static_cast<std::size_t>(i);
      for (int k = 0; k < K; ++k)
        set(static_cast<std::size_t>(k), c, ctx.K11_tilde(x, cfg.vs[static_cast<std::size_t>(k)]));
      for (int j = 0; j < J; ++j)
        set(static_cast<std::size_t>(K + j), c, ctx.K12_tilde(x, cfg.ys[static_cast<std::size_t>(j)]));
      if (dA > dB) {
        eval_p_all(T.system(), static_cast<std::size_t>(nn + dA), x, vals);
        for (int r = nn + dB; r < nn + dA; ++r)
          set(static_cast<std::size_t>(K + J + r - nn - dB), c, vals[static_cast<std::size_t>(r)]);
      }
    }
    for (int l = 0; l < L; ++l) {
      const cplx w = cfg.ws[static_cast<std::size_t>(l)];
      const auto c = static_cast<std::size_t>(I + l);
      for (int k = 0; k < K; ++k)
        set(static_cast<std::size_t>(k), c, ctx.K21_tilde(w, cfg.vs[static_cast<std::size_t>(k)]));
      for (int j = 0; j < J; ++j)
        set(static_cast<std::size_t>(K + j), c, ctx.K22_tilde(w, cfg.ys[static_cast<std::size_t>(j)]));
      if (dA > dB) {
        const auto pt = T.P_tilde_all(w);
        for (int r = nn + dB; r < nn + dA; ++r)
          set(static_cast<std::size_t>(K + J + r - nn - dB), c, pt[static_cast<std::size_t>(r)]);
      }
    }
  } else {
    // Rows x_1..x_I, w_1..w_L, then Qtil_r / q_r for r = n+I-K .. n+J-L-1.
    // Columns v_1..v_K, y_1..y_J.
    for (int k = 0; k < K; ++k) {
      const cplx v = cfg.vs[static_cast<std::size_t>(k)];
      const auto c = static_cast<std::size_t>(k);
      for (int i = 0; i < I; ++i)
        set(static_cast<std::size_t>(i), c, ctx.K11_tilde(cfg.xs[static_cast<std::size_t>(i)], v));
      for (int l = 0; l < L; ++l)
        set(static_cast<std::size_t>(I + l), c, ctx.K21_tilde(cfg.ws[static_cast<std::size_t>(l)], v));
      if (dB > dA) {
        const auto qt = T.Q_tilde_all(v);
        for (int r = nn + dA; r < nn + dB; ++r)
          set(static_cast<std::size_t>(I + L + r - nn - dA), c, qt[static_cast<std::size_t>(r)]);
      }
    }
    for (int j = 0; j < J; ++j) {
      const cplx y = cfg.ys[static_cast<std::size_t>(j)];
      const auto c = static_cast<std::size_t>(K + j);
      for (int i = 0; i < I; ++i)
        set(static_cast<std::size_t>(i), c, ctx.K12_tilde(cfg.xs[static_cast<std::size_t>(i)], y));
      for (int l = 0; l < L; ++l)
        set(static_cast<std::size_t>(I + l), c, ctx.K22_tilde(cfg.ws[static_cast<std::size_t>(l)], y));
      if (dB > dA) {
        eval_q_all(T.system(), static_cast<std::size_t>(nn + dB), y, vals);
        for (int r = nn + dA; r < nn + dB; ++r)
          set(static_cast<std::size_t>(I + L + r - nn - dA), c, vals[static_cast<std::size_t>(r)]);
      }
    }
  }

  const Determinant det = determinant(M);
  const cplx C = constant_C(T, n, use_a ? dB : dA, (I + K) * L);
  const cplx pref = cross(cfg.xs, cfg.vs) * cross(cfg.ys, cfg.ws) /
                    (vandermonde(cfg.xs) * vandermonde_rev(cfg.vs) * vandermonde(cfg.ys) * vandermonde_rev(cfg.ws));

  AverageResult out;
  out.value = C * pref * det.value;
  out.p_index_used = p;
  out.condition_estimate = det.condition;
  out.formula_used = opts.orientation == Orientation::automatic ? label(cfg)
                     : use_a                                    ? Formula::gencase_a
                                                                : Formula::gencase_b;
  return out;
}

cplx average_numerator_only(const TransformEvaluator& T, std::size_t n, const std::vector<cplx>& xs,
                            const std::vector<cplx>& ys, std::optional<int> p_shift) {
  const int I = static_cast<int>(xs.size()), J = static_cast<int>(ys.size());
  if (I < J) throw UnsupportedConfigError("numerator-only formula needs I >= J");
  SourceConfig cfg{xs, ys, {}, {}};
  validate_sources(cfg, n, T.cauchy_options().min_imag);
  const int nn = static_cast<int>(n);
  const int p = p_shift.value_or(I);
  if (p < J || p > I) throw UnsupportedConfigError("kernel index shift outside [J, I]");
  check_order(T, std::max(nn + I - 1, nn + p - 1));
  const KernelContext ctx(T, static_cast<std::size_t>(nn + p));

  Eigen::MatrixXcd M(I, I);
  std::vector<cplx> vals;
  for (int i = 0; i < I; ++i) {
    const cplx x = xs[static_cast<std::size_t>(i)];
    for (int j = 0; j < J; ++j) M(i, j) = ctx.K12_tilde(x, ys[static_cast<std::size_t>(j)]);
    eval_p_all(T.system(), static_cast<std::size_t>(nn + I), x, vals);
    for (int c = J; c < I; ++c) M(i, c) = vals[static_cast<std::size_t>(nn + c)];
  }
  cplx pref = 1.0;
  for (int i = 0; i < J; ++i) pref *= T.h_sq(static_cast<std::size_t>(nn + i));
  return pref / (vandermonde(xs) * vandermonde(ys)) * determinant(M).value;
}

namespace {

constexpr double kDegenerateCondition = 1e14;

Determinant checked_denominator(const Eigen::MatrixXcd& M) {
  const Determinant d = determinant(M);
  if (!(d.condition < kDegenerateCondition) || d.value == cplx(0.0)) {
    throw UnsupportedConfigError("degenerate source configuration: denominator determinant is singular");
  }
  return d;
}

cplx k12(const BiorthogonalSystem& sys, std::size_t m, cplx x, cplx y) {
  std::vector<cplx> p, q;
  eval_p_all(sys, m, x, p);
  eval_q_all(sys, m, y, q);
  CompensatedSum<cplx> s;
  for (std::size_t i = 0; i < m; ++i) s.add(p[i] * q[i] / sys.h_sq[i]);
  return s.value();
}

}  // namespace

cplx christoffel_A(const BiorthogonalSystem& sys, std::size_t n, const std::vector<cplx>& xs, cplx x) {
  const std::size_t I = xs.size();
  if (n + I > sys.order) throw IndexError("christoffel_A needs order " + std::to_string(n + I));
  for (std::size_t i = 0; i < I; ++i) {
    if (std::abs(x - xs[i]) < kDistinctTol) throw CoincidenceError("christoffel_A evaluated at a source point");
    for (std::size_t j = i + 1; j < I; ++j) {
      if (std::abs(xs[i] - xs[j]) < kDistinctTol) throw DistinctnessError("christoffel_A sources not distinct");
    }
  }
  const auto S = static_cast<Eigen::Index>(I);
  Eigen::MatrixXcd num(S + 1, S + 1), den(S, S);
  std::vector<cplx> vals;
  for (Eigen::Index r = 0; r <= S; ++r) {
    const cplx z = r < S ? xs[static_cast<std::size_t>(r)] : x;
    eval_p_all(sys, n + I + 1, z, vals);
    for (Eigen::Index c = 0; c <= S; ++c) {
      num(r, c) = vals[n + static_cast<std::size_t>(c)];
      if (r < S && c < S) den(r, c) = vals[n + static_cast<std::size_t>(c)];
    }
  }
  const Determinant d = checked_denominator(den);
  cplx prod = 1.0;
  for (cplx xi : xs) prod *= x - xi;
  return determinant(num).value / (prod * d.value);
}

cplx christoffel_B(const BiorthogonalSystem& sys, std::size_t n, const std::vector<cplx>& xs,
                   const std::vector<cplx>& ys, cplx y) {
  const std::size_t I = xs.size(), J = ys.size();
  if (I <= J) throw UnsupportedConfigError("christoffel_B needs I > J");
  if (n + I > sys.order + 1) throw IndexError("christoffel_B needs order " + std::to_string(n + I - 1));
  for (std::size_t j = 0; j < J; ++j) {
    if (std::abs(y - ys[j]) < kDistinctTol) throw CoincidenceError("christoffel_B evaluated at a source point");
  }
  SourceConfig cfg{xs, ys, {}, {}};
  validate_sources(cfg, n, 0.0);
  const std::size_t m = n + I;
  const auto S = static_cast<Eigen::Index>(I);
  Eigen::MatrixXcd num(S, S), den(S, S);
  std::vector<cplx> vals;
  for (Eigen::Index r = 0; r < S; ++r) {
    const cplx x = xs[static_cast<std::size_t>(r)];
    eval_p_all(sys, n + I, x, vals);
    for (std::size_t j = 0; j < J; ++j) {
      const cplx k = k12(sys, m, x, ys[j]);
      num(r, static_cast<Eigen::Index>(j)) = k;
      den(r, static_cast<Eigen::Index>(j)) = k;
    }
    num(r, static_cast<Eigen::Index>(J)) = k12(sys, m, x, y);
    for (std::size_t c = J + 1; c < I; ++c) num(r, static_cast<Eigen::Index>(c)) = vals[n + c];
    for (std::size_t c = J; c < I; ++c) den(r, static_cast<Eigen::Index>(c)) = vals[n + c];
  }
  const Determinant d = checked_denominator(den);
  cplx prod = 1.0;
  for (cplx yj : ys) prod *= y - yj;
  return sys.h_sq[n + J] / prod * determinant(num).value / d.value;
}

}  // namespace twomat
