#include "twomat/biorth.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "twomat/errors.hpp"

namespace twomat {

double BimomentMatrix::entry(std::size_t i, std::size_t j) const {
  return scaled(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * std::pow(sx, static_cast<double>(i)) *
         std::pow(sy, static_cast<double>(j));
}

Eigen::MatrixXd BimomentMatrix::unscaled() const {
  Eigen::MatrixXd out(scaled.rows(), scaled.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return out;
}

namespace {

struct Moments {
  Eigen::MatrixXd value;
  Eigen::MatrixXd mass;  // integral of |x^i y^j| * weight
};

// All x^i y^j moments (scaled variables) on one tensor rule. Row sums over x
// first, then the y sum, each compensated.
Moments tensor_moments(const ModelSpec& model, const QuadratureRule& rx, const QuadratureRule& ry, std::size_t size,
                       double sx, double sy) {
  const std::size_t nx = rx.nodes.size(), ny = ry.nodes.size();
  std::vector<double> lw(nx * ny);
  double offset = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      lw[a * ny + b] = log_weight(model, rx.nodes[a], ry.nodes[b]);
      offset = std::max(offset, lw[a * ny + b]);
    }
  }
  // xpow[a][i] = (x_a / sx)^i
  auto powers = [size](const std::vector<double>& nodes, double s) {
    std::vector<double> out(nodes.size() * size);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      double v = 1.0;
      for (std::size_t i = 0; i < size; ++i) {
        out[a * size + i] = v;
        v *= nodes[a] / s;
      }
    }
    return out;
  };
  const auto xpow = powers(rx.nodes, sx);
  const auto ypow = powers(ry.nodes, sy);

  const auto S = static_cast<Eigen::Index>(size);
  Moments m{Eigen::MatrixXd::Zero(S, S), Eigen::MatrixXd::Zero(S, S)};
  std::vector<std::vector<CompensatedSum<double>>> acc(size, std::vector<CompensatedSum<double>>(size));
  std::vector<std::vector<CompensatedSum<double>>> acc_abs(size, std::vector<CompensatedSum<double>>(size));
  for (std::size_t b = 0; b < ny; ++b) {
    std::vector<CompensatedSum<double>> r(size), ra(size);
    for (std::size_t a = 0; a < nx; ++a) {
      const double w = rx.weights[a] * std::exp(lw[a * ny + b] - offset);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < size; ++i) {
        const double t = w * xpow[a * size + i];
        r[i].add(t);
        ra[i].add(std::abs(t));
      }
    }
    for (std::size_t i = 0; i < size; ++i) {
      const double ri = r[i].value(), rai = ra[i].value();
      for (std::size_t j = 0; j < size; ++j) {
        const double yw = ry.weights[b] * ypow[b * size + j];
        acc[i][j].add(ri * yw);
        acc_abs[i][j].add(rai * std::abs(yw));
      }
    }
  }
  const double e = std::exp(offset);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      m.value(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc[i][j].value() * e;
      m.mass(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc_abs[i][j].value() * e;
    }
  }
  return m;
}

}  // namespace

BimomentMatrix compute_bimoments(const ModelSpec& model, const Discretization& rules, std::size_t N, double tol) {
  model.validate();
  const std::size_t size = N + 1;
  // Second moments fix the scaling; they come from a first pass of order 2.
  const Moments low = tensor_moments(model, rules.x, rules.y, 3, 1.0, 1.0);
  const double g00 = low.value(0, 0);
  if (!(g00 > 0.0)) throw BimomentError(0, 0, std::abs(g00));
  const double sx = std::sqrt(low.value(2, 0) / g00);
  const double sy = std::sqrt(low.value(0, 2) / g00);

  const Moments base = tensor_moments(model, rules.x, rules.y, size, sx, sy);
  const Moments fine = tensor_moments(model, refine(rules.x), refine(rules.y), size, sx, sy);

  BimomentMatrix G;
  G.order = size;
  G.scaled = base.value;
  G.errors = (fine.value - base.value).cwiseAbs();
  G.sx = sx;
  G.sy = sy;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      if (!(G.errors(ii, jj) <= tol * base.mass(ii, jj))) throw BimomentError(i, j, G.errors(ii, jj));
    }
  }
  return G;
}

BiorthogonalSystem biorthogonalize(const BimomentMatrix& G, double pivot_tol) {
  const Eigen::Index S = G.scaled.rows();
  if (S == 0) throw DegeneracyError(0);
  const double norm = G.scaled.cwiseAbs().maxCoeff();

  // Doolittle LDU: G = L D U, L unit lower, U unit upper.
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(S, S);
  Eigen::MatrixXd U = Eigen::MatrixXd::Identity(S, S);
  Eigen::VectorXd D(S);
  for (Eigen::Index k = 0; k < S; ++k) {
    double d = G.scaled(k, k);
    for (Eigen::Index m = 0; m < k; ++m) d -= L(k, m) * D(m) * U(m, k);
    if (!(std::abs(d) > pivot_tol * norm)) throw DegeneracyError(static_cast<std::size_t>(k));
    D(k) = d;
    for (Eigen::Index i = k + 1; i < S; ++i) {
      double lik = G.scaled(i, k), ukj = G.scaled(k, i);
      for (Eigen::Index m = 0; m < k; ++m) {
        lik -= L(i, m) * D(m) * U(m, k);
        ukj -= L(k, m) * D(m) * U(m, i);
      }
      L(i, k) = lik / d;
      U(k, i) = ukj / d;
    }
  }
  const Eigen::MatrixXd Linv = L.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(S, S));
  const Eigen::MatrixXd Uinv = U.triangularView<Eigen::UnitUpper>().solve(Eigen::MatrixXd::Identity(S, S));

  BiorthogonalSystem sys;
  sys.order = static_cast<std::size_t>(S - 1);
  sys.p_coeffs.resize(static_cast<std::size_t>(S));
  sys.q_coeffs.resize(static_cast<std::size_t>(S));
  sys.h_sq.resize(static_cast<std::size_t>(S));
  for (Eigen::Index n = 0; n < S; ++n) {
    auto& p = sys.p_coeffs[static_cast<std::size_t>(n)];
    auto& q = sys.q_coeffs[static_cast<std::size_t>(n)];
    p.resize(static_cast<std::size_t>(n + 1));
    q.resize(static_cast<std::size_t>(n + 1));
    for (Eigen::Index k = 0; k <= n; ++k) {
      const double ex = static_cast<double>(n - k);
      p[static_cast<std::size_t>(k)] = Linv(n, k) * std::pow(G.sx, ex);
      q[static_cast<std::size_t>(k)] = Uinv(k, n) * std::pow(G.sy, ex);
    }
    p.back() = 1.0;
    q.back() = 1.0;
    sys.h_sq[static_cast<std::size_t>(n)] =
        D(n) * std::pow(G.sx, static_cast<double>(n)) * std::pow(G.sy, static_cast<double>(n));
  }
  return sys;
}

namespace {

template <typename T>
T horner_row(const std::vector<double>& c, T z) {
  T acc = T(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + T(*it);
  return acc;
}

const std::vector<double>& row(const std::vector<std::vector<double>>& table, std::size_t n, std::size_t order,
                               const char* name) {
  if (n > order) {
    throw IndexError(std::string(name) + " index " + std::to_string(n) + " exceeds order " + std::to_string(order));
  }
  return table[n];
}

void eval_all(const std::vector<std::vector<double>>& table, std::size_t order, std::size_t count, cplx z,
              std::vector<cplx>& out, const char* name) {
  if (count > order + 1) {
    throw IndexError(std::string(name) + " count " + std::to_string(count) + " exceeds order " + std::to_string(order));
  }
  out.resize(count);
  for (std::size_t n = 0; n < count; ++n) out[n] = horner_row(table[n], z);
}

}  // namespace

cplx eval_p(const BiorthogonalSystem& sys, std::size_t n, cplx z) {
  return horner_row(row(sys.p_coeffs, n, sys.order, "p"), z);
}
cplx eval_q(const BiorthogonalSystem& sys, std::size_t n, cplx z) {
  return horner_row(row(sys.q_coeffs, n, sys.order, "q"), z);
}
double eval_p(const BiorthogonalSystem& sys, std::size_t n, double z) {
  return horner_row(row(sys.p_coeffs, n, sys.order, "p"), z);
}
double eval_q(const BiorthogonalSystem& sys, std::size_t n, double z) {
  return horner_row(row(sys.q_coeffs, n, sys.order, "q"), z);
}

void eval_p_all(const BiorthogonalSystem& sys, std::size_t count, cplx z, std::vector<cplx>& out) {
  eval_all(sys.p_coeffs, sys.order, count, z, out, "p");
}
void eval_q_all(const BiorthogonalSystem& sys, std::size_t count, cplx z, std::vector<cplx>& out) {
  eval_all(sys.q_coeffs, sys.order, count, z, out, "q");
}

BiorthogonalSystem build_system(const ModelSpec& model, const Discretization& rules, std::size_t N,
                                std::size_t max_order) {
  if (N > max_order) {
    throw UnsupportedConfigError("order " + std::to_string(N) + " exceeds the guard " + std::to_string(max_order) +
                                 "; raise it explicitly to proceed");
  }
  return biorthogonalize(compute_bimoments(model, rules, N));
}

}  // namespace twomat
