#include "twomat/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "twomat/errors.hpp"

namespace twomat {

Workspace::Workspace(ModelSpec model, std::size_t nodes, std::size_t max_order)
    : model_(std::move(model)), nodes_(nodes) {
  model_.validate();
  rules_ = make_discretization(model_, nodes_);
  T_ = std::make_unique<TransformEvaluator>(model_, build_system(model_, rules_, max_order, max_order), rules_);
}

const BruteForceOracle& Workspace::oracle() const {
  if (!oracle_) oracle_ = std::make_unique<BruteForceOracle>(model_, nodes_);
  return *oracle_;
}

namespace {

using Clock = std::chrono::steady_clock;

// Running maximum of a residual under one check name.
class Tracker {
 public:
  Tracker(std::string name, double tol) : start_(Clock::now()) {
    r_.name = std::move(name);
    r_.tolerance = tol;
  }
  void add(double residual, const std::string& where) {
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    if (count_ == 0 || residual > r_.residual) {
      r_.residual = residual;
      r_.detail = where;
    }
    ++count_;
  }
  void fail(const std::string& why) {
    r_.residual = std::numeric_limits<double>::infinity();
    r_.detail = why;
    ++count_;
  }
  CheckResult done() {
    r_.passed = count_ > 0 && r_.residual <= r_.tolerance;
    r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    if (r_.detail.empty()) r_.detail = std::to_string(count_) + " cases";
    return r_;
  }

 private:
  CheckResult r_;
  std::size_t count_ = 0;
  Clock::time_point start_;
};

std::string fmt(const char* key, double v) {
  std::ostringstream os;
  os << key << "=" << v;
  return os.str();
}

double rel(cplx a, cplx b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

cplx poly(const std::vector<double>& c, cplx t) {
  cplx out = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) out = out * t + *it;
  return out;
}

// Vectors memoized per real node, for integrands evaluated on tensor grids.
class NodeCache {
 public:
  explicit NodeCache(std::function<std::vector<cplx>(double)> f) : f_(std::move(f)) {}
  const std::vector<cplx>& operator()(double t) {
    auto it = map_.find(t);
    if (it == map_.end()) it = map_.emplace(t, f_(t)).first;
    return it->second;
  }

 private:
  std::function<std::vector<cplx>(double)> f_;
  std::map<double, std::vector<cplx>> map_;
};

cplx off_axis(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-1.5, 1.5), im(0.5, 2.0);
  const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
  const double r = re(rng);
  return {r, sign * im(rng)};
}

}  // namespace

CheckResult check_biorthogonality(const Workspace& ws, std::size_t N, double tol) {
  Tracker t("biorthogonality", tol);
  const auto& sys = ws.system();
  N = std::min(N, sys.order);
  for (std::size_t i = 0; i <= N; ++i) {
    for (std::size_t j = 0; j <= N; ++j) {
      const auto r = integrate_2d(
          ws.model(), [&](double x, double y) { return cplx(eval_p(sys, i, x) * eval_q(sys, j, y)); }, ws.rules().x,
          ws.rules().y);
      const double expect = i == j ? sys.h_sq[i] : 0.0;
      t.add(std::abs(r.value - expect) / std::sqrt(sys.h_sq[i] * sys.h_sq[j]),
            "i=" + std::to_string(i) + " j=" + std::to_string(j));
    }
  }
  return t.done();
}

std::vector<CheckResult> check_kernel_lemmas(const Workspace& ws, std::size_t max_n, std::uint64_t seed, double tol) {
  const auto& T = ws.transforms();
  const auto& R = ws.rules();
  const auto& model = ws.model();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> real(-1.5, 1.5), coef(-1.0, 1.0);

  std::vector<Tracker> tr;
  const char* names[] = {"K11_tilde:sum_vs_integral", "K21_tilde:sum_vs_integral", "K22_tilde:sum_vs_integral",
                         "K11:reproducing",           "K22:reproducing",           "K12:reproducing_x",
                         "K12:reproducing_y",         "K11_tilde:vanishing",       "K22_tilde:vanishing",
                         "P_tilde:double_integral",   "K22_tilde:from_K12",        "K21_tilde:from_K11_tilde"};
  for (const char* n : names) tr.emplace_back(n, tol);

  NodeCache Pc([&](double eta) { return T.P_all(eta); });
  NodeCache Qc([&](double xi) { return T.Q_all(xi); });

  for (std::size_t n = 1; n <= max_n; ++n) {
    const KernelContext C(T, n);
    const double x = real(rng), y = real(rng);
    const cplx v = off_axis(rng), w = off_axis(rng);
    std::vector<double> pc(n), qc(n);
    for (auto& c : pc) c = coef(rng);
    for (auto& c : qc) c = coef(rng);
    const std::string where = "n=" + std::to_string(n);
    auto guard = [&](std::size_t k, const std::function<void()>& body) {
      try {
        body();
      } catch (const Error& e) {
        tr[k].fail(where + ": " + e.what());
      }
    };

    guard(0, [&] {
      const cplx lhs = C.K11_tilde(x, v);
      const cplx rhs =
          cauchy_integrate_1d([&](double xi) { return cplx((x - xi) * C.K11(x, xi)); }, v, R.x, T.cauchy_options()) /
          (x - v);
      tr[0].add(rel(lhs, rhs, std::max(std::abs(lhs), std::abs(rhs))), where);
    });
    guard(1, [&] {
      const cplx lhs = C.K21_tilde(w, v);
      const auto res = integrate_2d_poles(
          [&](double xi, double eta) {
            const auto& P = Pc(eta);
            const auto& Q = Qc(xi);
            cplx k = 0.0;
            for (std::size_t i = 0; i < n; ++i) k += P[i] * Q[i] / T.h_sq(i);
            k -= T.weight(xi, eta);
            return k / ((w - eta) * (v - xi));
          },
          R.x, R.y, {v}, {w}, 1e-11, T.cauchy_options());
      tr[1].add(rel(lhs, res.value, std::max(res.scale, std::abs(lhs))), where);
    });
    guard(2, [&] {
      const cplx lhs = C.K22_tilde(w, y);
      const cplx rhs =
          cauchy_integrate_1d([&](double eta) { return cplx((y - eta) * C.K22(eta, y)); }, w, R.y, T.cauchy_options()) /
          (y - w);
      tr[2].add(rel(lhs, rhs, std::max(std::abs(lhs), std::abs(rhs))), where);
    });
    guard(3, [&] {
      CompensatedSum<double> s, m;
      for (std::size_t a = 0; a < R.x.nodes.size(); ++a) {
        const double xi = R.x.nodes[a];
        const double v1 = R.x.weights[a] * poly(pc, xi).real() * C.K11(x, xi);
        s.add(v1);
        m.add(std::abs(v1));
      }
      const double expect = poly(pc, x).real();
      tr[3].add(std::abs(s.value() - expect) / std::max(m.value(), std::abs(expect)), where);
    });
    guard(4, [&] {
      CompensatedSum<double> s, m;
      for (std::size_t b = 0; b < R.y.nodes.size(); ++b) {
        const double eta = R.y.nodes[b];
        const double v1 = R.y.weights[b] * poly(qc, eta).real() * C.K22(eta, y);
        s.add(v1);
        m.add(std::abs(v1));
      }
      const double expect = poly(qc, y).real();
      tr[4].add(std::abs(s.value() - expect) / std::max(m.value(), std::abs(expect)), where);
    });
    guard(5, [&] {
      const auto r = integrate_2d(model, [&](double xi, double yy) { return C.K12(x, yy) * poly(pc, xi); }, R.x, R.y);
      tr[5].add(rel(r.value, poly(pc, x), std::max(r.scale, std::abs(poly(pc, x)))), where);
    });
    guard(6, [&] {
      const auto r = integrate_2d(model, [&](double xx, double eta) { return C.K12(xx, y) * poly(qc, eta); }, R.x, R.y);
      tr[6].add(rel(r.value, poly(qc, y), std::max(r.scale, std::abs(poly(qc, y)))), where);
    });
    guard(7, [&] {
      const auto r = integrate_2d_poles(
          [&](double xi, double eta) { return C.K11_tilde(xi, v) * poly(qc, eta) * T.weight(xi, eta); }, R.x, R.y, {v},
          {}, 1e-11, T.cauchy_options());
      tr[7].add(std::abs(r.value) / r.scale, where);
    });
    guard(8, [&] {
      const auto r = integrate_2d_poles(
          [&](double xi, double eta) { return C.K22_tilde(w, eta) * poly(pc, xi) * T.weight(xi, eta); }, R.x, R.y, {},
          {w}, 1e-11, T.cauchy_options());
      tr[8].add(std::abs(r.value) / r.scale, where);
    });
    guard(9, [&] {
      const auto& sys = T.system();
      const auto r =
          integrate_2d_poles([&](double xi, double eta) { return eval_p(sys, n, xi) * T.weight(xi, eta) / (w - eta); },
                             R.x, R.y, {}, {w}, 1e-11, T.cauchy_options());
      const cplx lhs = T.P_tilde(n, w);
      tr[9].add(rel(lhs, r.value, std::max(r.scale, std::abs(lhs))), where);
    });
    guard(10, [&] {
      const auto r = integrate_2d_poles(
          [&](double xi, double eta) { return C.K12_tilde(xi, y) * T.weight(xi, eta) * (y - eta) / (w - eta); }, R.x,
          R.y, {}, {w}, 1e-11, T.cauchy_options());
      const cplx lhs = C.K22_tilde(w, y);
      const cplx rhs = r.value / (y - w);
      tr[10].add(rel(lhs, rhs, std::max(r.scale / std::abs(y - w), std::abs(lhs))), where);
    });
    guard(11, [&] {
      const auto r =
          integrate_2d_poles([&](double xi, double eta) { return C.K11_tilde(xi, v) * T.weight(xi, eta) / (w - eta); },
                             R.x, R.y, {v}, {w}, 1e-11, T.cauchy_options());
      const cplx lhs = C.K21_tilde(w, v);
      tr[11].add(rel(lhs, r.value, std::max(r.scale, std::abs(lhs))), where);
    });
  }
  std::vector<CheckResult> out;
  for (auto& t : tr) out.push_back(t.done());
  return out;
}

std::vector<CheckResult> check_asymptotics(const Workspace& ws, std::size_t n, bool require_halving, double radius) {
  const auto& T = ws.transforms();
  const auto& sys = T.system();
  if (n < 1 || n + 1 > T.count()) throw IndexError("asymptotic checks need 1 <= n < order");
  const KernelContext C(T, n);
  const double x0 = 0.4, y0 = -0.3;
  const cplx v0{0.3, 0.8}, w0{-0.2, 0.9};
  const double hn1 = T.h_sq(n - 1), hn = T.h_sq(n);
  const int ni = static_cast<int>(n);
  auto dir = [](double r) { return std::polar(r, std::numbers::pi / 3.0); };
  const cplx Qn1 = T.Q_tilde(n - 1, v0), Qn = T.Q_tilde(n, v0);
  const cplx Pn1 = T.P_tilde(n - 1, w0), Pn = T.P_tilde(n, w0);

  using Ratio = std::function<cplx(cplx)>;
  const std::vector<std::pair<const char*, Ratio>> stmts = {
      {"p:large_z", [&](cplx z) { return eval_p(sys, n, z) / std::pow(z, ni); }},
      {"q:large_z", [&](cplx z) { return eval_q(sys, n, z) / std::pow(z, ni); }},
      {"P_tilde:large_w", [&](cplx z) { return T.P_tilde(n, z) * std::pow(z, ni + 1) / hn; }},
      {"Q_tilde:large_v", [&](cplx z) { return T.Q_tilde(n, z) * std::pow(z, ni + 1) / hn; }},
      {"K11_tilde:large_x", [&](cplx z) { return C.K11_tilde(z, v0) / (Qn1 * std::pow(z, ni - 1) / hn1); }},
      {"K11_tilde:large_v",
       [&](cplx z) { return C.K11_tilde(x0, z) / (-eval_p(sys, n, cplx(x0)) * std::pow(z, -ni - 1)); }},
      {"K12:large_x",
       [&](cplx z) { return C.K12_tilde(z, y0) / (eval_q(sys, n - 1, cplx(y0)) * std::pow(z, ni - 1) / hn1); }},
      {"K12:large_y",
       [&](cplx z) { return C.K12_tilde(x0, z) / (eval_p(sys, n - 1, cplx(x0)) * std::pow(z, ni - 1) / hn1); }},
      {"K21_tilde:large_w", [&](cplx z) { return C.K21_tilde(z, v0) / (-Qn * std::pow(z, -ni - 1)); }},
      {"K21_tilde:large_v", [&](cplx z) { return C.K21_tilde(w0, z) / (-Pn * std::pow(z, -ni - 1)); }},
      {"K22_tilde:large_w",
       [&](cplx z) { return C.K22_tilde(z, y0) / (-eval_q(sys, n, cplx(y0)) * std::pow(z, -ni - 1)); }},
      {"K22_tilde:large_y", [&](cplx z) { return C.K22_tilde(w0, z) / (Pn1 * std::pow(z, ni - 1) / hn1); }},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, ratio] : stmts) {
    const auto start = Clock::now();
    CheckResult r;
    r.name = name;
    r.tolerance = 5e-2;
    try {
      const double d1 = std::abs(ratio(dir(radius)) - 1.0);
      const double d2 = std::abs(ratio(dir(2.0 * radius)) - 1.0);
      const double q = d2 / d1;
      // Some statements are exact at small n (K12 at n = 1 is constant);
      // there is no correction term left to halve.
      const bool exact = d1 <= 1e-12 && d2 <= 1e-12;
      const bool decay = exact || (require_halving ? (q >= 0.4 && q <= 0.6) : (q <= 0.6));
      r.residual = d1;
      r.passed = d1 < 5e-2 && decay;
      std::ostringstream os;
      os << "n=" << n << " dev(" << radius << ")=" << d1 << " dev(" << 2 * radius << ")=" << d2 << " ratio=" << q;
      r.detail = os.str();
    } catch (const Error& e) {
      r.residual = std::numeric_limits<double>::infinity();
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.push_back(r);
  }
  return out;
}

std::vector<CheckResult> check_average_sweep(const Workspace& ws, const SweepOptions& opts) {
  const auto& T = ws.transforms();
  const auto& O = ws.oracle();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im_num(-1.0, 1.0), im_den(0.5, 3.0);
  std::bernoulli_distribution coin(0.5);
  auto numerator = [&] { return cplx(re(rng), im_num(rng)); };
  auto denominator = [&] { return cplx(re(rng), (coin(rng) ? 1.0 : -1.0) * im_den(rng)); };

  Tracker agree("average:oracle", opts.oracle_tol), shift("average:index_shift", opts.shift_tol),
      orient("average:orientation", opts.shift_tol), perm("average:permutation", 1e-10);
  const int S = opts.max_sources;
  for (std::size_t n = 1; n <= opts.max_n; ++n) {
    const int ni = static_cast<int>(n);
    for (int I = 0; I <= S; ++I) {
      for (int J = 0; I + J <= S; ++J) {
        for (int K = 0; I + J + K <= S; ++K) {
          for (int L = 0; I + J + K + L <= S; ++L) {
            if (std::min(I - K, J - L) < -ni) continue;
            for (std::size_t d = 0; d < opts.draws; ++d) {
              SourceConfig c;
              for (int i = 0; i < I; ++i) c.xs.push_back(numerator());
              for (int i = 0; i < J; ++i) c.ys.push_back(numerator());
              for (int i = 0; i < K; ++i) c.vs.push_back(denominator());
              for (int i = 0; i < L; ++i) c.ws.push_back(denominator());
              std::ostringstream os;
              os << "n=" << n << " (" << I << "," << J << "," << K << "," << L << ") draw " << d;
              const std::string where = os.str();
              try {
                const AverageResult a = average(T, n, c);
                const cplx o = O.average(n, c);
                agree.add(std::abs(a.value - o) / std::abs(o), where);
                const int lo = std::min(I - K, J - L), hi = std::max(I - K, J - L);
                for (int p = lo; p <= hi; ++p) {
                  AverageOptions ao;
                  ao.p_shift = p;
                  shift.add(std::abs(average(T, n, c, ao).value - a.value) / std::abs(a.value), where);
                }
                if (I - K == J - L) {
                  AverageOptions oa, ob;
                  oa.orientation = Orientation::a;
                  ob.orientation = Orientation::b;
                  orient.add(std::abs(average(T, n, c, oa).value - average(T, n, c, ob).value) / std::abs(a.value),
                             where);
                }
                if (d == 0) {
                  SourceConfig r = c;
                  std::reverse(r.xs.begin(), r.xs.end());
                  std::reverse(r.ys.begin(), r.ys.end());
                  std::reverse(r.vs.begin(), r.vs.end());
                  std::reverse(r.ws.begin(), r.ws.end());
                  perm.add(std::abs(average(T, n, r).value - a.value) / std::abs(a.value), where);
                }
              } catch (const Error& e) {
                agree.fail(where + ": " + e.what());
              }
            }
          }
        }
      }
    }
  }
  return {agree.done(), shift.done(), orient.done(), perm.done()};
}

std::vector<CheckResult> check_correlations(const Workspace& ws, std::size_t max_n_10, std::size_t max_n_11) {
  const auto& T = ws.transforms();
  const auto& R = ws.rules();
  Tracker dens("correlation:density", 1e-8), one("correlation:R10_mass", 1e-6), two("correlation:R11_mass", 1e-6);
  {
    const KernelContext C(T, 1);
    const double g00 = T.h_sq(0);
    for (int a = 0; a < 10; ++a) {
      for (int b = 0; b < 10; ++b) {
        const double l = -2.0 + 4.0 * a / 9.0, m = -2.0 + 4.0 * b / 9.0;
        const double expect = T.weight(l, m) / g00;
        dens.add(std::abs(correlation(C, {l}, {m}) - expect) / expect, fmt("lam", l) + " " + fmt("mu", m));
      }
    }
  }
  for (std::size_t n = 1; n <= max_n_10; ++n) {
    const KernelContext C(T, n);
    CompensatedSum<double> s;
    for (std::size_t a = 0; a < R.x.nodes.size(); ++a) s.add(R.x.weights[a] * correlation(C, {R.x.nodes[a]}, {}));
    one.add(std::abs(s.value() - static_cast<double>(n)) / static_cast<double>(n), "n=" + std::to_string(n));
  }
  for (std::size_t n = 1; n <= max_n_11; ++n) {
    const KernelContext C(T, n);
    CompensatedSum<double> s;
    for (std::size_t a = 0; a < R.x.nodes.size(); ++a) {
      for (std::size_t b = 0; b < R.y.nodes.size(); ++b) {
        s.add(R.x.weights[a] * R.y.weights[b] * correlation(C, {R.x.nodes[a]}, {R.y.nodes[b]}));
      }
    }
    const double n2 = static_cast<double>(n * n);
    two.add(std::abs(s.value() - n2) / n2, "n=" + std::to_string(n));
  }
  return {dens.done(), one.done(), two.done()};
}

CheckResult check_traces(const Workspace& ws, std::size_t max_n, int max_exp, double tol) {
  Tracker t("traces:oracle", tol);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> cases;
  for (int a = 0; a <= max_exp; ++a) {
    cases.push_back({{a}, {}});
    cases.push_back({{}, {a}});
    for (int b = a; b <= max_exp; ++b) {
      cases.push_back({{a, b}, {}});
      cases.push_back({{}, {a, b}});
    }
    for (int b = 0; b <= max_exp; ++b) cases.push_back({{a}, {b}});
  }
  for (std::size_t n = 1; n <= max_n; ++n) {
    const KernelContext C(ws.transforms(), n);
    for (const auto& [m, p] : cases) {
      std::ostringstream os;
      os << "n=" << n << " m=[";
      for (int e : m) os << e << ' ';
      os << "] p=[";
      for (int e : p) os << e << ' ';
      os << "]";
      try {
        const double value = trace_product_average(C, m, p).value;
        const double o = ws.oracle().trace_moments(n, m, p);
        t.add(std::abs(value - o) / std::max(1.0, std::abs(o)), os.str());
      } catch (const Error& e) {
        t.fail(os.str() + ": " + e.what());
      }
    }
  }
  return t.done();
}

std::vector<CheckResult> check_christoffel(const Workspace& ws, std::size_t max_n, std::size_t max_I,
                                           std::uint64_t seed, double tol) {
  const auto& sys = ws.system();
  const auto& R = ws.rules();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Tracker biA("christoffel:A_biorth", tol), biB("christoffel:B_biorth", tol), monA("christoffel:A_monic", 1e-6),
      monB("christoffel:B_monic", 1e-6);

  // n-th divided difference at 0..n, i.e. the leading coefficient.
  auto leading = [](std::size_t n, const std::function<cplx(double)>& f) {
    cplx s = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      double den = 1.0;
      for (std::size_t j = 0; j <= n; ++j) {
        if (j != k) den *= static_cast<double>(k) - static_cast<double>(j);
      }
      s += f(static_cast<double>(k)) / den;
    }
    return s;
  };

  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t I = 1; I <= max_I; ++I) {
      std::vector<cplx> xs;
      for (std::size_t i = 0; i < I; ++i) xs.emplace_back(u(rng), 0.0);
      auto xprod = [&](double x) {
        cplx p = 1.0;
        for (cplx xi : xs) p *= x - xi;
        return p;
      };
      const std::string tagA = "n=" + std::to_string(n) + " I=" + std::to_string(I);
      try {
        std::map<double, cplx> Acache;
        auto A = [&](double x) {
          auto it = Acache.find(x);
          if (it == Acache.end()) it = Acache.emplace(x, christoffel_A(sys, n, xs, x)).first;
          return it->second;
        };
        for (std::size_t j = 0; j < n; ++j) {
          const auto r = integrate_2d(
              ws.model(), [&](double x, double y) { return A(x) * std::pow(y, static_cast<int>(j)) * xprod(x); }, R.x,
              R.y);
          biA.add(std::abs(r.value) / r.scale, tagA + " j=" + std::to_string(j));
        }
        monA.add(std::abs(leading(n, [&](double t) { return christoffel_A(sys, n, xs, t); }) - 1.0), tagA);
      } catch (const Error& e) {
        biA.fail(tagA + ": " + e.what());
      }
      for (std::size_t J = 0; J < I; ++J) {
        std::vector<cplx> ys;
        for (std::size_t j = 0; j < J; ++j) ys.emplace_back(u(rng), 0.0);
        auto yprod = [&](double y) {
          cplx p = 1.0;
          for (cplx yj : ys) p *= y - yj;
          return p;
        };
        const std::string tagB = tagA + " J=" + std::to_string(J);
        try {
          std::map<double, cplx> Bcache;
          auto B = [&](double y) {
            auto it = Bcache.find(y);
            if (it == Bcache.end()) it = Bcache.emplace(y, christoffel_B(sys, n, xs, ys, y)).first;
            return it->second;
          };
          // Evaluation points clear of the y sources in [-2, 2].
          const double off = 3.0;
          for (std::size_t k = 0; k < n; ++k) {
            const auto r = integrate_2d(
                ws.model(),
                [&](double x, double y) { return std::pow(x, static_cast<int>(k)) * B(y) * xprod(x) * yprod(y); }, R.x,
                R.y);
            biB.add(std::abs(r.value) / r.scale, tagB + " k=" + std::to_string(k));
          }
          monB.add(std::abs(leading(n, [&](double t) { return christoffel_B(sys, n, xs, ys, t + off); }) - 1.0), tagB);
        } catch (const Error& e) {
          biB.fail(tagB + ": " + e.what());
        }
      }
    }
  }
  return {biA.done(), biB.done(), monA.done(), monB.done()};
}

std::vector<CheckResult> run_verify(const ModelSpec& model, const VerifyOptions& opts) {
  const Workspace ws(model, opts.nodes);
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  out.push_back(check_biorthogonality(ws, std::min<std::size_t>(ws.system().order, 2 * opts.max_n), opts.tol));
  append(check_kernel_lemmas(ws, opts.max_n, opts.seed, opts.tol));
  append(check_asymptotics(ws, std::min<std::size_t>(opts.max_n, 2), false));
  SweepOptions so;
  so.max_n = opts.max_n;
  so.max_sources = 4;
  so.draws = 2;
  so.seed = opts.seed;
  append(check_average_sweep(ws, so));
  append(check_correlations(ws, opts.max_n, std::min<std::size_t>(opts.max_n, 2)));
  out.push_back(check_traces(ws, std::min<std::size_t>(opts.max_n, 2), 2));
  append(check_christoffel(ws, opts.max_n, 2, opts.seed, opts.tol));
  return out;
}

}  // namespace twomat
