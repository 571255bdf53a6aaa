#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "twomat/biorth.hpp"
#include "twomat/errors.hpp"
#include "twomat/transforms.hpp"

using namespace twomat;

namespace {

TransformEvaluator make(const ModelSpec& m, std::size_t N = 8, bool memo = true) {
  const auto d = make_discretization(m);
  return TransformEvaluator(m, build_system(m, d, N), d, CauchyOptions{}, memo);
}

}  // namespace

TEST_SUITE("transforms") {
  TEST_CASE("gaussian Q_n closed form") {
    const double tau = 0.5;
    const auto T = make(ModelSpec::gaussian(tau));
    CHECK(T.Q(0, 0.0).real() == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));
    CHECK(std::abs(T.Q(1, 0.0)) < 1e-13);
    for (std::size_t n = 0; n <= 6; ++n) {
      for (cplx x : {cplx(0.7), cplx(-1.9), cplx(0.3, 0.4)}) {
        const cplx want = std::sqrt(2 * std::numbers::pi) * std::pow(tau, static_cast<double>(n)) *
                          std::exp(-(1 - tau * tau) * x * x / 2.0) * eval_poly(testing_support::gaussian_p(n, tau), x);
        CAPTURE(n);
        CAPTURE(x);
        CHECK(std::abs(T.Q(n, x) - want) < 1e-10 * (1.0 + std::abs(want)));
        // P_n is the mirror image for the symmetric model.
        CHECK(std::abs(T.P(n, x) - want) < 1e-10 * (1.0 + std::abs(want)));
      }
    }
  }

  TEST_CASE("Q_0 integrates to G00") {
    const auto m = testing_support::quartic();
    const auto d = make_discretization(m);
    const auto T = make(m);
    const auto G = compute_bimoments(m, d, 0);
    CHECK(testing_support::line_integral([&](double x) { return T.Q(0, x); }).real() ==
          doctest::Approx(G.entry(0, 0)).epsilon(1e-9));
  }

  TEST_CASE("Q_tilde_0 against a direct double integral") {
    const auto m = ModelSpec::gaussian(0.5);
    const auto T = make(m);
    const cplx v{0.0, 2.0};
    const cplx want =
        testing_support::plane_integral([&](double x, double y) { return std::exp(log_weight(m, x, y)) / (v - x); });
    CHECK(std::abs(T.Q_tilde(0, v) - want) < 1e-8 * std::abs(want));
  }

  TEST_CASE("cauchy transforms against tanh-sinh, near and far poles") {
    const auto T = make(testing_support::asymmetric());
    for (cplx w : {cplx(0.4, 0.02), cplx(-1.0, -0.6), cplx(3.0, 2.0), cplx(50.0, 10.0)}) {
      for (std::size_t i : {0u, 2u, 5u}) {
        const cplx want =
            testing_support::line_integral([&](double t) { return T.P(i, t) / (w - t); }, 14.0, {w.real()});
        CAPTURE(w);
        CAPTURE(i);
        CHECK(std::abs(T.P_tilde(i, w) - want) < 1e-9 * std::abs(want));
      }
    }
  }

  TEST_CASE("Schwarz reflection") {
    const auto T = make(testing_support::quartic());
    const cplx w{0.3, 0.7};
    for (std::size_t i = 0; i <= 4; ++i) {
      CHECK(std::abs(T.P_tilde(i, std::conj(w)) - std::conj(T.P_tilde(i, w))) < 1e-13 * std::abs(T.P_tilde(i, w)));
      CHECK(std::abs(T.Q_tilde(i, std::conj(w)) - std::conj(T.Q_tilde(i, w))) < 1e-13 * std::abs(T.Q_tilde(i, w)));
    }
  }

  TEST_CASE("memo does not change results") {
    const auto m = testing_support::asymmetric();
    const auto A = make(m, 6, true);
    const auto B = make(m, 6, false);
    const cplx v{0.2, 0.9}, w{-0.4, -1.3};
    for (int rep = 0; rep < 2; ++rep) {
      CHECK(A.Q_tilde_all(v) == B.Q_tilde_all(v));
      CHECK(A.P_tilde_all(w) == B.P_tilde_all(w));
      CHECK(A.weight_cauchy(w, v) == B.weight_cauchy(w, v));
    }
  }

  TEST_CASE("moment ladder of Q_tilde") {
    const auto T = make(testing_support::asymmetric());
    for (std::size_t j = 0; j <= 4; ++j) {
      auto dev = [&](double r) {
        const cplx v = std::polar(r, 1.1);
        return std::abs(T.Q_tilde(j, v) * std::pow(v, static_cast<int>(j) + 1) / T.h_sq(j) - 1.0);
      };
      const double d1 = dev(50.0), d2 = dev(100.0);
      CAPTURE(j);
      CHECK(d1 < 5e-2);
      CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(0.2));
    }
  }

  TEST_CASE("shifted transforms") {
    const auto T = make(testing_support::asymmetric());
    const cplx v{0.5, 1.5};
    const auto S = T.Q_tilde_shifted_all(v, 3);
    for (std::size_t j : {0u, 3u, 6u}) {
      const cplx want = testing_support::line_integral([&](double t) { return std::pow(t, 3) * T.Q(j, t) / (v - t); });
      CHECK(std::abs(S[j] - want) < 1e-9 * std::abs(want));
    }
  }

  TEST_CASE("errors") {
    const auto T = make(ModelSpec::gaussian(0.5), 3);
    CHECK_THROWS_AS(T.P_tilde(0, cplx(0.1, 1e-5)), PoleProximityError);
    CHECK_THROWS_AS(T.Q(4, 0.0), IndexError);
  }
}
