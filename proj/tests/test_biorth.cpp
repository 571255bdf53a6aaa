#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "twomat/biorth.hpp"
#include "twomat/errors.hpp"

using namespace twomat;

TEST_SUITE("biorth") {
  TEST_CASE("gaussian bimoments") {
    const auto m = ModelSpec::gaussian(0.5);
    const auto G = compute_bimoments(m, make_discretization(m), 4);
    CHECK(G.entry(0, 0) == doctest::Approx(2 * std::numbers::pi / std::sqrt(0.75)).epsilon(1e-12));
    CHECK(std::abs(G.entry(1, 0)) < 1e-12);
    CHECK(G.entry(1, 1) / G.entry(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(G.entry(2, 0) / G.entry(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("gaussian system matches the Hermite closed form") {
    const double tau = 0.5;
    const auto m = ModelSpec::gaussian(tau);
    const auto sys = build_system(m, make_discretization(m), 8);
    for (std::size_t n = 0; n <= 8; ++n) {
      const auto want = testing_support::gaussian_p(n, tau);
      double scale = 0.0;
      for (double c : want) scale = std::max(scale, std::abs(c));
      REQUIRE(sys.p_coeffs[n].size() == n + 1);
      for (std::size_t k = 0; k <= n; ++k) {
        CAPTURE(n);
        CAPTURE(k);
        CHECK(std::abs(sys.p_coeffs[n][k] - want[k]) < 1e-9 * scale);
        CHECK(std::abs(sys.q_coeffs[n][k] - want[k]) < 1e-9 * scale);
      }
      CHECK(sys.h_sq[n] == doctest::Approx(testing_support::gaussian_h_sq(n, tau)).epsilon(1e-9));
    }
    CHECK(sys.p_coeffs[2][0] == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
    CHECK(sys.h_sq[1] == doctest::Approx(std::numbers::pi * 8.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-12));
  }

  TEST_CASE("biorthogonality, monic rows and positive norms") {
    for (const auto& m : {testing_support::quartic(), testing_support::asymmetric()}) {
      const auto d = make_discretization(m);
      const auto sys = build_system(m, d, 8);
      for (std::size_t i = 0; i <= 8; ++i) {
        CHECK(sys.p_coeffs[i].back() == 1.0);
        CHECK(sys.q_coeffs[i].back() == 1.0);
        CHECK(sys.h_sq[i] > 0.0);
        for (std::size_t j = 0; j <= 8; ++j) {
          const auto r = integrate_2d(
              m, [&](double x, double y) { return cplx(eval_p(sys, i, x) * eval_q(sys, j, y)); }, d.x, d.y);
          const double expect = i == j ? sys.h_sq[i] : 0.0;
          CHECK(std::abs(r.value.real() - expect) < 1e-8 * std::sqrt(sys.h_sq[i] * sys.h_sq[j]));
        }
      }
    }
  }

  TEST_CASE("rescaling the monomial basis reproduces the coefficients") {
    const auto m = testing_support::asymmetric();
    const auto G = compute_bimoments(m, make_discretization(m), 8);
    const auto base = biorthogonalize(G);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int trial = 0; trial < 3; ++trial) {
      // x^i y^j -> (a x)^i (b y)^j in the scaled variables, undone through sx, sy.
      const double a = u(rng), b = u(rng);
      BimomentMatrix H = G;
      for (Eigen::Index i = 0; i < H.scaled.rows(); ++i) {
        for (Eigen::Index j = 0; j < H.scaled.cols(); ++j) H.scaled(i, j) *= std::pow(a, i) * std::pow(b, j);
      }
      H.errors.setZero();
      H.sx = G.sx / a;
      H.sy = G.sy / b;
      const auto r = biorthogonalize(H);
      for (std::size_t n = 0; n <= 8; ++n) {
        for (std::size_t k = 0; k <= n; ++k) {
          const double scale = 1.0 + std::abs(base.p_coeffs[n][k]);
          CHECK(std::abs(r.p_coeffs[n][k] - base.p_coeffs[n][k]) < 1e-10 * scale);
          CHECK(std::abs(r.q_coeffs[n][k] - base.q_coeffs[n][k]) < 1e-10 * (1.0 + std::abs(base.q_coeffs[n][k])));
        }
        CHECK(r.h_sq[n] == doctest::Approx(base.h_sq[n]).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("evaluation") {
    const auto m = ModelSpec::gaussian(0.5);
    const auto sys = build_system(m, make_discretization(m), 4);
    CHECK(eval_p(sys, 0, cplx(3.0, -7.0)) == cplx(1.0));
    CHECK(eval_p(sys, 2, 0.0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
    const cplx z{1e6, 0.0};
    CHECK(std::abs(eval_p(sys, 4, z) / std::pow(z, 4) - 1.0) < 1e-5);
    CHECK_THROWS_AS(eval_p(sys, 5, 0.0), IndexError);
    std::vector<cplx> all;
    eval_q_all(sys, 5, cplx(0.3, 0.1), all);
    for (std::size_t n = 0; n < 5; ++n) CHECK(std::abs(all[n] - eval_q(sys, n, cplx(0.3, 0.1))) < 1e-14);
  }

  TEST_CASE("order guard and degeneracy") {
    const auto m = ModelSpec::gaussian(0.5);
    const auto d = make_discretization(m);
    CHECK_THROWS_AS(build_system(m, d, 13), UnsupportedConfigError);
    BimomentMatrix G;
    G.order = 3;
    G.scaled = Eigen::MatrixXd::Ones(3, 3);
    G.errors = Eigen::MatrixXd::Zero(3, 3);
    try {
      biorthogonalize(G);
      FAIL("expected a degenerate pivot");
    } catch (const DegeneracyError& e) {
      CHECK(e.index() == 1);
    }
  }
}
