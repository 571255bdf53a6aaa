#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "twomat/errors.hpp"
#include "twomat/weights.hpp"

using namespace twomat;
using testing_support::line_integral;

TEST_SUITE("weights") {
  TEST_CASE("model validation") {
    CHECK_NOTHROW(ModelSpec::gaussian(0.5).validate());
    CHECK_NOTHROW(testing_support::quartic().validate());
    CHECK_THROWS_AS((ModelSpec{{0, 0, 0, 1}, {0, 0, 0.5}, 0.5}).validate(), ModelError);
    CHECK_THROWS_AS((ModelSpec{{0, 0, -0.5}, {0, 0, 0.5}, 0.5}).validate(), ModelError);
    CHECK_THROWS_AS(ModelSpec::gaussian(0.0).validate(), ModelError);
    CHECK_THROWS_AS(ModelSpec::gaussian(1.0).validate(), ModelError);
    // Trailing zeros do not count towards the degree.
    CHECK_NOTHROW((ModelSpec{{0, 0, 0.5, 0, 0}, {0, 0, 0.5}, 0.5}).validate());
  }

  TEST_CASE("gauss-hermite reference rule integrates polynomials") {
    std::vector<double> t, bw;
    gauss_hermite_reference(20, t, bw);
    for (int k = 0; k <= 10; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) s += bw[i] * std::exp(-t[i] * t[i]) * std::pow(t[i], 2 * k);
      // int t^{2k} e^{-t^2} = Gamma(k + 1/2)
      CHECK(s == doctest::Approx(std::tgamma(k + 0.5)).epsilon(1e-12));
    }
  }

  TEST_CASE("gaussian normalization and covariance") {
    const auto m = ModelSpec::gaussian(0.5);
    const auto d = make_discretization(m);
    const auto z = integrate_2d(m, [](double, double) { return cplx(1.0); }, d.x, d.y);
    CHECK(z.value.real() == doctest::Approx(2 * std::numbers::pi / std::sqrt(0.75)).epsilon(1e-12));
    CHECK(z.converged);
    const auto xy = integrate_2d(m, [](double x, double y) { return cplx(x * y); }, d.x, d.y);
    CHECK(xy.value.real() / z.value.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("doubling the nodes leaves the normalization unchanged") {
    for (const auto& m : {ModelSpec::gaussian(0.5), testing_support::quartic(), testing_support::asymmetric()}) {
      const auto d = make_discretization(m);
      auto one = [](double, double) { return cplx(1.0); };
      const cplx a = integrate_2d(m, one, d.x, d.y).value;
      const cplx b = integrate_2d(m, one, refine(d.x), refine(d.y)).value;
      CHECK(std::abs(a - b) / std::abs(a) < 1e-10);
    }
  }

  TEST_CASE("integrate_2d is linear and conjugate-equivariant") {
    const auto m = testing_support::quartic();
    const auto d = make_discretization(m, 64);
    auto f = [](double x, double y) { return cplx(x * x - y, std::sin(x * y)); };
    auto g = [](double x, double y) { return cplx(std::cos(x), y * y * y); };
    const cplx F = integrate_2d(m, f, d.x, d.y).value, G = integrate_2d(m, g, d.x, d.y).value;
    const cplx a{0.3, -1.2};
    const cplx FG = integrate_2d(m, [&](double x, double y) { return f(x, y) + a * g(x, y); }, d.x, d.y).value;
    CHECK(std::abs(FG - (F + a * G)) < 1e-12 * (std::abs(F) + std::abs(G)));
    const cplx Fc = integrate_2d(m, [&](double x, double y) { return std::conj(f(x, y)); }, d.x, d.y).value;
    CHECK(std::abs(Fc - std::conj(F)) < 1e-14 * std::abs(F));
  }

  TEST_CASE("cauchy integral against tanh-sinh") {
    const auto m = ModelSpec::gaussian(0.5);
    const auto d = make_discretization(m);
    auto f = [](double t) { return cplx(std::exp(-0.375 * t * t) * (1.0 + t)); };
    for (cplx v : {cplx(0.3, 2.0), cplx(-0.7, 0.5), cplx(0.1, 0.01), cplx(1.0, -0.05), cplx(40.0, 1.0)}) {
      const cplx got = cauchy_integrate_1d(f, v, d.x);
      const cplx want = line_integral([&](double t) { return f(t) / (v - t); }, 14.0, {v.real()});
      CAPTURE(v);
      CHECK(std::abs(got - want) < 1e-10 * std::abs(want));
    }
  }

  TEST_CASE("cauchy integral symmetries and the pole floor") {
    const auto d = make_discretization(ModelSpec::gaussian(0.5));
    auto f = [](double t) { return cplx(std::exp(-0.375 * t * t) * std::cos(t)); };
    const cplx v{0.4, 0.2};
    CHECK(std::abs(cauchy_integrate_1d(f, std::conj(v), d.x) - std::conj(cauchy_integrate_1d(f, v, d.x))) < 1e-14);
    CHECK_THROWS_AS(cauchy_integrate_1d(f, cplx(0.2, 1e-4), d.x), PoleProximityError);
  }

  TEST_CASE("pole detection and graded panels") {
    const auto d = make_discretization(ModelSpec::gaussian(0.5));
    CHECK(pole_is_far(d.x, cplx(0.0, 5.0)));
    CHECK_FALSE(pole_is_far(d.x, cplx(0.0, 0.01)));
    const auto same = panel_rule(d.x, {cplx(0.0, 5.0)});
    CHECK(same.nodes == d.x.nodes);
    const auto graded = panel_rule(d.x, {cplx(0.3, 0.01)});
    CHECK(graded.nodes.size() > d.x.nodes.size());
    CHECK(graded.lo() <= d.x.lo());
    CHECK(graded.hi() >= d.x.hi());
  }

  TEST_CASE("integrate_2d_poles against nested tanh-sinh") {
    const auto m = ModelSpec::gaussian(0.5);
    const auto d = make_discretization(m);
    const cplx v{0.2, 0.3}, w{-0.5, -0.8};
    auto f = [&](double x, double y) { return std::exp(log_weight(m, x, y)) / ((v - x) * (w - y)); };
    const auto r = integrate_2d_poles(f, d.x, d.y, {v}, {w});
    const cplx want = testing_support::plane_integral(f);
    CHECK(r.converged);
    CHECK(std::abs(r.value - want) < 1e-9 * r.scale);
  }
}
