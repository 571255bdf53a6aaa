#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "twomat/averages.hpp"
#include "twomat/errors.hpp"
#include "twomat/verify.hpp"

using namespace twomat;
using testing_support::line_integral;
using testing_support::plane_integral;

namespace {

const Workspace& gaussian() {
  static const Workspace ws(ModelSpec::gaussian(0.5));
  return ws;
}

cplx avg(std::size_t n, SourceConfig c, AverageOptions o = {}) {
  return average(gaussian().transforms(), n, c, o).value;
}

}  // namespace

TEST_SUITE("averages") {
  TEST_CASE("single numerator source gives p_n") {
    const auto& sys = gaussian().system();
    for (std::size_t n = 1; n <= 5; ++n) {
      const cplx x{0.4, -0.3};
      const auto r = average(gaussian().transforms(), n, {{x}, {}, {}, {}});
      CHECK(r.formula_used == Formula::theorem1);
      CHECK(std::abs(r.value - eval_p(sys, n, x)) < 1e-12 * std::abs(r.value));
    }
  }

  TEST_CASE("n = 1 gaussian against direct integrals") {
    // The lam marginal is proportional to exp(-(1 - tau^2) lam^2 / 2).
    auto marginal = [](double t) { return std::exp(-0.375 * t * t); };
    const double Z = line_integral([&](double t) { return cplx(marginal(t)); }).real();
    const cplx v{0.3, 0.9};
    const cplx want = line_integral([&](double t) { return marginal(t) / (v - t); }) / Z;
    CHECK(std::abs(avg(1, {{}, {}, {v}, {}}) - want) < 1e-10 * std::abs(want));

    const cplx x{0.5, 0.0}, y{-1.0, 0.2};
    CHECK(std::abs(avg(1, {{x}, {y}, {}, {}}) - (x * y + 2.0 / 3.0)) < 1e-12);

    const auto m = ModelSpec::gaussian(0.5);
    const cplx w{-0.2, -1.4};
    const cplx num =
        plane_integral([&](double l, double u) { return (x - l) * std::exp(log_weight(m, l, u)) / (w - u); });
    const cplx den = plane_integral([&](double l, double u) { return cplx(std::exp(log_weight(m, l, u))); });
    CHECK(std::abs(avg(1, {{x}, {}, {}, {w}}) - num / den) < 1e-9 * std::abs(num / den));
  }

  TEST_CASE("n = 2 against the eigenvalue integral") {
    const SourceConfig c{{cplx(0.3, 0.1)}, {cplx(-0.6, 0.0)}, {cplx(0.2, 2.5)}, {}};
    const cplx direct = gaussian().oracle().direct_n2(c);
    CHECK(std::abs(avg(2, c) - direct) < 1e-8 * std::abs(direct));
  }

  TEST_CASE("kernel index shift and orientation") {
    const SourceConfig c{{cplx(0.3, 0.2), cplx(-1.0, 0.5), cplx(0.4, 0.0)}, {cplx(0.7, 0.0)}, {cplx(0.1, 1.2)}, {}};
    const cplx base = avg(3, c);
    for (int p = 1; p <= 2; ++p) {
      AverageOptions o;
      o.p_shift = p;
      CHECK(std::abs(avg(3, c, o) - base) < 1e-10 * std::abs(base));
    }
    const SourceConfig d{{cplx(0.3, 0.2)}, {cplx(0.7, 0.0)}, {cplx(0.1, 1.2)}, {cplx(-0.5, -0.8)}};
    AverageOptions a, b;
    a.orientation = Orientation::a;
    b.orientation = Orientation::b;
    CHECK(std::abs(avg(2, d, a) - avg(2, d, b)) < 1e-10 * std::abs(avg(2, d)));
  }

  TEST_CASE("numerator-only determinant agrees with the general assembly") {
    const std::vector<cplx> xs{cplx(0.3, 0.0), cplx(-0.8, 0.4), cplx(1.1, 0.0)}, ys{cplx(0.2, -0.1)};
    const cplx a = average_numerator_only(gaussian().transforms(), 2, xs, ys);
    CHECK(std::abs(a - avg(2, {xs, ys, {}, {}})) < 1e-10 * std::abs(a));
  }

  TEST_CASE("invalid configurations") {
    const cplx v{0.1, 1.0};
    CHECK_THROWS_AS(avg(1, {{}, {}, {v, cplx(0.2, 1.0)}, {}}), UnsupportedConfigError);
    CHECK_THROWS_AS(avg(2, {{v}, {}, {v}, {}}), DistinctnessError);
    CHECK_THROWS_AS(avg(2, {{}, {}, {cplx(0.1, 1e-5)}, {}}), PoleProximityError);
    AverageOptions o;
    o.p_shift = 5;
    CHECK_THROWS_AS(avg(2, {{v}, {}, {}, {}}, o), UnsupportedConfigError);
  }

  TEST_CASE("sweep against the oracle, quartic model") {
    const Workspace ws(testing_support::quartic());
    SweepOptions so;
    so.max_n = 2;
    so.max_sources = 3;
    so.draws = 1;
    so.seed = 4;
    for (const auto& r : check_average_sweep(ws, so)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed);
    }
  }

  TEST_CASE("christoffel polynomials") {
    const auto& sys = gaussian().system();
    CHECK(std::abs(christoffel_A(sys, 3, {}, cplx(0.7)) - eval_p(sys, 3, cplx(0.7))) < 1e-12);
    const Workspace ws(testing_support::asymmetric());
    for (const auto& r : check_christoffel(ws, 3, 2, 9)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed);
    }
    CHECK_THROWS_AS(christoffel_B(sys, 2, {cplx(0.1)}, {cplx(0.2)}, cplx(0.0)), UnsupportedConfigError);
  }
}
