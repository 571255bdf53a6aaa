#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "twomat/applications.hpp"
#include "twomat/errors.hpp"
#include "twomat/verify.hpp"

using namespace twomat;

namespace {

const Workspace& gaussian() {
  static const Workspace ws(ModelSpec::gaussian(0.5), kDefaultNodes, 8);
  return ws;
}

const Workspace& quartic() {
  static const Workspace ws(testing_support::quartic(), kDefaultNodes, 8);
  return ws;
}

}  // namespace

TEST_SUITE("applications") {
  TEST_CASE("resolvent basics") {
    const KernelContext C(gaussian().transforms(), 1);
    CHECK(resolvent_generating(C, {}, {}) == cplx(1.0));
    const cplx x{0.4, 0.7};
    const cplx r = resolvent_generating(C, {x}, {});
    CHECK(std::abs(r - gaussian().oracle().direct_n1({{}, {}, {x}, {}})) < 1e-8 * std::abs(r));
    const KernelContext C3(gaussian().transforms(), 3);
    const cplx a = resolvent_generating(C3, {x, cplx(-0.2, -1.0)}, {cplx(0.5, 0.3)});
    const cplx b = resolvent_generating(C3, {std::conj(x), cplx(-0.2, 1.0)}, {cplx(0.5, -0.3)});
    CHECK(std::abs(b - std::conj(a)) < 1e-12 * std::abs(a));
    CHECK_THROWS_AS(resolvent_generating(C3, {x, x}, {}), CoincidenceError);
    CHECK_THROWS_AS(resolvent_generating(C3, {cplx(0.1, 0.0)}, {}), PoleProximityError);
  }

  TEST_CASE("resolvent of the one-point function") {
    const KernelContext C(quartic().transforms(), 3);
    const cplx x{0.3, 0.5};
    const cplx want = testing_support::line_integral([&](double t) { return C.K11(t, t) / (x - t); });
    CHECK(std::abs(resolvent_generating(C, {x}, {}) - want) < 1e-6 * std::abs(want));
  }

  TEST_CASE("resolvent products against the oracle") {
    const auto& O = quartic().oracle();
    const std::vector<cplx> xs{cplx(0.3, 0.5), cplx(-0.6, -0.9)}, ys{cplx(0.1, 0.7), cplx(1.2, -0.4)};
    auto inv = [](cplx z) { return [z](double t) { return 1.0 / (z - t); }; };
    for (std::size_t n = 1; n <= 3; ++n) {
      const KernelContext C(quartic().transforms(), n);
      const cplx got = resolvent_generating(C, xs, ys);
      const cplx want = O.linear_statistics(n, {inv(xs[0]), inv(xs[1])}, {inv(ys[0]), inv(ys[1])}, xs, ys);
      CAPTURE(n);
      CHECK(std::abs(got - want) < 1e-8 * std::abs(want));
    }
  }

  TEST_CASE("trace products") {
    const KernelContext C1(gaussian().transforms(), 1), C2(gaussian().transforms(), 2);
    CHECK(trace_product_average(C2, {0}, {}).value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(trace_product_average(C1, {1}, {1}).value == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    const double o = gaussian().oracle().trace_moments(2, {2}, {});
    CHECK(std::abs(trace_product_average(C2, {2}, {}).value - o) < 1e-4 * std::abs(o));
    ContourOptions tiny;
    tiny.radius = 0.5;
    CHECK_THROWS_AS(trace_product_average(C2, {2}, {}, tiny), ContourError);
    const auto r = check_traces(quartic(), 2, 2);
    CAPTURE(r.detail);
    CHECK(r.passed);
  }

  TEST_CASE("correlation functions") {
    const KernelContext C(quartic().transforms(), 3);
    const double a = correlation(C, {0.2, -0.7}, {0.5});
    CHECK(correlation(C, {-0.7, 0.2}, {0.5}) == doctest::Approx(a).epsilon(1e-12));
    const double b = correlation(C, {0.2}, {0.5, -1.0});
    CHECK(correlation(C, {0.2}, {-1.0, 0.5}) == doctest::Approx(b).epsilon(1e-12));
    CHECK(std::abs(correlation(C, {0.4, 0.4}, {})) < 1e-14);
    double scale = 0.0, lowest = 0.0;
    for (int i = 0; i <= 12; ++i) {
      for (int j = 0; j <= 12; ++j) {
        const double l = -2.4 + 0.4 * i, m = -2.4 + 0.4 * j;
        const double r = correlation(C, {l}, {m});
        scale = std::max(scale, std::abs(r));
        lowest = std::min(lowest, r);
        lowest = std::min(lowest, correlation(C, {l, m}, {}));
      }
    }
    CHECK(lowest >= -1e-8 * scale);
    for (const auto& r : check_correlations(quartic(), 3, 2)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed);
    }
  }
}
