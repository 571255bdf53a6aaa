#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "twomat/errors.hpp"
#include "twomat/kernels.hpp"
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

TEST_SUITE("kernels") {
  TEST_CASE("n = 1 kernels in closed form") {
    const auto& T = gaussian().transforms();
    const KernelContext C(T, 1);
    const double h0 = T.h_sq(0);
    CHECK(C.K12(0.3, -1.1) == doctest::Approx(1.0 / h0));
    CHECK(C.K11(0.3, -1.1) == doctest::Approx(T.Q(0, -1.1).real() / h0).epsilon(1e-14));
    CHECK(C.K21(0.4, 0.2) == doctest::Approx(T.P(0, 0.4).real() * T.Q(0, 0.2).real() / h0 - T.weight(0.2, 0.4)));
  }

  TEST_CASE("empty sums at m = 0") {
    const KernelContext C(gaussian().transforms(), 0);
    const cplx v{0.1, 0.8};
    CHECK(C.K11(0.2, 0.5) == 0.0);
    CHECK(std::abs(C.K11_tilde(0.4, v) + 1.0 / (v - 0.4)) < 1e-15);
    CHECK(C.K21(0.3, -0.2) == doctest::Approx(-gaussian().transforms().weight(-0.2, 0.3)));
  }

  TEST_CASE("K12_tilde is K12") {
    const KernelContext C(quartic().transforms(), 4);
    for (double x : {-1.0, 0.2, 1.7}) {
      for (double y : {-0.4, 0.9}) CHECK(C.K12_tilde(x, y).real() == doctest::Approx(C.K12(x, y)).epsilon(1e-14));
    }
  }

  TEST_CASE("K11_tilde against its defining integral") {
    const auto& T = gaussian().transforms();
    for (std::size_t n = 1; n <= 4; ++n) {
      const KernelContext C(T, n);
      for (auto [x, v] :
           {std::pair{0.3, cplx(0.1, 0.5)}, std::pair{-1.2, cplx(0.8, -1.5)}, std::pair{0.9, cplx(-2.0, 0.7)}}) {
        const cplx want =
            testing_support::line_integral([&](double xi) { return (x - xi) / (v - xi) * C.K11(x, xi); }) / (x - v);
        CAPTURE(n);
        CHECK(std::abs(C.K11_tilde(x, v) - want) < 1e-8 * std::abs(want));
      }
    }
  }

  TEST_CASE("K22_tilde against its defining integral, quartic model") {
    const auto& T = quartic().transforms();
    const KernelContext C(T, 3);
    const cplx w{0.4, 1.1};
    const double y = -0.6;
    const cplx want =
        testing_support::line_integral([&](double eta) { return (y - eta) / (w - eta) * C.K22(eta, y); }) / (y - w);
    CHECK(std::abs(C.K22_tilde(w, y) - want) < 1e-8 * std::abs(want));
  }

  TEST_CASE("coincident arguments raise") {
    const KernelContext C(gaussian().transforms(), 2);
    const cplx v{0.3, 0.5};
    CHECK_THROWS_AS(C.K11_tilde(v, v), CoincidenceError);
    CHECK_THROWS_AS(C.K22_tilde(v, v), CoincidenceError);
    CHECK_THROWS_AS(KernelContext(gaussian().transforms(), 10), IndexError);
  }

  TEST_CASE("lemma suite, quartic model") {
    for (const auto& r : check_kernel_lemmas(quartic(), 4, 11)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed);
    }
  }

  TEST_CASE("asymptotic statements with the O(1/z) correction present") {
    const Workspace ws(testing_support::asymmetric(), kDefaultNodes, 6);
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& r : check_asymptotics(ws, n, true)) {
        CAPTURE(r.name);
        CAPTURE(r.detail);
        CHECK(r.passed);
      }
    }
  }
}
