// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"
#include "twomat/verify.hpp"

using namespace twomat;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::string summary;
};

// Folds check results into one outcome, remembering the worst residual.
struct Fold {
  bool passed = true;
  double worst = 0.0;
  std::string where;
  void add(const CheckResult& r, const std::string& model) {
    const std::string line =
        model + " " + r.name + " residual " + fmt(r.residual) + " (tol " + fmt(r.tolerance) + ", " + r.detail + ")";
    if (!r.passed) {
      if (passed) where = "FAILED " + line;
      passed = false;
      return;
    }
    const double ratio = r.residual / r.tolerance;
    if (passed && (where.empty() || ratio > worst)) {
      worst = ratio;
      where = line;
    }
  }
  void add(const std::vector<CheckResult>& rs, const std::string& model) {
    for (const auto& r : rs) add(r, model);
  }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
  }
  Outcome outcome() const { return {passed, "worst: " + where}; }
};

struct Models {
  Workspace gaussian{ModelSpec::gaussian(0.5)};
  Workspace quartic{testing_support::quartic()};
  std::vector<std::pair<std::string, const Workspace*>> both() const {
    return {{"gaussian", &gaussian}, {"quartic", &quartic}};
  }
};

Outcome criterion1() {
  const double tau = 0.5;
  const auto m = ModelSpec::gaussian(tau);
  const auto sys = build_system(m, make_discretization(m), 8);
  double worst = 0.0;
  for (std::size_t n = 0; n <= 8; ++n) {
    const auto want = testing_support::gaussian_p(n, tau);
    double scale = 0.0;
    for (double c : want) scale = std::max(scale, std::abs(c));
    for (std::size_t k = 0; k <= n; ++k) {
      worst = std::max(worst, std::abs(sys.p_coeffs[n][k] - want[k]) / scale);
      worst = std::max(worst, std::abs(sys.q_coeffs[n][k] - want[k]) / scale);
    }
    const double h = testing_support::gaussian_h_sq(n, tau);
    worst = std::max(worst, std::abs(sys.h_sq[n] - h) / h);
  }
  return {worst <= 1e-8, "max relative error " + Fold::fmt(worst) + " (tol 1e-8), n = 0..8"};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const char* title, double limit_s, const std::function<Outcome()>& run) {
    const auto start = Clock::now();
    Outcome o = run();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (limit_s > 0.0 && secs > limit_s) {
      o.passed = false;
      o.summary += "; runtime over the " + Fold::fmt(limit_s) + " s limit";
    }
    all = all && o.passed;
    std::printf("[%s] criterion %d %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", id, title, o.summary.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "gaussian closed forms", 10.0, criterion1);

  const Models models;
  std::vector<std::vector<CheckResult>> sweeps;
  double sweep_seconds = 0.0;
  report(2, "average vs oracle sweep", 300.0, [&] {
    Fold f;
    const auto start = Clock::now();
    for (const auto& [name, ws] : models.both()) {
      SweepOptions so;
      so.max_n = 4;
      so.max_sources = 5;
      so.draws = 5;
      so.seed = 2024;
      sweeps.push_back(check_average_sweep(*ws, so));
      for (const auto& r : sweeps.back()) {
        if (r.name == "average:oracle") f.add(r, name);
      }
    }
    sweep_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return f.outcome();
  });
  report(3, "kernel index shift invariance", 0.0, [&] {
    Fold f;
    const char* names[] = {"gaussian", "quartic"};
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
      for (const auto& r : sweeps[i]) {
        if (r.name != "average:oracle") f.add(r, names[i]);
      }
    }
    Outcome o = f.outcome();
    o.summary += "; cases shared with criterion 2 (" + Fold::fmt(sweep_seconds) + " s)";
    return o;
  });
  report(4, "kernel lemma suite, n <= 5", 120.0, [&] {
    Fold f;
    for (const auto& [name, ws] : models.both()) f.add(check_kernel_lemmas(*ws, 5, 17), name);
    return f.outcome();
  });
  report(5, "large-argument asymptotics", 0.0, [&] {
    // Halving is checked where the O(1/z) correction is present; the
    // symmetric Gaussian model, where several corrections vanish and the
    // deviation drops by 4, is held to the deviation bound and to decay.
    Fold f;
    const Workspace shifted(testing_support::asymmetric());
    for (std::size_t n = 1; n <= 3; ++n) {
      f.add(check_asymptotics(shifted, n, true), "shifted-gaussian");
      f.add(check_asymptotics(models.gaussian, n, false), "gaussian");
    }
    return f.outcome();
  });
  report(6, "Eynard-Mehta correlations", 0.0, [&] {
    Fold f;
    for (const auto& [name, ws] : models.both()) f.add(check_correlations(*ws, 4, 3), name);
    return f.outcome();
  });
  report(7, "trace averages vs oracle", 0.0, [&] {
    Fold f;
    for (const auto& [name, ws] : models.both()) f.add(check_traces(*ws, 3, 3, 1e-4), name);
    return f.outcome();
  });
  report(8, "Christoffel biorthogonality", 0.0, [&] {
    Fold f;
    for (const auto& [name, ws] : models.both()) f.add(check_christoffel(*ws, 4, 3, 31, 1e-8), name);
    return f.outcome();
  });

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
