#include "twomat/sources.hpp"

#include <cmath>
#include <string>

#include "twomat/errors.hpp"

namespace twomat {

namespace {

void check_union(const std::vector<cplx>& a, const std::vector<cplx>& b, const char* name) {
  std::vector<cplx> all(a);
  all.insert(all.end(), b.begin(), b.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (std::abs(all[i] - all[j]) < kDistinctTol) {
        throw DistinctnessError(std::string(name) + " sources are not pairwise distinct (entries " + std::to_string(i) +
                                " and " + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

void validate_sources(const SourceConfig& cfg, std::size_t n, double min_imag) {
  for (const auto* list : {&cfg.vs, &cfg.ws}) {
    for (cplx z : *list) {
      if (std::abs(z.imag()) < min_imag) throw PoleProximityError(std::abs(z.imag()), min_imag);
    }
  }
  check_union(cfg.xs, cfg.vs, "x/v");
  check_union(cfg.ys, cfg.ws, "y/w");
  const int nn = static_cast<int>(n);
  if (std::min(cfg.I() - cfg.K(), cfg.J() - cfg.L()) < -nn) {
    throw UnsupportedConfigError("min(I-K, J-L) = " + std::to_string(std::min(cfg.I() - cfg.K(), cfg.J() - cfg.L())) +
                                 " is below -n = " + std::to_string(-nn));
  }
}

}  // namespace twomat
