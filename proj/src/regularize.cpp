#include "entstab/regularize.hpp"

#include <algorithm>
#include <cmath>

#include "entstab/errors.hpp"

namespace entstab {

void RegularizationParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("regularize: sigma must be positive");
  }
  if (sigma > 1.0 && !allow_large_sigma) {
    throw DomainError("regularize: sigma must be <= 1 without the large-sigma override");
  }
}

double RegularizationParams::reg_sigma1() const { return std::sqrt(1.0 + sigma * sigma); }
double RegularizationParams::reg_sigma2() const { return std::sqrt(1.0 + 2.0 * sigma * sigma); }

Distribution regularize(const Distribution& d, const RegularizationParams& params) {
  params.validate();
  return convolve(d, Distribution::normal(0.0, params.sigma));
}

double regularized_density_gap(const Distribution& f, const Distribution& g,
                               const RegularizationParams& params, const Tolerances& tol) {
  tol.validate();
  const Distribution pf = regularize(f, params);
  const Distribution pg = regularize(g, params);
  const Window a = pf.support(tol.tail_cutoff);
  const Window b = pg.support(tol.tail_cutoff);
  std::vector<double> xs = linspace(std::min(a.lo, b.lo), std::max(a.hi, b.hi),
                                    static_cast<std::size_t>(tol.sup_grid_points));
  for (const auto* d : {&pf, &pg}) {
    if (const auto* grid = d->grid(); grid != nullptr && grid->size() <= 4 * xs.size()) {
      for (std::size_t i = 0; i < grid->size(); ++i) xs.push_back(grid->knot(i));
    }
  }
  sort_unique(xs);
  auto gap = [&](double x) { return std::abs(pf.density(x) - pg.density(x)); };
  return refined_grid_max(gap, xs, tol.root_tol).value;
}

}  // namespace entstab
