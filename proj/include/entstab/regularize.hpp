#pragma once

#include "entstab/distribution.hpp"
#include "entstab/numerics.hpp"

namespace entstab {

/// Smoothing level for X_sigma = X + sigma Z.
struct RegularizationParams {
  double sigma = 1.0;
  /// Permits sigma > 1, which the stability statements do not cover.
  bool allow_large_sigma = false;

  /// Throws DomainError unless 0 < sigma <= 1 (or sigma > 0 with the override).
  void validate() const;

  /// sqrt(1 + sigma^2) and sqrt(1 + 2 sigma^2): standard deviations of X_sigma
  /// and X_sigma + Y_sigma for unit-variance X, Y.
  double reg_sigma1() const;
  double reg_sigma2() const;
};

/// Law of X + sigma Z. Atomic and Gaussian-mixture laws stay exact mixtures;
/// grid parts are convolved numerically.
Distribution regularize(const Distribution& d, const RegularizationParams& params);

/// sup_x |p_sigma(x) - q_sigma(x)|.
double regularized_density_gap(const Distribution& f, const Distribution& g,
                               const RegularizationParams& params, const Tolerances& tol = {});

}  // namespace entstab
