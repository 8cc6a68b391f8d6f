#pragma once

#include <string>

#include "entstab/distribution.hpp"
#include "entstab/numerics.hpp"

namespace entstab {

struct MetricValue {
  double value = 0.0;
  double err_estimate = 0.0;
  std::string method;
};

/// D(X) together with the reference normal N(a, sigma^2) it was measured
/// against. `value` is +inf when the law has atoms.
struct EntropicValue {
  double value = 0.0;
  double err_estimate = 0.0;
  double a = 0.0;
  double sigma = 1.0;

  bool infinite() const;
};

struct UniformDeviation {
  double value = 0.0;
  double argmax = 0.0;
  /// Sup before clamping at zero; differs from `value` only when negative.
  double raw = 0.0;
  bool clamped = false;
};

MetricValue kolmogorov(const Distribution& f, const Distribution& g,
                       const Tolerances& tol = {});
MetricValue levy(const Distribution& f, const Distribution& g, const Tolerances& tol = {});
MetricValue w1(const Distribution& f, const Distribution& g, const Tolerances& tol = {});
/// Variation norm of F - G (values in [0, 2]).
MetricValue tv(const Distribution& f, const Distribution& g, const Tolerances& tol = {});

/// Dispatch by name: levy, kolmogorov, w1 or tv. Throws DomainError otherwise.
MetricValue metric_by_name(const std::string& name, const Distribution& f,
                           const Distribution& g, const Tolerances& tol = {});

/// KL divergence of the law to the normal with matched mean and variance.
/// Throws DomainError for zero variance.
EntropicValue entropic_distance(const Distribution& d, const Tolerances& tol = {});

/// sup_x (p(x) - phi_{a,v}(x)) with a = mean, v^2 = Var. Throws DomainError if
/// the law has atoms or zero variance.
UniformDeviation uniform_deviation_detail(const Distribution& d, const Tolerances& tol = {});
double uniform_deviation(const Distribution& d, const Tolerances& tol = {});

/// Ent_mu(f) = E f log f - E f log E f. Throws DomainError when E f <= 0.
double entropy_functional(const RealFunction& f, const Distribution& mu,
                          const Tolerances& tol = {});

}  // namespace entstab
