#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace entstab {

using RealFunction = std::function<double(double)>;

/// Numerical resolution knobs shared by every module.
///
/// `sup_grid_points` is the number of evaluation points used by sup-type
/// functionals (Kolmogorov, Levy, uniform deviation); `tail_cutoff` is the
/// probability mass below which support is truncated when choosing
/// integration windows.
struct Tolerances {
  double quad_abs_tol = 1e-10;
  double root_tol = 1e-9;
  int sup_grid_points = 20001;
  double tail_cutoff = 1e-12;

  /// Throws DomainError unless every field is in range.
  void validate() const;

  /// Resolution study helper: level 0 is `*this`, each further level doubles
  /// the sup grid and tightens quadrature and root tolerances by 4x and 2x.
  Tolerances refined(int level) const;

  bool operator==(const Tolerances&) const = default;
};

double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// Upper tail 1 - Phi(x), computed without cancellation.
double std_normal_sf(double x);
/// Inverse of std_normal_cdf; throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

double normal_pdf(double x, double mean, double sd);
double normal_cdf(double x, double mean, double sd);

/// Phi(b) - Phi(a) for a <= b, picking the tail that avoids cancellation.
double std_normal_mass(double a, double b);

struct Integral {
  double value = 0.0;
  double err_estimate = 0.0;
};

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Throws QuadratureError (carrying the partial sum) if the evaluation budget
/// is exhausted.
Integral integrate(const RealFunction& f, double a, double b, double tol);

/// Integrates over [a, b] after splitting at the given interior breakpoints
/// (points outside [a, b] are ignored). The tolerance is shared among pieces
/// in proportion to their width.
Integral integrate_split(const RealFunction& f, double a, double b,
                         std::span<const double> breakpoints, double tol);

/// Bisection for a sign change of a monotone g on [lo, hi]. Returns the
/// midpoint of a final bracket of width <= tol. Throws BracketError when
/// g(lo) and g(hi) have the same strict sign.
double bisect_monotone(const RealFunction& g, double lo, double hi, double tol);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of a unimodal f on [lo, hi].
Extremum golden_section_max(const RealFunction& f, double lo, double hi,
                            double tol);

/// Maximizes f over `points`, then polishes the best point with a golden
/// section search on its neighbouring bracket. The returned value is never
/// below the best sampled value.
Extremum refined_grid_max(const RealFunction& f, std::span<const double> points,
                          double tol);

/// n equally spaced points covering [lo, hi] (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Sorts, removes duplicates and points closer than `min_gap`.
void sort_unique(std::vector<double>& xs, double min_gap = 0.0);

}  // namespace entstab
