#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "entstab/numerics.hpp"

namespace entstab {

struct Atom {
  double location = 0.0;
  double weight = 0.0;

  bool operator==(const Atom&) const = default;
};

/// Density sampled at uniform knots x0, x0 + step, ... and linearly
/// interpolated between them; zero outside [x0, x_end()].
///
/// The trapezoidal integral of `values` (equivalently the exact integral of
/// the interpolant) must be 1 within 1e-9.
class GridDensity {
 public:
  GridDensity(double x0, double step, std::vector<double> values);

  /// Builds a grid from arbitrary non-negative samples and rescales it to unit
  /// mass. The relative rescaling is reported through `drift` when non-null.
  static GridDensity normalized(double x0, double step, std::vector<double> values,
                                double* drift = nullptr);

  double x0() const { return x0_; }
  double step() const { return step_; }
  double x_end() const { return x0_ + step_ * static_cast<double>(values_.size() - 1); }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double knot(std::size_t i) const { return x0_ + step_ * static_cast<double>(i); }

  double density(double x) const;
  double cdf(double x) const;

  /// Exact integral of x^k p(x) over [a, b] for k in {0, 1, 2}.
  double partial_moment(int k, double a, double b) const;

  bool operator==(const GridDensity& o) const {
    return x0_ == o.x0_ && step_ == o.step_ && values_ == o.values_;
  }

 private:
  double x0_;
  double step_;
  std::vector<double> values_;
  std::vector<double> cumulative_;  // mass up to each knot
};

struct GaussianComponent {
  double mean = 0.0;
  double sd = 1.0;
  double weight = 1.0;

  bool operator==(const GaussianComponent&) const = default;
};

/// Finite mixture of normal densities; component weights sum to 1.
class GaussianMixtureDensity {
 public:
  explicit GaussianMixtureDensity(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const { return components_; }

  double density(double x) const;
  double cdf(double x) const;
  /// Exact integral of x^k p(x) over [a, b] for k in {0, 1, 2}; a and b may be
  /// infinite.
  double partial_moment(int k, double a, double b) const;
  /// Integral over [b, inf) of (1 - cdf); b may be any real.
  double upper_tail_integral(double b) const;
  /// Integral over (-inf, a] of cdf.
  double lower_tail_integral(double a) const;

  bool operator==(const GaussianMixtureDensity&) const = default;

 private:
  std::vector<GaussianComponent> components_;
};

using ContinuousPart = std::variant<std::monostate, GridDensity, GaussianMixtureDensity>;

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// One-dimensional law: atoms plus an optional absolutely continuous part
/// carrying `continuous_weight` of the mass.
class Distribution {
 public:
  Distribution(std::vector<Atom> atoms, ContinuousPart continuous,
               double continuous_weight);

  static Distribution point_mass(double location);
  static Distribution discrete(std::vector<Atom> atoms);
  static Distribution normal(double mean, double sd);
  static Distribution mixture(std::vector<GaussianComponent> components);
  /// Uniform law on [a, b] represented as a grid with `knots` knots.
  static Distribution uniform(double a, double b, std::size_t knots = 1001);
  static Distribution from_grid(GridDensity grid);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const ContinuousPart& continuous_part() const { return continuous_; }
  double continuous_weight() const { return continuous_weight_; }

  const GridDensity* grid() const { return std::get_if<GridDensity>(&continuous_); }
  const GaussianMixtureDensity* gaussian_mixture() const {
    return std::get_if<GaussianMixtureDensity>(&continuous_);
  }

  bool has_continuous_part() const {
    return !std::holds_alternative<std::monostate>(continuous_) && continuous_weight_ > 0.0;
  }
  /// True when some atom carries positive weight.
  bool has_atoms() const;

  /// Density of the absolutely continuous part (already scaled by its weight).
  double density(double x) const;
  double atom_weight_at(double x) const;
  double cdf(double x) const;
  double cdf_left(double x) const;

  /// Interval outside of which the law has mass below `tail_cutoff`
  /// (exactly zero for atoms and grids).
  Window support(double tail_cutoff = 1e-12) const;
  /// Points where integrands built from this law may have kinks or sharp
  /// features: atoms, grid knots, and a per-sd lattice around each Gaussian
  /// component.
  std::vector<double> breakpoints(double tail_cutoff = 1e-12) const;

  /// Relative mass correction applied when this law was resampled onto a
  /// grid (0 for exact constructions).
  double renormalization_drift() const { return drift_; }
  void set_renormalization_drift(double d) { drift_ = d; }

  bool operator==(const Distribution& o) const {
    return atoms_ == o.atoms_ && continuous_ == o.continuous_ &&
           continuous_weight_ == o.continuous_weight_;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> atom_prefix_;  // cumulative atom weights
  ContinuousPart continuous_;
  double continuous_weight_;
  double drift_ = 0.0;
};

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double second_moment = 0.0;
};

struct TruncationSummary {
  double eps = 0.0;
  double big_n = 0.0;
  double a1 = 0.0;
  double sigma1_sq = 0.0;
  Distribution truncated;
};

MomentSummary moments(const Distribution& d);
double cdf(const Distribution& d, double x);
double cdf_left(const Distribution& d, double x);

/// Second-moment mass outside the open interval (-t, t): atoms at |x| = t are
/// included.
double quadratic_tail(const Distribution& d, double t);

/// P{|X| >= t}.
double tail_probability(const Distribution& d, double t);

/// N(eps) = 1 + sqrt(2 log(1/eps)); throws DomainError unless 0 < eps < 1.
double truncation_level(double eps);

/// Truncation at level N(eps): mass outside [-N, N] is moved to an atom at 0.
/// a1 and sigma1_sq are computed from the original law over the closed
/// interval [-N, N].
TruncationSummary truncate(const Distribution& d, double eps);

/// Law of X + Y for independent X ~ d1, Y ~ d2.
Distribution convolve(const Distribution& d1, const Distribution& d2);

/// Law of lambda * X + shift; throws DomainError for lambda == 0.
Distribution scale_shift(const Distribution& d, double lambda, double shift);

/// Midpoint of the median interval {x : F(x-) <= 1/2 <= F(x)}.
double median(const Distribution& d);

/// E g(X), with quadrature on the continuous part. Extra breakpoints let the
/// caller mark features of g.
Integral expectation(const Distribution& d, const RealFunction& g, double tol,
                     std::span<const double> extra_breakpoints = {});

/// Number of standard deviations beyond which a Gaussian component carries
/// less than `tail_cutoff` * 1e-6 of its mass.
double gaussian_window_sigmas(double tail_cutoff);

}  // namespace entstab
