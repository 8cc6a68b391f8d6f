#include "entstab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "entstab/errors.hpp"

namespace entstab {

namespace {

constexpr double kTiny = 1e-300;

Window joint_window(const Distribution& f, const Distribution& g, double tail_cutoff) {
  const Window a = f.support(tail_cutoff);
  const Window b = g.support(tail_cutoff);
  Window w{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
  if (!(w.hi > w.lo)) {
    w.lo -= 0.5;
    w.hi += 0.5;
  }
  return w;
}

std::vector<double> sup_grid(const Distribution& f, const Distribution& g,
                             const Tolerances& tol) {
  const Window w = joint_window(f, g, tol.tail_cutoff);
  return linspace(w.lo, w.hi, static_cast<std::size_t>(tol.sup_grid_points));
}

std::vector<double> joint_breakpoints(const Distribution& f, const Distribution& g,
                                      double tail_cutoff) {
  std::vector<double> pts = f.breakpoints(tail_cutoff);
  const std::vector<double> more = g.breakpoints(tail_cutoff);
  pts.insert(pts.end(), more.begin(), more.end());
  sort_unique(pts);
  return pts;
}

// Mass of the continuous part lying outside the quadrature window; only
// Gaussian components have any.
double mass_outside(const Distribution& d, const Window& w) {
  const auto* m = d.gaussian_mixture();
  if (m == nullptr) return 0.0;
  return d.continuous_weight() *
         (m->partial_moment(0, -std::numeric_limits<double>::infinity(), w.lo) +
          m->partial_moment(0, w.hi, std::numeric_limits<double>::infinity()));
}

double cdf_tail_area(const Distribution& d, const Window& w) {
  const auto* m = d.gaussian_mixture();
  if (m == nullptr) return 0.0;
  return d.continuous_weight() * (m->lower_tail_integral(w.lo) + m->upper_tail_integral(w.hi));
}

// sup_x [P(x) - Q(x + h)] over the grid and over the candidates created by
// jumps of either law.
double shifted_excess(const Distribution& p, const Distribution& q, double h,
                      const std::vector<double>& xs) {
  double best = -1.0;
  for (double x : xs) best = std::max(best, p.cdf(x) - q.cdf(x + h));
  for (const Atom& a : p.atoms()) {
    if (a.weight > 0.0) best = std::max(best, p.cdf(a.location) - q.cdf(a.location + h));
  }
  for (const Atom& b : q.atoms()) {
    if (b.weight > 0.0) {
      best = std::max(best, p.cdf_left(b.location - h) - q.cdf_left(b.location));
    }
  }
  return best;
}

double levy_violation(const Distribution& f, const Distribution& g, double h,
                      const std::vector<double>& xs) {
  return std::max(shifted_excess(f, g, h, xs), shifted_excess(g, f, h, xs)) - h;
}

}  // namespace

bool EntropicValue::infinite() const { return std::isinf(value); }

MetricValue kolmogorov(const Distribution& f, const Distribution& g, const Tolerances& tol) {
  tol.validate();
  const std::vector<double> xs = sup_grid(f, g, tol);
  auto diff = [&](double x) { return std::abs(f.cdf(x) - g.cdf(x)); };
  double grid_max = 0.0;
  for (double x : xs) grid_max = std::max(grid_max, diff(x));
  const Extremum refined = refined_grid_max(diff, xs, tol.root_tol);
  double value = std::max(grid_max, refined.value);
  for (const auto* d : {&f, &g}) {
    for (const Atom& a : d->atoms()) {
      value = std::max(value, diff(a.location));
      value = std::max(value, std::abs(f.cdf_left(a.location) - g.cdf_left(a.location)));
    }
  }
  const double gain = std::max(0.0, refined.value - grid_max);
  return {std::min(1.0, value), gain + 1e-12, "grid-sup+golden"};
}

MetricValue levy(const Distribution& f, const Distribution& g, const Tolerances& tol) {
  tol.validate();
  const std::vector<double> xs = sup_grid(f, g, tol);
  const MetricValue k = kolmogorov(f, g, tol);
  double lo = 0.0;
  double hi = std::min(1.0, k.value + k.err_estimate);
  if (levy_violation(f, g, hi, xs) > 0.0) hi = 1.0;
  if (levy_violation(f, g, 0.0, xs) <= 0.0) hi = 0.0;
  while (hi - lo > tol.root_tol) {
    const double mid = 0.5 * (lo + hi);
    if (levy_violation(f, g, mid, xs) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Polish the grid-feasible h against a refined search of the continuous
  // parts; raising h by e lowers every violation by at least e.
  double excess = 0.0;
  if (hi > 0.0 && (f.has_continuous_part() || g.has_continuous_part())) {
    for (int side = 0; side < 2; ++side) {
      const Distribution& p = side == 0 ? f : g;
      const Distribution& q = side == 0 ? g : f;
      auto v = [&](double x) { return p.cdf(x) - q.cdf(x + hi) - hi; };
      excess = std::max(excess, refined_grid_max(v, xs, tol.root_tol).value);
    }
  }
  return {std::min(1.0, hi + excess), tol.root_tol + excess, "bisection"};
}

MetricValue w1(const Distribution& f, const Distribution& g, const Tolerances& tol) {
  tol.validate();
  const Window w = joint_window(f, g, tol.tail_cutoff);
  const std::vector<double> pts = joint_breakpoints(f, g, tol.tail_cutoff);
  const Integral body = integrate_split(
      [&](double x) { return std::abs(f.cdf(x) - g.cdf(x)); }, w.lo, w.hi, pts,
      tol.quad_abs_tol);
  const double tails = cdf_tail_area(f, w) + cdf_tail_area(g, w);
  return {body.value, body.err_estimate + tails, "quadrature"};
}

MetricValue tv(const Distribution& f, const Distribution& g, const Tolerances& tol) {
  tol.validate();
  std::vector<double> locations;
  for (const auto* d : {&f, &g}) {
    for (const Atom& a : d->atoms()) locations.push_back(a.location);
  }
  sort_unique(locations);
  double atomic = 0.0;
  for (double x : locations) atomic += std::abs(f.atom_weight_at(x) - g.atom_weight_at(x));
  Integral body;
  if (f.has_continuous_part() || g.has_continuous_part()) {
    const Window w = joint_window(f, g, tol.tail_cutoff);
    const std::vector<double> pts = joint_breakpoints(f, g, tol.tail_cutoff);
    body = integrate_split([&](double x) { return std::abs(f.density(x) - g.density(x)); },
                           w.lo, w.hi, pts, tol.quad_abs_tol);
    body.err_estimate += mass_outside(f, w) + mass_outside(g, w);
  }
  return {std::min(2.0, atomic + body.value), body.err_estimate, "signed-measure"};
}

MetricValue metric_by_name(const std::string& name, const Distribution& f,
                           const Distribution& g, const Tolerances& tol) {
  if (name == "levy") return levy(f, g, tol);
  if (name == "kolmogorov") return kolmogorov(f, g, tol);
  if (name == "w1") return w1(f, g, tol);
  if (name == "tv") return tv(f, g, tol);
  throw DomainError("unknown metric '" + name + "'");
}

EntropicValue entropic_distance(const Distribution& d, const Tolerances& tol) {
  tol.validate();
  const MomentSummary m = moments(d);
  if (!(m.variance > 0.0)) throw DomainError("entropic_distance: zero variance");
  const double sigma = std::sqrt(m.variance);
  if (d.has_atoms()) {
    return {std::numeric_limits<double>::infinity(), 0.0, m.mean, sigma};
  }
  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi) + std::log(sigma);
  auto integrand = [&](double x) {
    const double p = d.density(x);
    if (p < kTiny) return 0.0;
    const double z = (x - m.mean) / sigma;
    return p * (std::log(p) + log_norm + 0.5 * z * z);
  };
  const Window w = d.support(tol.tail_cutoff);
  const Integral r = integrate_split(integrand, w.lo, w.hi, d.breakpoints(tol.tail_cutoff),
                                     tol.quad_abs_tol);
  return {std::max(0.0, r.value), r.err_estimate + mass_outside(d, w), m.mean, sigma};
}

UniformDeviation uniform_deviation_detail(const Distribution& d, const Tolerances& tol) {
  tol.validate();
  if (d.has_atoms()) throw DomainError("uniform_deviation: law has atoms");
  const MomentSummary m = moments(d);
  if (!(m.variance > 0.0)) throw DomainError("uniform_deviation: zero variance");
  const double v = std::sqrt(m.variance);
  const double k = gaussian_window_sigmas(tol.tail_cutoff);
  const Window s = d.support(tol.tail_cutoff);
  const double lo = std::min(s.lo, m.mean - k * v);
  const double hi = std::max(s.hi, m.mean + k * v);
  std::vector<double> xs = linspace(lo, hi, static_cast<std::size_t>(tol.sup_grid_points));
  if (const auto* g = d.grid()) {
    for (std::size_t i = 0; i < g->size(); ++i) xs.push_back(g->knot(i));
    sort_unique(xs);
  }
  auto gap = [&](double x) { return d.density(x) - normal_pdf(x, m.mean, v); };
  const Extremum best = refined_grid_max(gap, xs, tol.root_tol);
  UniformDeviation out;
  out.raw = best.value;
  out.argmax = best.x;
  out.clamped = best.value < 0.0;
  out.value = std::max(0.0, best.value);
  return out;
}

double uniform_deviation(const Distribution& d, const Tolerances& tol) {
  return uniform_deviation_detail(d, tol).value;
}

double entropy_functional(const RealFunction& f, const Distribution& mu, const Tolerances& tol) {
  tol.validate();
  const Integral ef = expectation(mu, f, tol.quad_abs_tol);
  if (!(ef.value > 0.0)) throw DomainError("entropy_functional: E f must be positive");
  const Integral eflogf = expectation(
      mu,
      [&](double x) {
        const double v = f(x);
        if (v < 0.0) throw DomainError("entropy_functional: f must be non-negative");
        return v > kTiny ? v * std::log(v) : 0.0;
      },
      tol.quad_abs_tol);
  return eflogf.value - ef.value * std::log(ef.value);
}

}  // namespace entstab
