#include "entstab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "entstab/errors.hpp"

namespace entstab {

namespace {

constexpr double kWeightTol = 1e-12;
constexpr double kGridMassTol = 1e-9;
constexpr std::size_t kTruncationKnots = 4001;

double trapezoid(const std::vector<double>& v, double step) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) s += 0.5 * (v[i] + v[i + 1]);
  return s * step;
}

bool finite(double x) { return std::isfinite(x); }

// x^k * phi(z) terms vanish at infinite endpoints.
double phi_at(double z) { return std::isinf(z) ? 0.0 : std_normal_pdf(z); }

double times_phi(double factor, double z) {
  return std::isinf(z) ? 0.0 : factor * std_normal_pdf(z);
}

}  // namespace

double gaussian_window_sigmas(double tail_cutoff) {
  const double p = std::clamp(tail_cutoff * 1e-6, 1e-300, 0.25);
  return std::max(8.0, -std_normal_quantile(p));
}

// ---------------------------------------------------------------- GridDensity

GridDensity::GridDensity(double x0, double step, std::vector<double> values)
    : x0_(x0), step_(step), values_(std::move(values)) {
  if (!finite(x0_)) throw InvalidDistribution("grid: x0 must be finite");
  if (!(step_ > 0.0) || !finite(step_)) {
    throw InvalidDistribution("grid: step must be positive");
  }
  if (values_.size() < 3) throw InvalidDistribution("grid: need at least 3 knots");
  for (double v : values_) {
    if (!(v >= 0.0) || !finite(v)) {
      throw InvalidDistribution("grid: values must be finite and non-negative");
    }
  }
  const double mass = trapezoid(values_, step_);
  if (std::abs(mass - 1.0) > kGridMassTol) {
    throw InvalidDistribution("grid: trapezoidal integral is " +
                              std::to_string(mass) + ", expected 1");
  }
  for (double& v : values_) v /= mass;
  cumulative_.resize(values_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + 0.5 * step_ * (values_[i - 1] + values_[i]);
  }
}

GridDensity GridDensity::normalized(double x0, double step, std::vector<double> values,
                                    double* drift) {
  if (values.size() < 3) throw InvalidDistribution("grid: need at least 3 knots");
  const double mass = trapezoid(values, step);
  if (!(mass > 0.0)) throw InvalidDistribution("grid: zero mass");
  for (double& v : values) v /= mass;
  if (drift != nullptr) *drift = std::abs(mass - 1.0);
  return GridDensity(x0, step, std::move(values));
}

double GridDensity::density(double x) const {
  if (!(x >= x0_) || x > x_end()) return 0.0;
  const double pos = (x - x0_) / step_;
  auto i = static_cast<std::size_t>(pos);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double t = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

double GridDensity::cdf(double x) const {
  if (!(x > x0_)) return 0.0;
  if (x >= x_end()) return 1.0;
  const double pos = (x - x0_) / step_;
  auto i = static_cast<std::size_t>(pos);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double t = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  const double v0 = values_[i];
  const double dv = values_[i + 1] - v0;
  return std::min(1.0, cumulative_[i] + step_ * (v0 * t + 0.5 * dv * t * t));
}

double GridDensity::partial_moment(int k, double a, double b) const {
  a = std::max(a, x0_);
  b = std::min(b, x_end());
  if (!(a < b)) return 0.0;
  const auto first = static_cast<std::size_t>(std::floor((a - x0_) / step_));
  double total = 0.0;
  for (std::size_t i = first; i + 1 < values_.size(); ++i) {
    const double lo = std::max(a, knot(i));
    const double hi = std::min(b, knot(i + 1));
    if (lo >= b) break;
    if (hi <= lo) continue;
    // Simpson is exact for the cubic x^k * (linear).
    const double mid = 0.5 * (lo + hi);
    const double plo = values_[i] + (lo - knot(i)) / step_ * (values_[i + 1] - values_[i]);
    const double phi = values_[i] + (hi - knot(i)) / step_ * (values_[i + 1] - values_[i]);
    const double pmid = 0.5 * (plo + phi);
    total += (hi - lo) / 6.0 *
             (std::pow(lo, k) * plo + 4.0 * std::pow(mid, k) * pmid + std::pow(hi, k) * phi);
  }
  return total;
}

// ----------------------------------------------------- GaussianMixtureDensity

GaussianMixtureDensity::GaussianMixtureDensity(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidDistribution("gaussian_mixture: no components");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!finite(c.mean)) throw InvalidDistribution("gaussian_mixture: non-finite mean");
    if (!(c.sd > 0.0) || !finite(c.sd)) {
      throw InvalidDistribution("gaussian_mixture: sd must be positive");
    }
    if (!(c.weight >= 0.0) || c.weight > 1.0 + kWeightTol) {
      throw InvalidDistribution("gaussian_mixture: weight must lie in [0, 1]");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw InvalidDistribution("gaussian_mixture: weights sum to " + std::to_string(total));
  }
}

double GaussianMixtureDensity::density(double x) const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight * normal_pdf(x, c.mean, c.sd);
  return s;
}

double GaussianMixtureDensity::cdf(double x) const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight * normal_cdf(x, c.mean, c.sd);
  return std::min(1.0, s);
}

double GaussianMixtureDensity::partial_moment(int k, double a, double b) const {
  if (!(a < b)) return 0.0;
  double total = 0.0;
  for (const auto& c : components_) {
    const double za = (a - c.mean) / c.sd;
    const double zb = (b - c.mean) / c.sd;
    const double mass = std_normal_mass(za, zb);
    double m = 0.0;
    switch (k) {
      case 0:
        m = mass;
        break;
      case 1:
        m = c.mean * mass + c.sd * (phi_at(za) - phi_at(zb));
        break;
      case 2:
        m = (c.mean * c.mean + c.sd * c.sd) * mass +
            c.sd * (times_phi(c.mean + a, za) - times_phi(c.mean + b, zb));
        break;
      default:
        throw DomainError("partial_moment: k must be 0, 1 or 2");
    }
    total += c.weight * m;
  }
  return total;
}

double GaussianMixtureDensity::upper_tail_integral(double b) const {
  double total = 0.0;
  for (const auto& c : components_) {
    const double z = (b - c.mean) / c.sd;
    total += c.weight * c.sd * (std_normal_pdf(z) - z * std_normal_sf(z));
  }
  return std::max(0.0, total);
}

double GaussianMixtureDensity::lower_tail_integral(double a) const {
  double total = 0.0;
  for (const auto& c : components_) {
    const double z = (a - c.mean) / c.sd;
    total += c.weight * c.sd * (std_normal_pdf(z) + z * std_normal_cdf(z));
  }
  return std::max(0.0, total);
}

// --------------------------------------------------------------- Distribution

Distribution::Distribution(std::vector<Atom> atoms, ContinuousPart continuous,
                           double continuous_weight)
    : atoms_(std::move(atoms)),
      continuous_(std::move(continuous)),
      continuous_weight_(continuous_weight) {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!finite(a.location)) throw InvalidDistribution("atom location must be finite");
    if (!(a.weight >= 0.0) || a.weight > 1.0 + kWeightTol) {
      throw InvalidDistribution("atom weight must lie in [0, 1]");
    }
    if (i > 0 && !(a.location > atoms_[i - 1].location)) {
      throw InvalidDistribution("atom locations must be strictly increasing");
    }
    total += a.weight;
  }
  if (!(continuous_weight_ >= 0.0) || continuous_weight_ > 1.0 + kWeightTol) {
    throw InvalidDistribution("continuous_weight must lie in [0, 1]");
  }
  if (std::holds_alternative<std::monostate>(continuous_) && continuous_weight_ != 0.0) {
    throw InvalidDistribution("continuous_weight must be 0 without a continuous part");
  }
  total += continuous_weight_;
  if (std::abs(total - 1.0) > kWeightTol) {
    throw InvalidDistribution("total mass is " + std::to_string(total) + ", expected 1");
  }
  atom_prefix_.resize(atoms_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    run += atoms_[i].weight;
    atom_prefix_[i] = run;
  }
}

Distribution Distribution::point_mass(double location) {
  return Distribution({{location, 1.0}}, std::monostate{}, 0.0);
}

Distribution Distribution::discrete(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().location == a.location) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  return Distribution(std::move(merged), std::monostate{}, 0.0);
}

Distribution Distribution::normal(double mean, double sd) {
  return mixture({{mean, sd, 1.0}});
}

Distribution Distribution::mixture(std::vector<GaussianComponent> components) {
  return Distribution({}, GaussianMixtureDensity(std::move(components)), 1.0);
}

Distribution Distribution::uniform(double a, double b, std::size_t knots) {
  if (!(b > a)) throw DomainError("uniform: requires a < b");
  if (knots < 3) throw DomainError("uniform: need at least 3 knots");
  const double step = (b - a) / static_cast<double>(knots - 1);
  return from_grid(GridDensity(a, step, std::vector<double>(knots, 1.0 / (b - a))));
}

Distribution Distribution::from_grid(GridDensity grid) {
  return Distribution({}, std::move(grid), 1.0);
}

bool Distribution::has_atoms() const {
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.weight > 0.0; });
}

double Distribution::density(double x) const {
  if (const auto* g = grid()) return continuous_weight_ * g->density(x);
  if (const auto* m = gaussian_mixture()) return continuous_weight_ * m->density(x);
  return 0.0;
}

double Distribution::atom_weight_at(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.location < v; });
  return (it != atoms_.end() && it->location == x) ? it->weight : 0.0;
}

double Distribution::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                             [](double v, const Atom& a) { return v < a.location; });
  double s = (it == atoms_.begin()) ? 0.0 : atom_prefix_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  if (const auto* g = grid()) s += continuous_weight_ * g->cdf(x);
  if (const auto* m = gaussian_mixture()) s += continuous_weight_ * m->cdf(x);
  return std::clamp(s, 0.0, 1.0);
}

double Distribution::cdf_left(double x) const {
  if (std::isnan(x)) throw DomainError("cdf_left: NaN argument");
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.location < v; });
  double s = (it == atoms_.begin()) ? 0.0 : atom_prefix_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  if (const auto* g = grid()) s += continuous_weight_ * g->cdf(x);
  if (const auto* m = gaussian_mixture()) s += continuous_weight_ * m->cdf(x);
  return std::clamp(s, 0.0, 1.0);
}

Window Distribution::support(double tail_cutoff) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Atom& a : atoms_) {
    if (a.weight <= 0.0) continue;
    lo = std::min(lo, a.location);
    hi = std::max(hi, a.location);
  }
  if (continuous_weight_ > 0.0) {
    if (const auto* g = grid()) {
      lo = std::min(lo, g->x0());
      hi = std::max(hi, g->x_end());
    }
    if (const auto* m = gaussian_mixture()) {
      const double k = gaussian_window_sigmas(tail_cutoff);
      for (const auto& c : m->components()) {
        if (c.weight <= 0.0) continue;
        lo = std::min(lo, c.mean - k * c.sd);
        hi = std::max(hi, c.mean + k * c.sd);
      }
    }
  }
  return {lo, hi};
}

std::vector<double> Distribution::breakpoints(double tail_cutoff) const {
  std::vector<double> pts;
  for (const Atom& a : atoms_) pts.push_back(a.location);
  if (continuous_weight_ > 0.0) {
    if (const auto* g = grid()) {
      pts.reserve(pts.size() + g->size());
      for (std::size_t i = 0; i < g->size(); ++i) pts.push_back(g->knot(i));
    }
    if (const auto* m = gaussian_mixture()) {
      const int k = static_cast<int>(std::ceil(gaussian_window_sigmas(tail_cutoff)));
      for (const auto& c : m->components()) {
        if (c.weight <= 0.0) continue;
        for (int j = -k; j <= k; ++j) pts.push_back(c.mean + j * c.sd);
      }
    }
  }
  sort_unique(pts);
  return pts;
}

// ------------------------------------------------------------ free functions

namespace {

double continuous_partial_moment(const Distribution& d, int k, double a, double b) {
  if (d.continuous_weight() <= 0.0) return 0.0;
  if (const auto* g = d.grid()) return d.continuous_weight() * g->partial_moment(k, a, b);
  if (const auto* m = d.gaussian_mixture()) {
    return d.continuous_weight() * m->partial_moment(k, a, b);
  }
  return 0.0;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MomentSummary moments(const Distribution& d) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (const Atom& a : d.atoms()) {
    m1 += a.weight * a.location;
    m2 += a.weight * a.location * a.location;
  }
  m1 += continuous_partial_moment(d, 1, -kInf, kInf);
  m2 += continuous_partial_moment(d, 2, -kInf, kInf);
  return {m1, std::max(0.0, m2 - m1 * m1), m2};
}

double cdf(const Distribution& d, double x) { return d.cdf(x); }
double cdf_left(const Distribution& d, double x) { return d.cdf_left(x); }

double quadratic_tail(const Distribution& d, double t) {
  if (!(t >= 0.0)) throw DomainError("quadratic_tail: t must be >= 0");
  double s = 0.0;
  for (const Atom& a : d.atoms()) {
    if (std::abs(a.location) >= t) s += a.weight * a.location * a.location;
  }
  s += continuous_partial_moment(d, 2, -kInf, -t);
  s += continuous_partial_moment(d, 2, t, kInf);
  return s;
}

double tail_probability(const Distribution& d, double t) {
  if (!(t >= 0.0)) throw DomainError("tail_probability: t must be >= 0");
  double s = 0.0;
  for (const Atom& a : d.atoms()) {
    if (std::abs(a.location) >= t) s += a.weight;
  }
  s += continuous_partial_moment(d, 0, -kInf, -t);
  s += continuous_partial_moment(d, 0, t, kInf);
  return std::min(1.0, s);
}

double truncation_level(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("truncation: eps must lie in (0, 1)");
  return 1.0 + std::sqrt(2.0 * std::log(1.0 / eps));
}

TruncationSummary truncate(const Distribution& d, double eps) {
  const double n = truncation_level(eps);
  double a1 = 0.0;
  double s2 = 0.0;
  double moved = 0.0;
  std::vector<Atom> atoms;
  for (const Atom& a : d.atoms()) {
    if (std::abs(a.location) <= n) {
      a1 += a.weight * a.location;
      s2 += a.weight * a.location * a.location;
      atoms.push_back(a);
    } else {
      moved += a.weight;
    }
  }
  a1 += continuous_partial_moment(d, 1, -n, n);
  s2 += continuous_partial_moment(d, 2, -n, n);
  const double inside = continuous_partial_moment(d, 0, -n, n);
  moved += std::max(0.0, d.continuous_weight() - inside);

  ContinuousPart cont = std::monostate{};
  double cont_weight = 0.0;
  double drift = 0.0;
  if (d.has_continuous_part() && inside > 0.0) {
    const Window w = d.support();
    const GridDensity* g = d.grid();
    if (g != nullptr && g->x0() >= -n && g->x_end() <= n) {
      cont = *g;
      cont_weight = d.continuous_weight();
    } else {
      const double lo = std::max(-n, w.lo);
      const double hi = std::min(n, w.hi);
      if (hi > lo) {
        double step = (hi - lo) / static_cast<double>(kTruncationKnots - 1);
        if (g != nullptr) step = std::min(step, g->step());
        const auto knots = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
        step = (hi - lo) / static_cast<double>(knots - 1);
        std::vector<double> values(knots);
        for (std::size_t i = 0; i < knots; ++i) {
          values[i] = d.density(lo + step * static_cast<double>(i));
        }
        cont = GridDensity::normalized(lo, step, std::move(values), &drift);
        cont_weight = inside;
      } else {
        moved += inside;
      }
    }
  } else {
    moved += inside;
  }

  if (moved > 0.0) {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), 0.0,
                               [](const Atom& a, double v) { return a.location < v; });
    if (it != atoms.end() && it->location == 0.0) {
      it->weight += moved;
    } else {
      atoms.insert(it, Atom{0.0, moved});
    }
  }
  // Absorb rounding so that the invariant on total mass holds exactly.
  double atom_mass = 0.0;
  for (const Atom& a : atoms) atom_mass += a.weight;
  if (std::holds_alternative<std::monostate>(cont)) {
    cont_weight = 0.0;
    if (!atoms.empty()) {
      const double fix = 1.0 - atom_mass;
      for (Atom& a : atoms) {
        if (a.location == 0.0) a.weight += fix;
      }
    }
  } else {
    cont_weight = std::clamp(1.0 - atom_mass, 0.0, 1.0);
  }
  Distribution truncated(std::move(atoms), std::move(cont), cont_weight);
  truncated.set_renormalization_drift(drift);
  return {eps, n, a1, std::max(0.0, s2 - a1 * a1), std::move(truncated)};
}

Distribution scale_shift(const Distribution& d, double lambda, double shift) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw DomainError("scale_shift: lambda must be non-zero");
  }
  std::vector<Atom> atoms;
  atoms.reserve(d.atoms().size());
  for (const Atom& a : d.atoms()) atoms.push_back({lambda * a.location + shift, a.weight});
  if (lambda < 0.0) std::reverse(atoms.begin(), atoms.end());
  ContinuousPart cont = std::monostate{};
  if (const auto* g = d.grid()) {
    std::vector<double> values = g->values();
    const double scale = std::abs(lambda);
    for (double& v : values) v /= scale;
    double x0 = lambda * g->x0() + shift;
    if (lambda < 0.0) {
      std::reverse(values.begin(), values.end());
      x0 = lambda * g->x_end() + shift;
    }
    cont = GridDensity(x0, g->step() * scale, std::move(values));
  } else if (const auto* m = d.gaussian_mixture()) {
    std::vector<GaussianComponent> comps;
    for (const auto& c : m->components()) {
      comps.push_back({lambda * c.mean + shift, std::abs(lambda) * c.sd, c.weight});
    }
    cont = GaussianMixtureDensity(std::move(comps));
  }
  Distribution out(std::move(atoms), std::move(cont), d.continuous_weight());
  out.set_renormalization_drift(d.renormalization_drift());
  return out;
}

double median(const Distribution& d) {
  const Window w = d.support();
  auto search = [&](auto&& below) {
    // Smallest x such that below(x) is false, assuming monotone below().
    double lo = w.lo - 1.0;
    double hi = w.hi + 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
      const double mid = 0.5 * (lo + hi);
      if (below(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return hi;
  };
  const double left = search([&](double x) { return d.cdf(x) < 0.5; });
  const double right = search([&](double x) { return d.cdf_left(x) <= 0.5; });
  return 0.5 * (left + right);
}

Integral expectation(const Distribution& d, const RealFunction& g, double tol,
                     std::span<const double> extra_breakpoints) {
  Integral total;
  for (const Atom& a : d.atoms()) {
    if (a.weight > 0.0) total.value += a.weight * g(a.location);
  }
  if (d.has_continuous_part()) {
    const Window w = d.support();
    std::vector<double> pts = d.breakpoints();
    pts.insert(pts.end(), extra_breakpoints.begin(), extra_breakpoints.end());
    const Integral part = integrate_split(
        [&](double x) {
          const double p = d.density(x);
          return p > 0.0 ? p * g(x) : 0.0;
        },
        w.lo, w.hi, pts, tol);
    total.value += part.value;
    total.err_estimate += part.err_estimate;
  }
  return total;
}

}  // namespace entstab
