#include <algorithm>
#include <limits>
#include <type_traits>
#include <cmath>
#include <variant>
#include <vector>

#include "entstab/distribution.hpp"
#include "entstab/errors.hpp"

namespace entstab {

namespace {

constexpr std::size_t kMaxKnots = std::size_t{1} << 18;
constexpr double kTailCutoff = 1e-12;

// Continuous contributions to the density of a sum.
struct ShiftedGrid {
  const GridDensity* grid;
  double shift;
  double weight;
};

struct SmoothedGrid {
  const GridDensity* grid;
  double mean;
  double sd;
  double weight;
};

struct GridProduct {
  const GridDensity* left;
  const GridDensity* right;
  double weight;
};

struct Gaussian {
  double mean;
  double sd;
  double weight;
};

using Term = std::variant<ShiftedGrid, SmoothedGrid, GridProduct, Gaussian>;

// (grid * N(mean, sd^2))(x), exact for the piecewise-linear interpolant.
double smoothed_grid_density(const SmoothedGrid& t, double x, double k) {
  const GridDensity& g = *t.grid;
  const double u = x - t.mean;
  const double reach = k * t.sd;
  const double lo_x = std::max(g.x0(), u - reach);
  const double hi_x = std::min(g.x_end(), u + reach);
  if (!(lo_x < hi_x)) return 0.0;
  const auto n = g.size();
  auto first = static_cast<std::size_t>(std::floor((lo_x - g.x0()) / g.step()));
  auto last = static_cast<std::size_t>(std::ceil((hi_x - g.x0()) / g.step()));
  first = std::min(first, n - 1);
  last = std::min(last, n - 1);
  if (first == last) return 0.0;
  const auto& v = g.values();
  double total = 0.0;
  double z_prev = (u - g.knot(first)) / t.sd;
  double pdf_prev = std_normal_pdf(z_prev);
  for (std::size_t j = first; j < last; ++j) {
    const double z_next = (u - g.knot(j + 1)) / t.sd;
    const double pdf_next = std_normal_pdf(z_next);
    const double i0 = std_normal_mass(z_next, z_prev);
    const double i1 = t.sd * (pdf_prev - pdf_next);
    const double slope = (v[j + 1] - v[j]) / g.step();
    total += v[j] * i0 + slope * (i1 + (u - g.knot(j)) * i0);
    z_prev = z_next;
    pdf_prev = pdf_next;
  }
  return std::max(0.0, total);
}

// Adds t.weight * (grid * N)(lo + i h) for every knot i. When h divides the
// grid step, the exact segment weights depend only on the knot offset and
// one of step/h phases, so they are tabulated once and applied as a discrete
// convolution.
void add_smoothed_grid(const SmoothedGrid& t, double lo, double h, std::vector<double>& out,
                       double k) {
  const GridDensity& g = *t.grid;
  const double s = g.step();
  const double rr = std::round(s / h);
  if (rr < 1.0 || std::abs(rr * h - s) > 1e-12 * s) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += t.weight * smoothed_grid_density(t, lo + h * static_cast<double>(i), k);
    }
    return;
  }
  const auto r = static_cast<std::size_t>(rr);
  const auto& v = g.values();
  const auto segments = static_cast<std::ptrdiff_t>(g.size()) - 1;
  const double reach = k * t.sd;
  const double p0 = (lo - t.mean - g.x0()) / s;
  const double q0 = std::floor(p0);
  const double f0 = p0 - q0;
  const auto dmin = static_cast<std::ptrdiff_t>(std::floor(-reach / s)) - 2;
  const auto dmax = static_cast<std::ptrdiff_t>(std::ceil(reach / s)) + 1;
  std::vector<double> a(static_cast<std::size_t>(dmax - dmin + 1));
  std::vector<double> b(a.size());
  for (std::size_t c = 0; c < r; ++c) {
    const double gc = f0 + static_cast<double>(c) / rr;
    const double qc = std::floor(gc);
    const double phase = gc - qc;
    // d = base index - segment index; u - x_j = (d + phase) s.
    for (std::ptrdiff_t d = dmin; d <= dmax; ++d) {
      const double tt = (static_cast<double>(d) + phase) * s;
      double wa = 0.0, wb = 0.0;
      if (tt >= -reach - s && tt - s <= reach + s) {
        const double z_prev = tt / t.sd;
        const double z_next = (tt - s) / t.sd;
        const double i0 = std_normal_mass(z_next, z_prev);
        const double i1 = t.sd * (std_normal_pdf(z_prev) - std_normal_pdf(z_next));
        wb = (i1 + tt * i0) / s;
        wa = i0 - wb;
      }
      a[static_cast<std::size_t>(d - dmin)] = wa;
      b[static_cast<std::size_t>(d - dmin)] = wb;
    }
    for (std::size_t i = c; i < out.size(); i += r) {
      const auto base = static_cast<std::ptrdiff_t>(q0 + qc) + static_cast<std::ptrdiff_t>(i / r);
      const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, base - dmax);
      const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(segments - 1, base - dmin);
      double total = 0.0;
      for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
        const auto idx = static_cast<std::size_t>(base - j - dmin);
        total += a[idx] * v[static_cast<std::size_t>(j)] + b[idx] * v[static_cast<std::size_t>(j + 1)];
      }
      out[i] += t.weight * std::max(0.0, total);
    }
  }
}

// (left * right)(x); Simpson on each piece where both factors are linear.
double grid_product_density(const GridProduct& t, double x, std::vector<double>& cuts) {
  const GridDensity& a = *t.left;
  const GridDensity& b = *t.right;
  const double lo = std::max(b.x0(), x - a.x_end());
  const double hi = std::min(b.x_end(), x - a.x0());
  if (!(lo < hi)) return 0.0;
  cuts.clear();
  cuts.push_back(lo);
  auto first_index = [](const GridDensity& g, double from) {
    return static_cast<std::size_t>(std::max(0.0, std::floor((from - g.x0()) / g.step())));
  };
  for (std::size_t j = first_index(b, lo); j < b.size() && b.knot(j) < hi; ++j) {
    if (b.knot(j) > lo) cuts.push_back(b.knot(j));
  }
  // y = x - t_i lies in (lo, hi) iff t_i lies in (x - hi, x - lo).
  for (std::size_t i = first_index(a, x - hi); i < a.size() && a.knot(i) < x - lo; ++i) {
    const double y = x - a.knot(i);
    if (y > lo && y < hi) cuts.push_back(y);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double y) { return a.density(x - y) * b.density(y); };
  double total = 0.0;
  double f_prev = f(cuts[0]);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i];
    const double r = cuts[i + 1];
    const double f_next = f(r);
    if (r > l) total += (r - l) / 6.0 * (f_prev + 4.0 * f(0.5 * (l + r)) + f_next);
    f_prev = f_next;
  }
  return total;
}

// Grid product sampled on a lattice shared by both grids: on each cell both
// factors are linear, so the cell integral is h/6 (2ab + ab' + a'b + 2a'b').
// Returns false when the lattices do not line up.
bool add_grid_product(const GridProduct& t, double lo, double h, std::vector<double>& out) {
  const GridDensity& a = *t.left;
  const GridDensity& b = *t.right;
  if (std::abs(a.step() - h) > 1e-12 * h || std::abs(b.step() - h) > 1e-12 * h) return false;
  const double p0 = (lo - a.x0() - b.x0()) / h;
  if (std::abs(p0 - std::round(p0)) > 1e-9) return false;
  const auto k0 = static_cast<std::ptrdiff_t>(std::round(p0));
  const auto& av = a.values();
  const auto& bv = b.values();
  const auto na = static_cast<std::ptrdiff_t>(av.size());
  const auto nb = static_cast<std::ptrdiff_t>(bv.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::ptrdiff_t k = k0 + static_cast<std::ptrdiff_t>(i);
    // cell j of b pairs with cell c = k - j - 1 of a
    const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, k - na + 1);
    const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(nb - 2, k - 1);
    double total = 0.0;
    for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
      const auto c = static_cast<std::size_t>(k - j - 1);
      const auto jj = static_cast<std::size_t>(j);
      total += 2.0 * av[c + 1] * bv[jj] + av[c + 1] * bv[jj + 1] + av[c] * bv[jj] +
               2.0 * av[c] * bv[jj + 1];
    }
    out[i] += t.weight * h / 6.0 * total;
  }
  return true;
}

// (1/h) * integral of p(x - shift) * hat_i(x) dx, where hat_i is the unit hat
// centred at knot c with half-width h. Projecting onto hats keeps mass and
// mean exact even when jumps of the shifted grid fall between output knots.
double hat_projection(const GridDensity& g, double shift, double c, double h) {
  const double lo = std::max(c - h, g.x0() + shift);
  const double hi = std::min(c + h, g.x_end() + shift);
  if (!(lo < hi)) return 0.0;
  std::vector<double> cuts{lo, hi};
  if (c > lo && c < hi) cuts.push_back(c);
  const auto first = static_cast<std::size_t>(
      std::max(0.0, std::floor((lo - shift - g.x0()) / g.step())));
  for (std::size_t j = first; j < g.size() && g.knot(j) + shift < hi; ++j) {
    const double y = g.knot(j) + shift;
    if (y > lo) cuts.push_back(y);
  }
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double x) { return std::max(0.0, 1.0 - std::abs(x - c) / h); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i];
    const double r = cuts[i + 1];
    if (!(r > l)) continue;
    const double m = 0.5 * (l + r);
    // Evaluate just inside the piece so jumps at its ends are not picked up.
    const double eps = 1e-12 * (r - l);
    const double pl = g.density(l + eps - shift);
    const double pr = g.density(r - eps - shift);
    const double pm = g.density(m - shift);
    total += (r - l) / 6.0 * (pl * f(l) + 4.0 * pm * f(m) + pr * f(r));
  }
  return total / h;
}

bool aligned(const GridDensity& g, double shift, double lo, double h) {
  const double ratio = g.step() / h;
  const double offset = (g.x0() + shift - lo) / h;
  // Point samples reproduce the shifted interpolant only when its knots are
  // output knots and it has no jumps at its ends.
  return g.values().front() == 0.0 && g.values().back() == 0.0 &&
         std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0 &&
         std::abs(offset - std::round(offset)) < 1e-9;
}

Window term_window(const Term& term, double k) {
  return std::visit(
      [k](const auto& t) -> Window {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ShiftedGrid>) {
          return {t.grid->x0() + t.shift, t.grid->x_end() + t.shift};
        } else if constexpr (std::is_same_v<T, SmoothedGrid>) {
          return {t.grid->x0() + t.mean - k * t.sd, t.grid->x_end() + t.mean + k * t.sd};
        } else if constexpr (std::is_same_v<T, GridProduct>) {
          return {t.left->x0() + t.right->x0(), t.left->x_end() + t.right->x_end()};
        } else {
          return {t.mean - k * t.sd, t.mean + k * t.sd};
        }
      },
      term);
}

double term_step(const Term& term) {
  return std::visit(
      [](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ShiftedGrid>) {
          // Off-lattice shifts put jumps between knots; halve the step there.
          const double q = t.shift / t.grid->step();
          return std::abs(q - std::round(q)) < 1e-9 ? t.grid->step() : 0.5 * t.grid->step();
        } else if constexpr (std::is_same_v<T, SmoothedGrid>) {
          // A divisor of the grid step, so that sampling can be tabulated.
          return t.grid->step() / std::ceil(t.grid->step() / (t.sd / 100.0));
        } else if constexpr (std::is_same_v<T, GridProduct>) {
          return std::min(t.left->step(), t.right->step());
        } else {
          return t.sd / 100.0;
        }
      },
      term);
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (a.weight <= 0.0) continue;
    if (!out.empty() && out.back().location == a.location) {
      out.back().weight += a.weight;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

std::vector<GaussianComponent> components_of(const Distribution& d) {
  if (const auto* m = d.gaussian_mixture()) return m->components();
  return {};
}

}  // namespace

Distribution convolve(const Distribution& d1, const Distribution& d2) {
  std::vector<Atom> atoms;
  for (const Atom& a : d1.atoms()) {
    for (const Atom& b : d2.atoms()) atoms.push_back({a.location + b.location, a.weight * b.weight});
  }
  atoms = merge_atoms(std::move(atoms));
  double atom_mass = 0.0;
  for (const Atom& a : atoms) atom_mass += a.weight;

  const double w1 = d1.has_continuous_part() ? d1.continuous_weight() : 0.0;
  const double w2 = d2.has_continuous_part() ? d2.continuous_weight() : 0.0;
  if (w1 == 0.0 && w2 == 0.0) {
    return Distribution::discrete(std::move(atoms));
  }

  const bool any_grid = (w1 > 0.0 && d1.grid() != nullptr) || (w2 > 0.0 && d2.grid() != nullptr);
  const double cont_mass = std::clamp(1.0 - atom_mass, 0.0, 1.0);

  if (!any_grid) {
    std::vector<GaussianComponent> comps;
    const auto c1 = components_of(d1);
    const auto c2 = components_of(d2);
    if (w1 > 0.0) {
      for (const Atom& b : d2.atoms()) {
        for (const auto& c : c1) comps.push_back({c.mean + b.location, c.sd, w1 * c.weight * b.weight});
      }
    }
    if (w2 > 0.0) {
      for (const Atom& a : d1.atoms()) {
        for (const auto& c : c2) comps.push_back({c.mean + a.location, c.sd, w2 * c.weight * a.weight});
      }
    }
    if (w1 > 0.0 && w2 > 0.0) {
      for (const auto& a : c1) {
        for (const auto& b : c2) {
          comps.push_back({a.mean + b.mean, std::hypot(a.sd, b.sd), w1 * w2 * a.weight * b.weight});
        }
      }
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
      return a.mean != b.mean ? a.mean < b.mean : a.sd < b.sd;
    });
    std::vector<GaussianComponent> merged;
    double total = 0.0;
    for (const auto& c : comps) {
      if (c.weight <= 0.0) continue;
      total += c.weight;
      if (!merged.empty() && merged.back().mean == c.mean && merged.back().sd == c.sd) {
        merged.back().weight += c.weight;
      } else {
        merged.push_back(c);
      }
    }
    for (auto& c : merged) c.weight /= total;
    return Distribution(std::move(atoms), GaussianMixtureDensity(std::move(merged)), cont_mass);
  }

  std::vector<Term> terms;
  auto add_shifted = [&](const Distribution& cont, double w, const Distribution& other) {
    for (const Atom& b : other.atoms()) {
      if (b.weight <= 0.0) continue;
      if (const auto* g = cont.grid()) {
        terms.push_back(ShiftedGrid{g, b.location, w * b.weight});
      } else {
        for (const auto& c : components_of(cont)) {
          terms.push_back(Gaussian{c.mean + b.location, c.sd, w * c.weight * b.weight});
        }
      }
    }
  };
  if (w1 > 0.0) add_shifted(d1, w1, d2);
  if (w2 > 0.0) add_shifted(d2, w2, d1);
  if (w1 > 0.0 && w2 > 0.0) {
    const GridDensity* g1 = d1.grid();
    const GridDensity* g2 = d2.grid();
    if (g1 != nullptr && g2 != nullptr) {
      terms.push_back(GridProduct{g1, g2, w1 * w2});
    } else {
      const GridDensity* g = g1 != nullptr ? g1 : g2;
      const auto comps = components_of(g1 != nullptr ? d2 : d1);
      for (const auto& c : comps) terms.push_back(SmoothedGrid{g, c.mean, c.sd, w1 * w2 * c.weight});
    }
  }

  const double k = gaussian_window_sigmas(kTailCutoff);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double step = lo;
  for (const Term& t : terms) {
    const Window w = term_window(t, k);
    lo = std::min(lo, w.lo);
    hi = std::max(hi, w.hi);
    step = std::min(step, term_step(t));
  }
  step = std::max(step, (hi - lo) / static_cast<double>(kMaxKnots - 3));
  // The step is kept exact and the window widened to a whole number of steps.
  auto knots = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
  hi = lo + step * static_cast<double>(knots - 1);
  // One empty knot on each side so that jumps at the support ends are
  // represented by full hats.
  lo -= step;
  hi += step;
  knots += 2;

  // Smooth terms are sampled with a second-difference correction so that
  // the linear interpolant keeps mass and moments to O(step^4).
  std::vector<double> smooth(knots, 0.0);
  std::vector<double> values(knots, 0.0);
  std::vector<double> cuts;
  bool product_done = false;
  for (const Term& term : terms) {
    if (const auto* t = std::get_if<GridProduct>(&term)) product_done = add_grid_product(*t, lo, step, values);
  }
  for (std::size_t i = 0; i < knots; ++i) {
    const double x = lo + step * static_cast<double>(i);
    for (const Term& term : terms) {
      if (const auto* t = std::get_if<ShiftedGrid>(&term)) {
        values[i] += t->weight * (aligned(*t->grid, t->shift, lo, step)
                                      ? t->grid->density(x - t->shift)
                                      : hat_projection(*t->grid, t->shift, x, step));
      } else if (const auto* t = std::get_if<GridProduct>(&term)) {
        if (!product_done) values[i] += t->weight * grid_product_density(*t, x, cuts);
      } else if (const auto* t = std::get_if<Gaussian>(&term)) {
        smooth[i] += t->weight * normal_pdf(x, t->mean, t->sd);
      }
    }
  }
  for (const Term& term : terms) {
    if (const auto* t = std::get_if<SmoothedGrid>(&term)) add_smoothed_grid(*t, lo, step, smooth, k);
  }
  for (std::size_t i = 0; i < knots; ++i) {
    double v = smooth[i];
    if (i > 0 && i + 1 < knots) v -= (smooth[i + 1] - 2.0 * smooth[i] + smooth[i - 1]) / 12.0;
    values[i] += std::max(0.0, v);
  }
  double drift = 0.0;
  GridDensity grid = GridDensity::normalized(lo, step, std::move(values), &drift);
  Distribution out(std::move(atoms), std::move(grid), cont_mass);
  out.set_renormalization_drift(
      std::max({drift, d1.renormalization_drift(), d2.renormalization_drift()}));
  return out;
}

}  // namespace entstab
