#include "entstab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "entstab/errors.hpp"

namespace entstab {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2 pi)
constexpr double kInvSqrt2 = 0.7071067811865476;

// Acklam's rational approximation; relative error ~1.15e-9, polished by
// Halley steps in std_normal_quantile.
double acklam_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

struct SimpsonState {
  const RealFunction& f;
  double sum = 0.0;
  double err = 0.0;
  std::size_t evals = 0;
  std::size_t max_evals;
};

constexpr int kMaxDepth = 48;
constexpr std::size_t kMaxEvals = std::size_t{1} << 23;

void simpson_step(SimpsonState& st, double a, double b, double fa, double fm,
                  double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.evals += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right);
  if (std::abs(delta) <= std::max(15.0 * tol, floor) || depth <= 0 ||
      m <= a || b <= m) {
    st.sum += left + right + delta / 15.0;
    st.err += std::abs(delta) / 15.0;
    return;
  }
  if (st.evals > st.max_evals) {
    throw QuadratureError("integrate: evaluation budget exhausted", st.sum,
                          st.err + std::abs(delta));
  }
  simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
  simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

void Tolerances::validate() const {
  if (!(quad_abs_tol > 0.0) || !(root_tol > 0.0) || !(tail_cutoff > 0.0) ||
      !(tail_cutoff < 1.0)) {
    throw DomainError("tolerances must be strictly positive");
  }
  if (sup_grid_points < 1000) {
    throw DomainError("sup_grid_points must be >= 1000");
  }
}

Tolerances Tolerances::refined(int level) const {
  Tolerances t = *this;
  for (int i = 0; i < level; ++i) {
    t.sup_grid_points = 2 * t.sup_grid_points - 1;
    t.quad_abs_tol /= 4.0;
    t.root_tol /= 2.0;
  }
  return t;
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_sf(double x) {
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie in (0, 1)");
  }
  double x = acklam_quantile(p);
  // Halley refinement on the residual measured in the smaller tail.
  for (int i = 0; i < 3; ++i) {
    const double e = (p < 0.5) ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_sf(x);
    const double pdf = std_normal_pdf(x);
    if (pdf <= 0.0) break;
    const double u = e / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double normal_pdf(double x, double mean, double sd) {
  return std_normal_pdf((x - mean) / sd) / sd;
}

double normal_cdf(double x, double mean, double sd) {
  return std_normal_cdf((x - mean) / sd);
}

double std_normal_mass(double a, double b) {
  if (a >= 0.0) return std_normal_sf(a) - std_normal_sf(b);
  if (b <= 0.0) return std_normal_cdf(b) - std_normal_cdf(a);
  return 1.0 - std_normal_cdf(a) - std_normal_sf(b);
}

Integral integrate(const RealFunction& f, double a, double b, double tol) {
  if (!(a <= b)) throw DomainError("integrate: requires a <= b");
  if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
  if (a == b) return {};
  constexpr int kInitialPieces = 8;
  SimpsonState st{f, 0.0, 0.0, 0, kMaxEvals};
  const double width = (b - a) / kInitialPieces;
  for (int i = 0; i < kInitialPieces; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == kInitialPieces) ? b : a + (i + 1) * width;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    st.evals += 3;
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    simpson_step(st, lo, hi, flo, fm, fhi, whole, tol / kInitialPieces, kMaxDepth);
  }
  return {st.sum, st.err};
}

Integral integrate_split(const RealFunction& f, double a, double b,
                         std::span<const double> breakpoints, double tol) {
  if (!(a <= b)) throw DomainError("integrate_split: requires a <= b");
  if (a == b) return {};
  std::vector<double> nodes;
  nodes.reserve(breakpoints.size() + 2);
  nodes.push_back(a);
  for (double x : breakpoints) {
    if (x > a && x < b) nodes.push_back(x);
  }
  nodes.push_back(b);
  sort_unique(nodes);
  Integral total;
  const double span = b - a;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    const double share = std::max(tol * (hi - lo) / span, 1e-300);
    const Integral piece = integrate(f, lo, hi, share);
    total.value += piece.value;
    total.err_estimate += piece.err_estimate;
  }
  return total;
}

double bisect_monotone(const RealFunction& g, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw DomainError("bisect_monotone: requires lo <= hi");
  if (!(tol > 0.0)) throw DomainError("bisect_monotone: tol must be positive");
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) {
    throw BracketError("bisect_monotone: g(lo) and g(hi) have the same sign");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Extremum golden_section_max(const RealFunction& f, double lo, double hi,
                            double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? Extremum{x1, f1} : Extremum{x2, f2};
}

Extremum refined_grid_max(const RealFunction& f, std::span<const double> points,
                          double tol) {
  if (points.empty()) throw DomainError("refined_grid_max: no points");
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = f(points[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  Extremum result{points[best], best_value};
  if (points.size() < 3) return result;
  const double lo = points[best == 0 ? 0 : best - 1];
  const double hi = points[std::min(best + 1, points.size() - 1)];
  if (hi > lo) {
    const Extremum polished = golden_section_max(f, lo, hi, tol);
    if (polished.value > result.value) result = polished;
  }
  return result;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw DomainError("linspace: need at least two points");
  std::vector<double> xs(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + step * static_cast<double>(i);
  xs.back() = hi;
  return xs;
}

void sort_unique(std::vector<double>& xs, double min_gap) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (out.empty() || x - out.back() > min_gap) out.push_back(x);
  }
  xs = std::move(out);
}

}  // namespace entstab
