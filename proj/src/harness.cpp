#include "entstab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "entstab/errors.hpp"
#include "entstab/regularize.hpp"
#include "req.hpp"

namespace entstab {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// SplitMix64 output at position `index` of the stream keyed by `seed`.
std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(splitmix64(seed, index) >> 11) * 0x1.0p-53;
}

const std::map<std::string, std::set<std::string>>& known_params() {
  static const std::map<std::string, std::set<std::string>> m{
      {"two_point", {"a"}},
      {"uniform", {"var"}},
      {"contaminated_normal", {"w", "tau"}},
      {"gaussian_mixture_random", {"draws", "components"}},
      {"convolved_pair", {}},
      {"regularized_pair", {}},
  };
  return m;
}

bool is_pair_family(const std::string& id) {
  return id == "convolved_pair" || id == "regularized_pair";
}

std::vector<double> param(const FamilySpec& s, const std::string& name, std::vector<double> dflt) {
  auto it = s.params.find(name);
  return it == s.params.end() ? dflt : it->second;
}

std::vector<FamilyMember> singles(const FamilySpec& s) {
  std::vector<FamilyMember> out;
  auto add = [&](std::string d, Distribution x) {
    out.push_back({std::move(d), std::move(x), std::nullopt, std::nullopt, false});
  };
  if (s.family_id == "two_point") {
    for (double a : param(s, "a", {1})) {
      if (!(a > 0)) throw ConfigError("two_point: a must be > 0");
      add("two_point(a=" + fmt(a) + ")", Distribution::discrete({{-a, 0.5}, {a, 0.5}}));
    }
  } else if (s.family_id == "uniform") {
    for (double v : param(s, "var", {1})) {
      if (!(v > 0)) throw ConfigError("uniform: var must be > 0");
      const double h = std::sqrt(3 * v);
      add("uniform(var=" + fmt(v) + ")", Distribution::uniform(-h, h));
    }
  } else if (s.family_id == "contaminated_normal") {
    for (double w : param(s, "w", {0.1})) {
      for (double tau : param(s, "tau", {3})) {
        if (!(w >= 0 && w < 1 && tau > 0)) throw ConfigError("contaminated_normal: need 0 <= w < 1, tau > 0");
        std::vector<GaussianComponent> c{{0, 1, 1 - w}};
        if (w > 0) c.push_back({0, tau, w});
        add("contaminated_normal(w=" + fmt(w) + ",tau=" + fmt(tau) + ")",
            standardize(Distribution::mixture(c)));
      }
    }
  } else if (s.family_id == "gaussian_mixture_random") {
    const auto draws = param(s, "draws", {5});
    const auto comps = param(s, "components", {3});
    if (draws.size() != 1 || comps.size() != 1 || !(draws[0] >= 1) || !(comps[0] >= 1)) {
      throw ConfigError("gaussian_mixture_random: draws and components take one value >= 1");
    }
    const auto n = static_cast<std::uint64_t>(draws[0]);
    const auto k = static_cast<std::uint64_t>(comps[0]);
    for (std::uint64_t d = 0; d < n; ++d) {
      std::vector<GaussianComponent> c;
      double total = 0;
      for (std::uint64_t j = 0; j < k; ++j) {
        const std::uint64_t base = (d * 64 + j) * 3;
        const double mean = -2 + 4 * uniform01(s.rng_seed, base);
        const double sd = 0.3 + 1.2 * uniform01(s.rng_seed, base + 1);
        const double w = 0.1 + 0.9 * uniform01(s.rng_seed, base + 2);
        c.push_back({mean, sd, w});
        total += w;
      }
      double rest = 1.0;
      for (std::size_t j = 1; j < c.size(); ++j) {
        c[j].weight /= total;
        rest -= c[j].weight;
      }
      c[0].weight = rest;
      add("gaussian_mixture_random(seed=" + std::to_string(s.rng_seed) + ",draw=" +
              std::to_string(d) + ")",
          standardize(Distribution::mixture(c)));
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> pair_indices(std::size_t n, const std::string& how) {
  std::vector<std::pair<std::size_t, std::size_t>> p;
  if (how == "adjacent") {
    if (n == 1) p.emplace_back(0, 0);
    for (std::size_t i = 0; n > 1 && i < n; ++i) p.emplace_back(i, (i + 1) % n);
    if (n == 2) p.pop_back();
  } else if (how == "all") {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) p.emplace_back(i, j);
    }
  } else if (how == "diagonal" || how == "self") {
    for (std::size_t i = 0; i < n; ++i) p.emplace_back(i, i);
  }
  return p;
}

bool takes(const BoundSpec& s, const char* input) {
  return std::find(s.inputs.begin(), s.inputs.end(), input) != s.inputs.end();
}

bool needs_unit_sum(const BoundSpec& s) {
  return s.normalization == "none" &&
         std::find(s.requirements.begin(), s.requirements.end(), req::kTotalVar) !=
             s.requirements.end();
}

BoundCheckReport evaluate_recorded(const std::string& id, const BoundInputs& in,
                                   const Tolerances& tol) {
  try {
    return evaluate_bound(id, in, tol);
  } catch (const PreconditionError& e) {
    BoundCheckReport r;
    const BoundSpec& s = find_bound(id);
    r.bound_id = id;
    r.input_descriptor = in.descriptor;
    r.constant_mode = s.constant_mode;
    r.direction = s.direction;
    r.skipped = true;
    r.skip_reason = e.requirement();
    return r;
  } catch (const CatalogueError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    BoundCheckReport r;
    const BoundSpec& s = find_bound(id);
    r.bound_id = id;
    r.input_descriptor = in.descriptor;
    r.constant_mode = s.constant_mode;
    r.direction = s.direction;
    r.error = e.what();
    return r;
  }
}

// Smoothed (X_sigma, Y_sigma) per member, shared across bounds.
using SmoothCache = std::map<const FamilyMember*, std::pair<Distribution, Distribution>>;

// All (inputs) combinations of one bound with one family.
std::vector<BoundInputs> combinations(const BoundSpec& s, const FamilySpec& fam,
                                      const std::vector<FamilyMember>& members, SmoothCache& cache) {
  std::vector<BoundInputs> out;
  const bool pair = takes(s, "Y");
  const bool with_sigma = takes(s, "sigma");
  const bool with_t = takes(s, "T");
  const double half = std::sqrt(0.5);
  for (const auto& m : members) {
    if (!pair && m.y) continue;
    std::vector<std::optional<double>> sigmas{std::nullopt};
    if (with_sigma) {
      sigmas.clear();
      if (m.sigma) {
        sigmas.push_back(*m.sigma);
      } else {
        for (double v : fam.sigma_grid) sigmas.push_back(v);
      }
    }
    std::vector<std::optional<double>> ts{std::nullopt};
    if (with_t) {
      ts.clear();
      for (double v : fam.t_grid) ts.push_back(v);
    }
    Distribution x = m.x;
    std::optional<Distribution> y = m.y;
    std::string desc = m.descriptor;
    if (pair && !y) {
      y = x;
      desc = "(" + desc + ", " + desc + ")";
    }
    if (!with_sigma && m.regularize_inputs && m.sigma) {
      auto it = cache.find(&m);
      if (it == cache.end()) {
        it = cache.emplace(&m, std::pair{regularize(x, {*m.sigma}), regularize(*y, {*m.sigma})}).first;
      }
      x = it->second.first;
      y = it->second.second;
      desc += " smoothed";
    }
    if (pair && needs_unit_sum(s)) {
      x = scale_shift(x, half, 0);
      y = scale_shift(*y, half, 0);
      desc += " scaled 1/sqrt2";
    }
    for (const auto& sg : sigmas) {
      for (const auto& t : ts) {
        BoundInputs in;
        in.x = x;
        if (pair) in.y = y;
        in.descriptor = desc;
        if (sg) {
          in.scalars["sigma"] = *sg;
          if (!m.sigma) in.descriptor += " sigma=" + fmt(*sg);
        }
        if (t) {
          in.scalars["T"] = *t;
          in.descriptor += " T=" + fmt(*t);
        }
        out.push_back(std::move(in));
      }
    }
  }
  return out;
}

void sort_reports(std::vector<BoundCheckReport>& r) {
  std::stable_sort(r.begin(), r.end(), [](const BoundCheckReport& a, const BoundCheckReport& b) {
    return a.bound_id != b.bound_id ? a.bound_id < b.bound_id
                                    : a.input_descriptor < b.input_descriptor;
  });
}

}  // namespace

void FamilySpec::validate() const {
  auto it = known_params().find(family_id);
  if (it == known_params().end()) throw ConfigError("unknown family '" + family_id + "'");
  for (const auto& [name, grid] : params) {
    if (!it->second.count(name)) {
      throw ConfigError(family_id + ": unknown parameter '" + name + "'");
    }
    if (grid.empty()) throw ConfigError(family_id + ": empty grid for '" + name + "'");
    for (double v : grid) {
      if (!std::isfinite(v)) throw ConfigError(family_id + ": non-finite value in '" + name + "'");
    }
  }
  if (t_grid.empty() || sigma_grid.empty()) throw ConfigError(family_id + ": empty T or sigma grid");
  for (double s : sigma_grid) {
    if (!(s > 0)) throw ConfigError(family_id + ": sigma grid values must be > 0");
  }
  if (is_pair_family(family_id)) {
    if (base.empty()) throw ConfigError(family_id + ": needs at least one base family");
    for (const auto& b : base) {
      if (is_pair_family(b.family_id)) throw ConfigError(family_id + ": base families must be single-law");
      b.validate();
    }
    static const std::set<std::string> pairings{"adjacent", "all", "diagonal", "self"};
    if (!pairings.count(pairing) || (pairing == "self" && family_id != "regularized_pair")) {
      throw ConfigError(family_id + ": unknown pairing '" + pairing + "'");
    }
  } else if (!base.empty()) {
    throw ConfigError(family_id + ": base families only apply to pair families");
  }
}

std::vector<FamilyMember> generate_family(const FamilySpec& spec) {
  spec.validate();
  std::vector<FamilyMember> out;
  if (!is_pair_family(spec.family_id)) {
    out = singles(spec);
  } else {
    std::vector<FamilyMember> laws;
    for (const auto& b : spec.base) {
      for (auto& m : singles(b)) laws.push_back(std::move(m));
    }
    for (const auto& [i, j] : pair_indices(laws.size(), spec.pairing)) {
      const std::string d = "(" + laws[i].descriptor + ", " + laws[j].descriptor + ")";
      if (spec.family_id == "convolved_pair") {
        out.push_back({d, laws[i].x, laws[j].x, std::nullopt, false});
      } else if (spec.pairing == "self") {
        for (double s : spec.sigma_grid) {
          out.push_back({"(" + laws[i].descriptor + ", smoothed sigma=" + fmt(s) + ")", laws[i].x,
                         regularize(laws[i].x, {s, true}), s, false});
        }
      } else {
        for (double s : spec.sigma_grid) {
          out.push_back({d + " sigma=" + fmt(s), laws[i].x, laws[j].x, s, true});
        }
      }
    }
  }
  if (out.empty()) throw ConfigError(spec.family_id + ": family is empty");
  return out;
}

std::size_t SuiteReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      reports.begin(), reports.end(), [](const BoundCheckReport& r) { return !r.error.empty(); }));
}

std::vector<BoundInputs> scalar_inputs(const std::string& id) {
  std::vector<BoundInputs> out;
  if (id == "LEMMA43") {
    for (int i = 0; i <= 9; ++i) {
      const double s = 0.1 * i;
      const double top = std::min(std::sqrt(s * s + 1), 1.5);
      for (int j = 1;; ++j) {
        const double v = s + 0.05 * j;
        if (v > top + 1e-12) break;
        out.push_back({std::nullopt, std::nullopt, {{"sigma", s}, {"v", v}},
                       "sigma=" + fmt(s) + " v=" + fmt(v)});
      }
    }
  } else if (id == "NORMAL_SHIFT_K") {
    for (double a : {-2.0, -0.5, 0.1, 1.0}) {
      for (double s : {0.25, 0.5, 1.0}) {
        out.push_back({std::nullopt, std::nullopt, {{"a", a}, {"sigma", s}},
                       "a=" + fmt(a) + " sigma=" + fmt(s)});
      }
    }
  }
  return out;
}

SuiteReport run_suite(const std::vector<std::string>& bounds, const std::vector<FamilySpec>& families,
                      const Tolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  tol.validate();
  if (families.empty()) throw ConfigError("suite has no families");
  for (const auto& id : bounds) find_bound(id);
  std::vector<std::vector<FamilyMember>> members;
  for (const auto& f : families) members.push_back(generate_family(f));

  SuiteReport rep;
  rep.bounds = bounds;
  rep.families = families;
  rep.tolerances = tol;
  rep.version = ENTSTAB_VERSION;
  SmoothCache cache;
  for (const auto& id : bounds) {
    const BoundSpec& s = find_bound(id);
    if (!takes(s, "X")) {
      for (const auto& in : scalar_inputs(id)) rep.reports.push_back(evaluate_recorded(id, in, tol));
      continue;
    }
    for (std::size_t f = 0; f < families.size(); ++f) {
      for (const auto& in : combinations(s, families[f], members[f], cache)) {
        rep.reports.push_back(evaluate_recorded(id, in, tol));
      }
    }
  }
  sort_reports(rep.reports);
  for (const auto& r : rep.reports) {
    if (r.skipped || !r.error.empty()) continue;
    if (r.constant_mode) {
      auto [it, fresh] = rep.empirical_constants.emplace(r.bound_id, r.ratio);
      if (!fresh) it->second = std::max(it->second, r.ratio);
    }
    if (r.satisfied && !*r.satisfied) rep.violations.push_back(r);
  }
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SuiteReport run_suite(const std::vector<std::string>& bounds, const FamilySpec& family,
                      const Tolerances& tol) {
  return run_suite(bounds, std::vector<FamilySpec>{family}, tol);
}

ConstantEstimate estimate_constant(const std::string& id, const std::vector<FamilySpec>& families,
                                   int levels, const Tolerances& tol) {
  const BoundSpec& s = find_bound(id);
  if (!s.constant_mode) throw CatalogueError(id + " is not a constant-mode entry");
  if (levels < 2) throw ConfigError("estimate: need at least 2 refinement levels");
  if (families.empty()) throw ConfigError("estimate: no families");
  std::vector<BoundInputs> inputs;
  for (const auto& f : families) {
    const auto m = generate_family(f);
    SmoothCache cache;
    for (auto& in : combinations(s, f, m, cache)) inputs.push_back(std::move(in));
  }
  if (inputs.size() < 3) throw ConfigError("estimate: family too small (< 3 members)");

  ConstantEstimate est;
  est.bound_id = id;
  for (int level = 0; level < levels; ++level) {
    const Tolerances t = tol.refined(level);
    double sup = 0.0;
    std::size_t evaluated = 0;
    for (const auto& in : inputs) {
      const auto r = evaluate_recorded(id, in, t);
      if (r.skipped || !r.error.empty()) continue;
      ++evaluated;
      sup = std::max(sup, r.ratio);
      est.rows.push_back({id, in.descriptor, r.ratio, level});
    }
    if (evaluated < 3) {
      throw ConfigError("estimate: fewer than 3 inputs meet the requirements of " + id);
    }
    est.per_level.push_back(sup);
  }
  const double last = est.per_level.back();
  const double prev = est.per_level[est.per_level.size() - 2];
  est.empirical_c = last;
  est.stability = last == prev ? 0.0 : std::abs(last - prev) / std::max(std::abs(last), std::abs(prev));
  return est;
}

ConstantEstimate estimate_constant(const std::string& id, const FamilySpec& family, int levels,
                                   const Tolerances& tol) {
  return estimate_constant(id, std::vector<FamilySpec>{family}, levels, tol);
}

}  // namespace entstab
