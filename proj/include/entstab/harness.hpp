#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entstab/bounds.hpp"
#include "entstab/distribution.hpp"
#include "entstab/numerics.hpp"

namespace entstab {

/// A parameterized family of test laws.
///
/// Single-law families: two_point (a), uniform (var), contaminated_normal
/// (w, tau), gaussian_mixture_random (draws, components). Pair families
/// (convolved_pair, regularized_pair) combine the laws of `base` according to
/// `pairing`: "adjacent" (i, i+1 cyclically), "all" (i <= j), "diagonal"
/// (i, i), or for regularized_pair also "self" (X, X_sigma).
struct FamilySpec {
  std::string family_id;
  std::map<std::string, std::vector<double>> params;
  std::uint64_t rng_seed = 0;
  std::vector<FamilySpec> base;
  std::string pairing = "adjacent";
  /// Values fed to bounds that take T or sigma. regularized_pair also uses
  /// sigma_grid as its smoothing levels.
  std::vector<double> t_grid{0.5, 1, 2, 3, 4};
  std::vector<double> sigma_grid{0.25, 0.5, 1};

  /// Throws ConfigError on unknown ids or parameters and on empty grids.
  void validate() const;

  bool operator==(const FamilySpec&) const = default;
};

struct FamilyMember {
  std::string descriptor;
  Distribution x;
  std::optional<Distribution> y;
  /// Smoothing level attached by regularized_pair.
  std::optional<double> sigma;
  /// Bounds without a sigma input receive (X_sigma, Y_sigma) instead of (X, Y).
  bool regularize_inputs = false;
};

std::vector<FamilyMember> generate_family(const FamilySpec& spec);

struct SuiteReport {
  /// Sorted by bound id, then input descriptor.
  std::vector<BoundCheckReport> reports;
  /// Constant-mode entries: sup of ratios over evaluated inputs.
  std::map<std::string, double> empirical_constants;
  /// Explicit verdicts that failed.
  std::vector<BoundCheckReport> violations;
  std::vector<std::string> bounds;
  std::vector<FamilySpec> families;
  Tolerances tolerances;
  std::string version;
  /// Seconds; kept out of serialized reports so that reruns compare equal.
  double wall_time = 0.0;

  std::size_t error_count() const;
};

/// Evaluates every bound on every matching input. Bounds taking only scalars
/// (LEMMA43, NORMAL_SHIFT_K) run once over a built-in grid. Unmet
/// requirements become skipped reports; numerical failures are recorded on
/// the report. Throws CatalogueError for unknown ids and ConfigError for
/// invalid or empty families.
SuiteReport run_suite(const std::vector<std::string>& bounds,
                      const std::vector<FamilySpec>& families, const Tolerances& tol = {});
SuiteReport run_suite(const std::vector<std::string>& bounds, const FamilySpec& family,
                      const Tolerances& tol = {});

struct ConstantRow {
  std::string bound_id;
  std::string member;
  double ratio = 0.0;
  int level = 0;

  bool operator==(const ConstantRow&) const = default;
};

struct ConstantEstimate {
  std::string bound_id;
  /// Sup ratio at the finest level.
  double empirical_c = 0.0;
  /// Relative change of the sup between the two finest levels.
  double stability = 0.0;
  std::vector<double> per_level;
  std::vector<ConstantRow> rows;
};

/// Resolution study for a constant-mode entry: level l uses tol.refined(l).
/// Throws CatalogueError for explicit entries and ConfigError when the family
/// yields fewer than 3 evaluated inputs or levels < 2.
ConstantEstimate estimate_constant(const std::string& id, const std::vector<FamilySpec>& families,
                                   int levels, const Tolerances& tol = {});
ConstantEstimate estimate_constant(const std::string& id, const FamilySpec& family, int levels,
                                   const Tolerances& tol = {});

/// Input grids used for the scalar-only entries.
std::vector<BoundInputs> scalar_inputs(const std::string& id);

}  // namespace entstab
