#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entstab/distribution.hpp"
#include "entstab/numerics.hpp"

namespace entstab {

/// Upper: the statement reads lhs <= rhs. Lower: lhs >= rhs.
enum class Direction { upper, lower };

const char* to_string(Direction d);

/// One catalogue entry.
struct BoundSpec {
  std::string id;
  /// The inequality in plain notation, with C = 1 for constant-mode entries.
  std::string statement;
  /// Requirement strings; PreconditionError::requirement() is one of these.
  std::vector<std::string> requirements;
  /// True when the statement carries an unspecified absolute constant; the
  /// report then gives the ratio (the smallest admissible constant) rather
  /// than a verdict.
  bool constant_mode = false;
  Direction direction = Direction::upper;
  /// Named inputs: any of "X", "Y" (laws) and "T", "sigma", "v", "a", "B".
  std::vector<std::string> inputs;
  /// How inputs that violate a moment requirement are handled: "none",
  /// "center", "center+rescale", "median-shift" (recorded in reports).
  std::string normalization = "none";
};

const std::vector<BoundSpec>& catalogue();
/// Throws CatalogueError for unknown ids.
const BoundSpec& find_bound(const std::string& id);
std::vector<std::string> constant_mode_ids();

struct BoundInputs {
  std::optional<Distribution> x;
  std::optional<Distribution> y;
  std::map<std::string, double> scalars;
  std::string descriptor;
};

/// An explicit-constant comparison inside a larger report.
struct SubCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;

  bool operator==(const SubCheck&) const = default;
};

struct BoundCheckReport {
  std::string bound_id;
  std::string input_descriptor;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Constant-mode: smallest constant C making the statement hold for this
  /// input. Explicit: lhs / rhs (for lower bounds rhs / lhs).
  double ratio = 0.0;
  /// Present for explicit entries and for constant-mode entries that carry
  /// explicit sub-checks.
  std::optional<bool> satisfied;
  double err_budget = 0.0;
  bool constant_mode = false;
  Direction direction = Direction::upper;
  std::vector<SubCheck> sub_checks;
  /// Normalizations applied and other remarks, in evaluation order.
  std::vector<std::string> notes;
  /// Set when an input misses a requirement; skip_reason is that requirement.
  bool skipped = false;
  std::string skip_reason;
  /// Numerical failure while evaluating (the numbers above are then unset).
  std::string error;

  bool operator==(const BoundCheckReport&) const = default;
};

/// Evaluates one catalogue entry. Throws CatalogueError for unknown ids and
/// PreconditionError when the inputs do not meet a requirement.
BoundCheckReport evaluate_bound(const std::string& id, const BoundInputs& inputs,
                                const Tolerances& tol = {});

/// m(sigma, eps) = min{1/sqrt(sigma), log log(e^e/eps)}.
double m_fn(double sigma, double eps);
/// N(eps) = 1 + sqrt(2 log(1/eps)).
double big_n(double eps);
/// R(t) = sqrt(t log(2/t)) on (0, 2]; R(0) = 0 by continuity.
double r_fn(double t);

/// 1/4 - Phi(-1).
double eps0();
/// exp(-1/(3 - 2 sqrt 2)).
double eps1();

/// Shift to mean zero and scale to unit variance. Throws DomainError for
/// zero variance.
Distribution standardize(const Distribution& d);

}  // namespace entstab
