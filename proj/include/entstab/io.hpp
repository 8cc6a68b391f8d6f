#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "entstab/distribution.hpp"
#include "entstab/harness.hpp"
#include "entstab/metrics.hpp"
#include "entstab/numerics.hpp"

namespace entstab {

using Json = nlohmann::ordered_json;

/// Distribution documents:
///   {"atoms": [[x, w], ...], "grid": {"x0": .., "step": .., "values": [..]},
///    "gaussian_mixture": [[mean, sd, w], ...], "continuous_weight": ..}
/// At most one of grid / gaussian_mixture. continuous_weight defaults to the
/// mass left over by the atoms. Unknown keys throw ParseError naming the path.
Distribution distribution_from_json(const Json& j, const std::string& path = "$");
Json distribution_to_json(const Distribution& d);

/// Reads and parses a file; ParseError on malformed JSON (field "$") or
/// content, ConfigError when the file cannot be opened.
Json read_json_file(const std::string& file);
Distribution read_distribution(const std::string& file);

/// Keys: quad_abs_tol, root_tol, sup_grid_points, tail_cutoff. Missing keys
/// keep the value from `base`.
Tolerances tolerances_from_json(const Json& j, const Tolerances& base = {},
                                const std::string& path = "$.tolerances");
Json tolerances_to_json(const Tolerances& t);
/// Applies one KEY=VAL override.
void apply_tolerance_override(Tolerances& t, const std::string& assignment);

/// {"family": id, "params": {name: [..]}, "rng_seed": n, "base": [..],
///  "pairing": .., "t_grid": [..], "sigma_grid": [..]}
FamilySpec family_from_json(const Json& j, const std::string& path);
Json family_to_json(const FamilySpec& f);

/// Suite configuration file:
///   {"bounds": [ids] | "all", "families": [..], "tolerances": {..}}
/// "bounds" may be left out for estimate runs.
struct SuiteConfig {
  std::vector<std::string> bounds;
  std::vector<FamilySpec> families;
  Tolerances tolerances;
};

SuiteConfig suite_config_from_json(const Json& j);
SuiteConfig read_suite_config(const std::string& file);

/// Non-finite doubles: +inf is null, -inf and nan are the strings "-inf" and
/// "nan".
Json number_to_json(double x);
double number_from_json(const Json& j, const std::string& path);

Json report_to_json(const BoundCheckReport& r);
BoundCheckReport report_from_json(const Json& j, const std::string& path);

/// Full report with config echo and version. wall_time is left out.
Json suite_report_to_json(const SuiteReport& r);
SuiteReport suite_report_from_json(const Json& j);
std::string suite_report_csv(const SuiteReport& r);

Json metric_to_json(const MetricValue& m);
/// {"value": null, "infinite": true, ...} when D is infinite.
Json entropic_to_json(const EntropicValue& v);

Json estimate_to_json(const ConstantEstimate& e);
/// Columns: bound_id, family_member, ratio, level.
std::string estimate_csv(const ConstantEstimate& e);

/// %.12g.
std::string format_number(double x);
std::string csv_field(const std::string& s);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace entstab
