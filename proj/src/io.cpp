#include "entstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "entstab/errors.hpp"

namespace entstab {

namespace {

void strict_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw ParseError(path + "." + k, "unknown key");
  }
}

double real(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

std::vector<double> reals(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(real(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

bool boolean(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path, "expected true or false");
  return j.get<bool>();
}

std::uint64_t u64(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ParseError(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::vector<std::string> strings(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(text(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// [[a, b], ...] or [[a, b, c], ...]
std::vector<std::vector<double>> rows(const Json& j, const std::string& path, std::size_t width) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    auto r = reals(j[i], p);
    if (r.size() != width) throw ParseError(p, "expected " + std::to_string(width) + " numbers");
    out.push_back(std::move(r));
  }
  return out;
}

Json real_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? Json(nullptr) : Json("-inf");
  return x;
}

double number_from_json(const Json& j, const std::string& path) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ParseError(path, "unexpected string '" + s + "'");
  }
  return real(j, path);
}

// Distributions.

Distribution distribution_from_json(const Json& j, const std::string& path) {
  strict_keys(j, path, {"atoms", "grid", "gaussian_mixture", "continuous_weight"});
  if (j.contains("grid") && j.contains("gaussian_mixture")) {
    throw ParseError(path + ".gaussian_mixture", "at most one of grid and gaussian_mixture");
  }
  std::vector<Atom> atoms;
  double atom_mass = 0.0;
  if (j.contains("atoms")) {
    for (const auto& r : rows(j["atoms"], path + ".atoms", 2)) {
      atoms.push_back({r[0], r[1]});
      atom_mass += r[1];
    }
  }
  ContinuousPart part;
  if (j.contains("grid")) {
    const std::string p = path + ".grid";
    const Json& g = j["grid"];
    strict_keys(g, p, {"x0", "step", "values"});
    for (const char* k : {"x0", "step", "values"}) {
      if (!g.contains(k)) throw ParseError(p + "." + k, "missing");
    }
    try {
      part = GridDensity(real(g["x0"], p + ".x0"), real(g["step"], p + ".step"),
                         reals(g["values"], p + ".values"));
    } catch (const InvalidDistribution& e) {
      throw ParseError(p, e.what());
    } catch (const DomainError& e) {
      throw ParseError(p, e.what());
    }
  } else if (j.contains("gaussian_mixture")) {
    const std::string p = path + ".gaussian_mixture";
    std::vector<GaussianComponent> comps;
    for (const auto& r : rows(j["gaussian_mixture"], p, 3)) comps.push_back({r[0], r[1], r[2]});
    try {
      part = GaussianMixtureDensity(std::move(comps));
    } catch (const InvalidDistribution& e) {
      throw ParseError(p, e.what());
    } catch (const DomainError& e) {
      throw ParseError(p, e.what());
    }
  }
  const bool continuous = !std::holds_alternative<std::monostate>(part);
  double cw = continuous ? 1.0 - atom_mass : 0.0;
  if (j.contains("continuous_weight")) {
    cw = real(j["continuous_weight"], path + ".continuous_weight");
    if (!continuous && cw != 0.0) {
      throw ParseError(path + ".continuous_weight", "no grid or gaussian_mixture given");
    }
  }
  try {
    return Distribution(std::move(atoms), std::move(part), cw);
  } catch (const InvalidDistribution& e) {
    throw ParseError(path, e.what());
  } catch (const DomainError& e) {
    throw ParseError(path, e.what());
  }
}

Json distribution_to_json(const Distribution& d) {
  Json j = Json::object();
  if (!d.atoms().empty()) {
    Json a = Json::array();
    for (const auto& at : d.atoms()) a.push_back({at.location, at.weight});
    j["atoms"] = a;
  }
  if (const auto* g = d.grid()) {
    j["grid"] = {{"x0", g->x0()}, {"step", g->step()}, {"values", real_array(g->values())}};
  } else if (const auto* m = d.gaussian_mixture()) {
    Json a = Json::array();
    for (const auto& c : m->components()) a.push_back({c.mean, c.sd, c.weight});
    j["gaussian_mixture"] = a;
  }
  if (d.grid() || d.gaussian_mixture()) j["continuous_weight"] = d.continuous_weight();
  return j;
}

Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ParseError("$", std::string("malformed JSON in '") + file + "': " + e.what());
  }
}

Distribution read_distribution(const std::string& file) {
  return distribution_from_json(read_json_file(file));
}

// Tolerances.

namespace {

void set_tolerance(Tolerances& t, const std::string& key, double v, const std::string& path) {
  if (key == "quad_abs_tol") {
    t.quad_abs_tol = v;
  } else if (key == "root_tol") {
    t.root_tol = v;
  } else if (key == "tail_cutoff") {
    t.tail_cutoff = v;
  } else if (key == "sup_grid_points") {
    if (v != std::floor(v) || v < 0 || v > 1e9) throw ParseError(path, "expected an integer");
    t.sup_grid_points = static_cast<int>(v);
  } else {
    throw ParseError(path, "unknown tolerance key (quad_abs_tol, root_tol, sup_grid_points, tail_cutoff)");
  }
}

void checked(const Tolerances& t, const std::string& path) {
  try {
    t.validate();
  } catch (const DomainError& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace

Tolerances tolerances_from_json(const Json& j, const Tolerances& base, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  Tolerances t = base;
  for (const auto& [k, v] : j.items()) set_tolerance(t, k, real(v, path + "." + k), path + "." + k);
  checked(t, path);
  return t;
}

Json tolerances_to_json(const Tolerances& t) {
  return {{"quad_abs_tol", t.quad_abs_tol},
          {"root_tol", t.root_tol},
          {"sup_grid_points", t.sup_grid_points},
          {"tail_cutoff", t.tail_cutoff}};
}

void apply_tolerance_override(Tolerances& t, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string path = "--tol " + assignment;
  if (eq == std::string::npos) throw ParseError(path, "expected KEY=VAL");
  const std::string key = assignment.substr(0, eq);
  const std::string val = assignment.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(val.c_str(), &end);
  if (val.empty() || *end != '\0') throw ParseError(path, "value is not a number");
  set_tolerance(t, key, v, path);
  checked(t, path);
}

// Families and suites.

FamilySpec family_from_json(const Json& j, const std::string& path) {
  strict_keys(j, path, {"family", "params", "rng_seed", "base", "pairing", "t_grid", "sigma_grid"});
  FamilySpec f;
  if (!j.contains("family")) throw ParseError(path + ".family", "missing");
  f.family_id = text(j["family"], path + ".family");
  if (j.contains("params")) {
    const Json& p = j["params"];
    if (!p.is_object()) throw ParseError(path + ".params", "expected an object");
    for (const auto& [k, v] : p.items()) {
      f.params[k] = v.is_number() ? std::vector<double>{v.get<double>()}
                                  : reals(v, path + ".params." + k);
    }
  }
  if (j.contains("rng_seed")) f.rng_seed = u64(j["rng_seed"], path + ".rng_seed");
  if (j.contains("base")) {
    const Json& b = j["base"];
    if (!b.is_array()) throw ParseError(path + ".base", "expected an array");
    for (std::size_t i = 0; i < b.size(); ++i) {
      f.base.push_back(family_from_json(b[i], path + ".base[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("pairing")) f.pairing = text(j["pairing"], path + ".pairing");
  if (j.contains("t_grid")) f.t_grid = reals(j["t_grid"], path + ".t_grid");
  if (j.contains("sigma_grid")) f.sigma_grid = reals(j["sigma_grid"], path + ".sigma_grid");
  try {
    f.validate();
  } catch (const ConfigError& e) {
    throw ParseError(path, e.what());
  }
  return f;
}

Json family_to_json(const FamilySpec& f) {
  Json j = Json::object();
  j["family"] = f.family_id;
  Json p = Json::object();
  for (const auto& [k, v] : f.params) p[k] = real_array(v);
  j["params"] = p;
  j["rng_seed"] = f.rng_seed;
  if (!f.base.empty()) {
    Json b = Json::array();
    for (const auto& x : f.base) b.push_back(family_to_json(x));
    j["base"] = b;
    j["pairing"] = f.pairing;
  }
  j["t_grid"] = real_array(f.t_grid);
  j["sigma_grid"] = real_array(f.sigma_grid);
  return j;
}

SuiteConfig suite_config_from_json(const Json& j) {
  strict_keys(j, "$", {"bounds", "families", "tolerances"});
  SuiteConfig c;
  if (!j.contains("bounds")) {
    // estimate takes its id from the command line
  } else if (j["bounds"].is_string() && j["bounds"].get<std::string>() == "all") {
    for (const auto& s : catalogue()) c.bounds.push_back(s.id);
  } else {
    c.bounds = strings(j["bounds"], "$.bounds");
    for (std::size_t i = 0; i < c.bounds.size(); ++i) {
      try {
        find_bound(c.bounds[i]);
      } catch (const CatalogueError& e) {
        throw ParseError("$.bounds[" + std::to_string(i) + "]", e.what());
      }
    }
  }
  if (!j.contains("families")) throw ParseError("$.families", "missing");
  const Json& f = j["families"];
  if (!f.is_array() || f.empty()) throw ParseError("$.families", "expected a non-empty array");
  for (std::size_t i = 0; i < f.size(); ++i) {
    c.families.push_back(family_from_json(f[i], "$.families[" + std::to_string(i) + "]"));
  }
  if (j.contains("tolerances")) c.tolerances = tolerances_from_json(j["tolerances"]);
  return c;
}

SuiteConfig read_suite_config(const std::string& file) {
  return suite_config_from_json(read_json_file(file));
}

// Reports.

Json report_to_json(const BoundCheckReport& r) {
  Json j = Json::object();
  j["bound_id"] = r.bound_id;
  j["input"] = r.input_descriptor;
  j["direction"] = to_string(r.direction);
  j["constant_mode"] = r.constant_mode;
  j["skipped"] = r.skipped;
  j["skip_reason"] = r.skip_reason;
  j["error"] = r.error;
  j["lhs"] = number_to_json(r.lhs);
  j["rhs"] = number_to_json(r.rhs);
  j["ratio"] = number_to_json(r.ratio);
  j["satisfied"] = r.satisfied ? Json(*r.satisfied) : Json(nullptr);
  j["err_budget"] = number_to_json(r.err_budget);
  Json subs = Json::array();
  for (const auto& s : r.sub_checks) {
    subs.push_back({{"name", s.name},
                    {"lhs", number_to_json(s.lhs)},
                    {"rhs", number_to_json(s.rhs)},
                    {"satisfied", s.satisfied}});
  }
  j["sub_checks"] = subs;
  j["notes"] = r.notes;
  return j;
}

BoundCheckReport report_from_json(const Json& j, const std::string& path) {
  strict_keys(j, path, {"bound_id", "input", "direction", "constant_mode", "skipped", "skip_reason",
                        "error", "lhs", "rhs", "ratio", "satisfied", "err_budget", "sub_checks",
                        "notes"});
  auto at = [&](const char* k) -> const Json& {
    if (!j.contains(k)) throw ParseError(path + "." + k, "missing");
    return j[k];
  };
  BoundCheckReport r;
  r.bound_id = text(at("bound_id"), path + ".bound_id");
  r.input_descriptor = text(at("input"), path + ".input");
  const std::string dir = text(at("direction"), path + ".direction");
  if (dir != "upper" && dir != "lower") throw ParseError(path + ".direction", "expected upper or lower");
  r.direction = dir == "upper" ? Direction::upper : Direction::lower;
  r.constant_mode = boolean(at("constant_mode"), path + ".constant_mode");
  r.skipped = boolean(at("skipped"), path + ".skipped");
  r.skip_reason = text(at("skip_reason"), path + ".skip_reason");
  r.error = text(at("error"), path + ".error");
  r.lhs = number_from_json(at("lhs"), path + ".lhs");
  r.rhs = number_from_json(at("rhs"), path + ".rhs");
  r.ratio = number_from_json(at("ratio"), path + ".ratio");
  if (!at("satisfied").is_null()) r.satisfied = boolean(j["satisfied"], path + ".satisfied");
  r.err_budget = number_from_json(at("err_budget"), path + ".err_budget");
  const Json& subs = at("sub_checks");
  if (!subs.is_array()) throw ParseError(path + ".sub_checks", "expected an array");
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string p = path + ".sub_checks[" + std::to_string(i) + "]";
    strict_keys(subs[i], p, {"name", "lhs", "rhs", "satisfied"});
    SubCheck s;
    s.name = text(subs[i].value("name", Json()), p + ".name");
    s.lhs = number_from_json(subs[i].value("lhs", Json(0)), p + ".lhs");
    s.rhs = number_from_json(subs[i].value("rhs", Json(0)), p + ".rhs");
    s.satisfied = boolean(subs[i].value("satisfied", Json()), p + ".satisfied");
    r.sub_checks.push_back(std::move(s));
  }
  r.notes = strings(at("notes"), path + ".notes");
  return r;
}

Json suite_report_to_json(const SuiteReport& r) {
  Json j = Json::object();
  j["version"] = r.version;
  Json config = Json::object();
  config["bounds"] = r.bounds;
  Json fams = Json::array();
  for (const auto& f : r.families) fams.push_back(family_to_json(f));
  config["families"] = fams;
  config["tolerances"] = tolerances_to_json(r.tolerances);
  j["config"] = config;
  std::size_t skipped = 0;
  for (const auto& x : r.reports) skipped += x.skipped ? 1 : 0;
  j["summary"] = {{"reports", r.reports.size()},
                  {"skipped", skipped},
                  {"errors", r.error_count()},
                  {"violations", r.violations.size()}};
  Json consts = Json::object();
  for (const auto& [k, v] : r.empirical_constants) consts[k] = number_to_json(v);
  j["empirical_constants"] = consts;
  Json viol = Json::array();
  for (const auto& x : r.violations) viol.push_back(report_to_json(x));
  j["violations"] = viol;
  Json reps = Json::array();
  for (const auto& x : r.reports) reps.push_back(report_to_json(x));
  j["reports"] = reps;
  return j;
}

SuiteReport suite_report_from_json(const Json& j) {
  strict_keys(j, "$", {"version", "config", "summary", "empirical_constants", "violations", "reports"});
  for (const char* k : {"version", "config", "empirical_constants", "violations", "reports"}) {
    if (!j.contains(k)) throw ParseError(std::string("$.") + k, "missing");
  }
  SuiteReport r;
  r.version = text(j["version"], "$.version");
  const Json& c = j["config"];
  strict_keys(c, "$.config", {"bounds", "families", "tolerances"});
  r.bounds = strings(c.value("bounds", Json::array()), "$.config.bounds");
  const Json& fams = c.value("families", Json::array());
  for (std::size_t i = 0; i < fams.size(); ++i) {
    r.families.push_back(family_from_json(fams[i], "$.config.families[" + std::to_string(i) + "]"));
  }
  if (c.contains("tolerances")) r.tolerances = tolerances_from_json(c["tolerances"], {}, "$.config.tolerances");
  const Json& consts = j["empirical_constants"];
  if (!consts.is_object()) throw ParseError("$.empirical_constants", "expected an object");
  for (const auto& [k, v] : consts.items()) {
    r.empirical_constants[k] = number_from_json(v, "$.empirical_constants." + k);
  }
  for (const char* key : {"violations", "reports"}) {
    const Json& a = j[key];
    const std::string p = std::string("$.") + key;
    if (!a.is_array()) throw ParseError(p, "expected an array");
    auto& dst = std::string(key) == "reports" ? r.reports : r.violations;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dst.push_back(report_from_json(a[i], p + "[" + std::to_string(i) + "]"));
    }
  }
  return r;
}

std::string suite_report_csv(const SuiteReport& r) {
  std::string out =
      "bound_id,input,direction,constant_mode,skipped,skip_reason,error,lhs,rhs,ratio,satisfied,"
      "err_budget\n";
  for (const auto& x : r.reports) {
    out += csv_field(x.bound_id) + "," + csv_field(x.input_descriptor) + "," + to_string(x.direction) +
           "," + (x.constant_mode ? "1" : "0") + "," + (x.skipped ? "1" : "0") + "," +
           csv_field(x.skip_reason) + "," + csv_field(x.error) + ",";
    if (x.skipped || !x.error.empty()) {
      out += ",,,,\n";
      continue;
    }
    out += format_number(x.lhs) + "," + format_number(x.rhs) + "," + format_number(x.ratio) + "," +
           (x.satisfied ? (*x.satisfied ? "1" : "0") : "") + "," + format_number(x.err_budget) + "\n";
  }
  return out;
}

Json metric_to_json(const MetricValue& m) {
  return {{"value", number_to_json(m.value)},
          {"err_estimate", number_to_json(m.err_estimate)},
          {"method", m.method}};
}

Json entropic_to_json(const EntropicValue& v) {
  Json j = Json::object();
  j["value"] = v.infinite() ? Json(nullptr) : Json(v.value);
  j["infinite"] = v.infinite();
  j["err_estimate"] = number_to_json(v.err_estimate);
  j["method"] = "entropic";
  j["a"] = v.a;
  j["sigma"] = v.sigma;
  return j;
}

Json estimate_to_json(const ConstantEstimate& e) {
  Json rowsj = Json::array();
  for (const auto& r : e.rows) {
    rowsj.push_back({{"bound_id", r.bound_id},
                     {"family_member", r.member},
                     {"ratio", number_to_json(r.ratio)},
                     {"level", r.level}});
  }
  return {{"bound_id", e.bound_id},
          {"empirical_c", number_to_json(e.empirical_c)},
          {"stability", number_to_json(e.stability)},
          {"per_level", real_array(e.per_level)},
          {"rows", rowsj}};
}

std::string estimate_csv(const ConstantEstimate& e) {
  std::string out = "bound_id,family_member,ratio,level\n";
  for (const auto& r : e.rows) {
    out += csv_field(r.bound_id) + "," + csv_field(r.member) + "," + format_number(r.ratio) + "," +
           std::to_string(r.level) + "\n";
  }
  return out;
}

}  // namespace entstab
