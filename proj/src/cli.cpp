#include "entstab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "entstab/bounds.hpp"
#include "entstab/errors.hpp"
#include "entstab/harness.hpp"
#include "entstab/io.hpp"
#include "entstab/metrics.hpp"
#include "entstab/regularize.hpp"

namespace entstab {

namespace {

struct Options {
  std::string dist_a, dist_b, metric = "levy", suite, out, format = "json", bound;
  double sigma = 0.0;
  bool allow_large_sigma = false;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol;
  int levels = 2;
};

// Output sink: the --out file when given, else the caller's stream. Opened
// before any work so that an unwritable path fails fast.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw ConfigError("cannot write to '" + path + "'");
    stream_ = file_.get();
  }
  void write(const std::string& s) {
    *stream_ << s;
    stream_->flush();
    if (!*stream_) throw ConfigError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

Tolerances tolerances(const Options& o, Tolerances base = {}) {
  for (const auto& t : o.tol) apply_tolerance_override(base, t);
  return base;
}

void reseed(FamilySpec& f, std::uint64_t seed) {
  f.rng_seed = seed;
  for (auto& b : f.base) reseed(b, seed);
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

int cmd_metric(const Options& o, std::ostream& out) {
  Sink sink(o.out, out);
  const Tolerances tol = tolerances(o);
  const Distribution a = read_distribution(o.dist_a);
  if (o.metric == "entropic") {
    const auto v = entropic_distance(a, tol);
    if (o.format == "csv") {
      sink.write("metric,value,err_estimate,infinite\nentropic," + format_number(v.value) + "," +
                 format_number(v.err_estimate) + "," + (v.infinite() ? "1" : "0") + "\n");
    } else {
      sink.write(dump(entropic_to_json(v)));
    }
    return kExitOk;
  }
  if (o.dist_b.empty()) throw ConfigError("--dist-b is required for metric " + o.metric);
  const Distribution b = read_distribution(o.dist_b);
  const auto v = metric_by_name(o.metric, a, b, tol);
  if (o.format == "csv") {
    sink.write("metric,value,err_estimate,method\n" + o.metric + "," + format_number(v.value) + "," +
               format_number(v.err_estimate) + "," + csv_field(v.method) + "\n");
  } else {
    sink.write(dump(metric_to_json(v)));
  }
  return kExitOk;
}

int cmd_regularize(const Options& o, std::ostream& out) {
  Sink sink(o.out, out);
  const Tolerances tol = tolerances(o);
  const Distribution a = read_distribution(o.dist_a);
  const Distribution r = regularize(a, {o.sigma, o.allow_large_sigma});
  if (o.format == "csv") {
    // Plot-ready samples of the regularized law.
    const Window w = r.support(tol.tail_cutoff);
    const int n = 401;
    std::string s = "x,density,cdf\n";
    for (int i = 0; i < n; ++i) {
      const double x = w.lo + (w.hi - w.lo) * i / (n - 1);
      s += format_number(x) + "," + format_number(r.density(x)) + "," + format_number(r.cdf(x)) + "\n";
    }
    sink.write(s);
  } else {
    sink.write(dump(distribution_to_json(r)));
  }
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg = read_suite_config(o.suite);
  if (cfg.bounds.empty()) throw ParseError("$.bounds", "missing or empty");
  if (o.seed) {
    for (auto& f : cfg.families) reseed(f, *o.seed);
  }
  const Tolerances tol = tolerances(o, cfg.tolerances);
  Sink sink(o.out, out);
  const SuiteReport rep = run_suite(cfg.bounds, cfg.families, tol);
  sink.write(o.format == "csv" ? suite_report_csv(rep) : dump(suite_report_to_json(rep)));
  std::size_t skipped = 0;
  for (const auto& r : rep.reports) skipped += r.skipped ? 1 : 0;
  char line[160];
  std::snprintf(line, sizeof line, "%zu reports, %zu skipped, %zu errors, %zu violations (%.1f s)\n",
                rep.reports.size(), skipped, rep.error_count(), rep.violations.size(), rep.wall_time);
  err << line;
  for (const auto& v : rep.violations) err << "violation: " << v.bound_id << " on " << v.input_descriptor << "\n";
  for (const auto& r : rep.reports) {
    if (!r.error.empty()) err << "error: " << r.bound_id << " on " << r.input_descriptor << ": " << r.error << "\n";
  }
  return check_exit_code(rep);
}

int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto ids = constant_mode_ids();
  if (std::find(ids.begin(), ids.end(), o.bound) == ids.end()) {
    err << "error: '" << o.bound << "' is not a constant-mode bound; valid ids: " << join(ids) << "\n";
    return kExitUsage;
  }
  SuiteConfig cfg = read_suite_config(o.suite);
  if (o.seed) {
    for (auto& f : cfg.families) reseed(f, *o.seed);
  }
  const Tolerances tol = tolerances(o, cfg.tolerances);
  Sink sink(o.out, out);
  const auto est = estimate_constant(o.bound, cfg.families, o.levels, tol);
  sink.write(o.format == "json" ? dump(estimate_to_json(est)) : estimate_csv(est));
  err << o.bound << ": empirical C = " << format_number(est.empirical_c)
      << ", stability = " << format_number(est.stability) << "\n";
  return kExitOk;
}

}  // namespace

int check_exit_code(const SuiteReport& r) {
  return r.violations.empty() && r.error_count() == 0 ? kExitOk : kExitViolation;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probability metrics, entropic distance and stability bound checks", "entstab"};
  app.set_version_flag("--version", std::string(ENTSTAB_VERSION));
  app.require_subcommand(1);
  Options o;

  const std::vector<std::string> metrics{"levy", "kolmogorov", "w1", "tv", "entropic"};
  auto* metric = app.add_subcommand("metric", "Distance between two laws (entropic: D of --dist-a)");
  metric->add_option("--dist-a", o.dist_a, "Distribution JSON file")->required();
  metric->add_option("--dist-b", o.dist_b, "Distribution JSON file");
  metric->add_option("--metric", o.metric, "Metric name")->check(CLI::IsMember(metrics));

  auto* reg = app.add_subcommand("regularize", "Law of X + sigma Z");
  reg->add_option("--dist-a", o.dist_a, "Distribution JSON file")->required();
  reg->add_option("--sigma", o.sigma, "Smoothing level")->required();
  reg->add_flag("--allow-large-sigma", o.allow_large_sigma, "Permit sigma > 1");

  auto* check = app.add_subcommand("check", "Run a bound suite");
  check->add_option("--suite", o.suite, "Suite config JSON file")->required();

  auto* est = app.add_subcommand("estimate", "Empirical constant of a constant-mode bound");
  est->add_option("bound", o.bound, "Constant-mode bound id")->required();
  est->add_option("--suite", o.suite, "Config JSON file with the families")->required();
  est->add_option("--levels", o.levels, "Refinement levels (>= 2)")->check(CLI::Range(2, 12));

  for (auto* sub : {metric, reg, check, est}) {
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", o.tol, "Tolerance override KEY=VAL (repeatable)")->allow_extra_args(false);
    if (sub == check || sub == est) {
      sub->add_option("--seed", o.seed, "Overrides rng_seed of every family");
    }
  }
  est->get_option("--format")->default_str("csv");
  o.format.clear();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << ENTSTAB_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (o.format.empty()) o.format = *est ? "csv" : "json";

  try {
    if (*metric) return cmd_metric(o, out);
    if (*reg) return cmd_regularize(o, out);
    if (*check) return cmd_check(o, out, err);
    return cmd_estimate(o, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace entstab
