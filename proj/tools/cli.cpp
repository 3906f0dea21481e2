#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stable_msu/acceptance.hpp"
#include "stable_msu/density.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/factorizations.hpp"
#include "stable_msu/msu.hpp"
#include "stable_msu/specfun.hpp"
#include "stable_msu/verify.hpp"

namespace stable_msu::cli {
namespace {

using nlohmann::json;

/// Invalid flag values found after parsing; reported like a parse error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

Alpha parse_alpha(const std::string& text) {
  try {
    return Alpha::parse(text);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--alpha: ") + e.what());
  }
}

int resolve_threads(int flag) {
  if (flag >= 0) return flag;
  const char* env = std::getenv("STABLE_MSU_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  int v = 0;
  const std::string s(env);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || v < 0) {
    throw UsageError("STABLE_MSU_THREADS must be a nonnegative integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t resolve_seed(std::uint64_t seed, bool entropy) {
  if (!entropy) return seed;
  return RandomSource::from_entropy().next_u64();
}

json report_json(const IdentityReport& r) {
  return {{"name", r.name},
          {"pass", r.pass},
          {"discrepancy", num_or_null(r.discrepancy)},
          {"threshold", r.threshold},
          {"details", r.details}};
}

std::vector<double> grid(double lo, double hi, int points, bool log_spaced) {
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    x[i] = log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  return x;
}

void check_range(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi >= lo && std::isfinite(hi))) throw UsageError("need 0 < --x-min <= --x-max");
  if (points < 1) throw UsageError("--points must be positive");
}

struct DensityArgs {
  std::string alpha;
  double x_min = 0.1, x_max = 10.0;
  int points = 100;
  std::string spacing = "log";
  int precision_bits = 53;
  std::string format = "csv";
};

int cmd_density(const DensityArgs& a, std::ostream& out) {
  const Alpha alpha = parse_alpha(a.alpha);
  check_range(a.x_min, a.x_max, a.points);
  SeriesConfig cfg;
  cfg.precision_bits = a.precision_bits;
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const StableSeries series(alpha, cfg);
  const std::vector<double> xs = grid(a.x_min, a.x_max, a.points, a.spacing == "log");
  json rows = json::array();
  if (a.format == "csv") out << "x,f,f_err,fp,fpp,reliable\n";
  for (double x : xs) {
    const DensityJet j = series.jet(x);
    const bool ok = j.f.reliable && j.fp.reliable && j.fpp.reliable;
    if (a.format == "csv") {
      out << num(x) << ',' << num(j.f.value) << ',' << num(j.f.abs_error_estimate) << ',' << num(j.fp.value) << ','
          << num(j.fpp.value) << ',' << (ok ? 1 : 0) << '\n';
    } else {
      rows.push_back({{"x", x},
                      {"f", num_or_null(j.f.value)},
                      {"f_err", num_or_null(j.f.abs_error_estimate)},
                      {"fp", num_or_null(j.fp.value)},
                      {"fpp", num_or_null(j.fpp.value)},
                      {"reliable", ok}});
    }
  }
  if (a.format == "json") {
    write_json(out, {{"schema", 1}, {"alpha", alpha.value()}, {"precision_bits", a.precision_bits}, {"points", rows}});
  }
  return 0;
}

struct ScanArgs {
  std::string alpha;
  double x_min = 0.5, x_max = 50.0;
  int points = 400;
  int threads = -1;
  std::string format = "json";
  std::string summary_path;
};

json scan_summary(const MsuReport& r) {
  return {{"schema", 1},
          {"alpha", r.alpha.value()},
          {"classification", std::string(to_string(r.classification))},
          {"witness", r.witness ? json(*r.witness) : json(nullptr)},
          {"mode", r.mode_estimate},
          {"mode_at_boundary", r.mode_at_boundary},
          {"inflection", r.inflection_estimate ? json(*r.inflection_estimate) : json(nullptr)},
          {"residual_nonpositive_to_inflection", r.residual_nonpositive_to_inflection},
          {"unreliable_fraction", r.unreliable_fraction}};
}

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  const Alpha alpha = parse_alpha(a.alpha);
  check_range(a.x_min, a.x_max, a.points);
  const int threads = resolve_threads(a.threads);
  const MsuReport r = msu_scan(alpha, a.x_min, a.x_max, a.points, {}, threads);
  json summary = scan_summary(r);
  if (a.format == "csv") {
    out << "x,g,g_err,g_over_f2,reliable\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      const EvalResult& g = r.residuals[i];
      out << num(r.grid[i]) << ',' << num(g.value) << ',' << num(g.abs_error_estimate) << ','
          << num(r.normalized_residuals[i]) << ',' << (g.reliable ? 1 : 0) << '\n';
    }
    if (!a.summary_path.empty()) {
      std::ofstream f(a.summary_path);
      if (!f) throw std::runtime_error("cannot write summary to '" + a.summary_path + "'");
      write_json(f, summary);
    }
    return 0;
  }
  json rows = json::array();
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const EvalResult& g = r.residuals[i];
    rows.push_back({{"x", r.grid[i]},
                    {"g", num_or_null(g.value)},
                    {"g_err", num_or_null(g.abs_error_estimate)},
                    {"g_over_f2", num_or_null(r.normalized_residuals[i])},
                    {"reliable", g.reliable}});
  }
  summary["points"] = std::move(rows);
  write_json(out, summary);
  return 0;
}

struct SampleArgs {
  std::string alpha;
  long long count = 10;
  std::uint64_t seed = RandomSource::kDefaultSeed;
  bool entropy = false;
  bool log_scale = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const Alpha alpha = parse_alpha(a.alpha);
  if (a.count < 0) throw UsageError("--count must be nonnegative");
  RandomSource rng(resolve_seed(a.seed, a.entropy));
  for (long long i = 0; i < a.count; ++i) {
    const double v = a.log_scale ? sample_log_stable(alpha, rng) : sample_stable(alpha, rng);
    out << num(v) << '\n';
  }
  return 0;
}

struct SpecialArgs {
  std::string function;
  std::vector<double> xs;
  double nu = 0.0, a = 1.0 / 6.0, b = 1.0, c = 1.0, lambda = 1.0;
  int shift = 0;
  std::string format = "csv";
};

SpecEval eval_special(const SpecialArgs& s, double x) {
  const std::string& f = s.function;
  if (f == "gamma") {
    const LogGammaEval l = log_gamma(x);
    const double v = l.sign * std::exp(l.value);
    return SpecEval{v, std::abs(v) * l.abs_error_estimate, l.method};
  }
  if (f == "lgamma") return log_gamma(x);
  if (f == "bessel-k") return bessel_k(s.nu, x);
  if (f == "psi") return psi_chf(s.a, s.c, x);
  if (f == "u-lambda") return u_lambda(s.lambda, x);
  if (f == "whittaker-w") return whittaker_w_stable(x);
  if (f == "whitt-margin") return whitt_margin(x);
  return lemma1_g(s.a, s.b, s.c, s.shift, x);
}

int cmd_special(const SpecialArgs& s, std::ostream& out) {
  if (s.xs.empty()) throw UsageError("--x is required");
  json rows = json::array();
  if (s.format == "csv") out << "function,x,value,abs_error,method\n";
  for (double x : s.xs) {
    const SpecEval v = eval_special(s, x);
    if (s.format == "csv") {
      out << s.function << ',' << num(x) << ',' << num(v.value) << ',' << num(v.abs_error_estimate) << ','
          << to_string(v.method) << '\n';
    } else {
      rows.push_back({{"x", x},
                      {"value", num_or_null(v.value)},
                      {"abs_error", num_or_null(v.abs_error_estimate)},
                      {"method", std::string(to_string(v.method))}});
    }
  }
  if (s.format == "json") write_json(out, {{"schema", 1}, {"function", s.function}, {"values", rows}});
  return 0;
}

struct FactorizationArgs {
  int p = 2, n = 5;
  std::vector<double> s_grid{0.1, 0.5, 1.0, 2.0, 5.0};
  double tolerance = 1e-10;
  long long mc_samples = 0;
  std::uint64_t seed = RandomSource::kDefaultSeed;
  bool entropy = false;
};

int cmd_factorization(const FactorizationArgs& a, std::ostream& out) {
  if (a.mc_samples < 0) throw UsageError("--mc-samples must be nonnegative");
  FactorList fl;
  try {
    fl = lemma2_product(a.p, a.n);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  const MellinProfile m = mellin_product(fl);
  json factors = json::array();
  for (const Factor& f : fl.factors) {
    if (f.kind == Factor::Kind::beta) {
      factors.push_back({{"kind", "beta"}, {"a", f.a}, {"b", f.b}});
    } else {
      factors.push_back({{"kind", "gamma"}, {"shape", f.a}});
    }
  }
  json rows = json::array();
  double worst = 0.0;
  for (double s : a.s_grid) {
    if (!(s > m.lower)) throw UsageError("--s-grid value " + num(s) + " outside the Mellin strip");
    const double log_product = m.log_at(s);
    const double log_target = log_gamma(1.0 + a.n * s).value - log_gamma(1.0 + a.p * s).value;
    const double rel = std::abs(std::expm1(log_product - log_target));
    worst = std::max(worst, rel);
    rows.push_back({{"s", s},
                    {"product_moment", std::exp(log_product)},
                    {"gamma_ratio", std::exp(log_target)},
                    {"rel_discrepancy", rel}});
  }
  bool pass = worst < a.tolerance;
  json doc = {{"schema", 1},
              {"p", a.p},
              {"n", a.n},
              {"represents", fl.represents},
              {"scale", fl.scale},
              {"factors", factors},
              {"mellin", rows},
              {"max_rel_discrepancy", worst},
              {"tolerance", a.tolerance}};
  if (a.mc_samples > 0) {
    const IdentityReport r =
        check_factorization_mc(a.p, a.n, static_cast<std::size_t>(a.mc_samples), resolve_seed(a.seed, a.entropy));
    doc["monte_carlo"] = report_json(r);
    pass = pass && r.pass;
  }
  doc["pass"] = pass;
  write_json(out, doc);
  return pass ? 0 : 1;
}

struct LaplaceArgs {
  std::string alpha;
  std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 4.0};
  double threshold = 1e-5;
};

int cmd_laplace(const LaplaceArgs& a, std::ostream& out) {
  const Alpha alpha = parse_alpha(a.alpha);
  for (double l : a.lambdas) {
    if (!(l >= 0.0)) throw UsageError("--lambdas must be nonnegative");
  }
  IdentityReport r = check_laplace(alpha, a.lambdas, a.threshold);
  json doc = report_json(r);
  doc["schema"] = 1;
  doc["alpha"] = alpha.value();
  write_json(out, doc);
  return r.pass ? 0 : 1;
}

struct IdentitiesArgs {
  std::vector<std::string> alphas{"0.4", "0.5", "0.8"};
  long long samples = 1000000;
  std::uint64_t seed = RandomSource::kDefaultSeed;
  bool entropy = false;
  double ks_coefficient = kKsCoefficient1pct;
  std::string which = "all";
};

int cmd_identities(const IdentitiesArgs& a, std::ostream& out) {
  std::vector<Alpha> alphas;
  for (const std::string& s : a.alphas) alphas.push_back(parse_alpha(s));
  if (a.samples < 10000) throw UsageError("--samples must be at least 10000");
  const std::uint64_t seed = resolve_seed(a.seed, a.entropy);
  const auto n = static_cast<std::size_t>(a.samples);
  json checks = json::array();
  bool pass = true;
  std::uint64_t stream = 0;
  for (const Alpha& alpha : alphas) {
    if (a.which == "all" || a.which == "diff") {
      IdentityReport r = check_diff_identity(alpha, n, derive_seed(seed, stream++), a.ks_coefficient);
      pass = pass && r.pass;
      json j = report_json(r);
      j["alpha"] = alpha.value();
      checks.push_back(std::move(j));
    }
    if (a.which == "all" || a.which == "sampler") {
      IdentityReport r = check_sampler_ks(alpha, n, derive_seed(seed, stream++), a.ks_coefficient);
      pass = pass && r.pass;
      json j = report_json(r);
      j["alpha"] = alpha.value();
      checks.push_back(std::move(j));
    }
  }
  write_json(out, {{"schema", 1}, {"seed", seed}, {"samples", a.samples}, {"passed", pass}, {"checks", checks}});
  return pass ? 0 : 1;
}

struct AcceptanceArgs {
  std::string config;
  std::vector<std::string> only;
};

int cmd_acceptance(const AcceptanceArgs& a, std::ostream& out) {
  json config;
  try {
    config = load_config(a.config);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (!a.only.empty() && config.contains("checks")) {
    json kept = json::array();
    for (const json& c : config.at("checks")) {
      if (std::find(a.only.begin(), a.only.end(), c.value("name", "")) != a.only.end()) kept.push_back(c);
    }
    config["checks"] = std::move(kept);
  }
  json summary;
  try {
    summary = run_acceptance(config);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  write_json(out, summary);
  return summary.at("passed").get<bool>() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive stable laws: densities, log-concavity scans, samplers and identity checks", "stable_msu"};
  app.require_subcommand(1);
  app.fallthrough(false);

  const auto seed_help = "Random seed (default " + std::to_string(RandomSource::kDefaultSeed) + ")";
  const auto threads_help = std::string("Worker threads, 0 = all cores (default: $STABLE_MSU_THREADS, else 0)");

  DensityArgs density;
  auto* d = app.add_subcommand("density", "Density with first and second derivative on a grid.\n"
                                          "CSV columns: x,f,f_err,fp,fpp,reliable");
  d->add_option("--alpha", density.alpha, "Stability index in (0,1), decimal or p/n")->required();
  d->add_option("--x-min", density.x_min, "Lower grid end")->capture_default_str();
  d->add_option("--x-max", density.x_max, "Upper grid end")->capture_default_str();
  d->add_option("--points", density.points, "Grid size")->capture_default_str();
  d->add_option("--spacing", density.spacing, "Grid spacing")
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  d->add_option("--precision-bits", density.precision_bits, "Working precision of the series (53 = double)")
      ->capture_default_str();
  d->add_option("--format", density.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  ScanArgs scan;
  auto* s = app.add_subcommand("scan-msu", "Scan the log-concavity residual g for sign changes.\n"
                                           "JSON: alpha, classification, witness, mode, inflection, points.\n"
                                           "CSV columns: x,g,g_err,g_over_f2,reliable");
  s->add_option("--alpha", scan.alpha, "Stability index in (0,1), decimal or p/n")->required();
  s->add_option("--x-min", scan.x_min, "Lower grid end")->capture_default_str();
  s->add_option("--x-max", scan.x_max, "Upper grid end")->capture_default_str();
  s->add_option("--points", scan.points, "Log-spaced grid size")->capture_default_str();
  s->add_option("--threads", scan.threads, threads_help);
  s->add_option("--format", scan.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  s->add_option("--summary", scan.summary_path, "With --format csv, also write the JSON summary to this file");

  SampleArgs sample;
  auto* sa = app.add_subcommand("sample", "Exact draws of Z_alpha, one value per line");
  sa->add_option("--alpha", sample.alpha, "Stability index in (0,1), decimal or p/n")->required();
  sa->add_option("--count", sample.count, "Number of draws")->capture_default_str();
  sa->add_option("--seed", sample.seed, seed_help);
  sa->add_flag("--entropy", sample.entropy, "Seed from std::random_device instead of --seed");
  sa->add_flag("--log", sample.log_scale, "Print log Z instead of Z");

  SpecialArgs special;
  auto* sp = app.add_subcommand("special", "Special functions.\nCSV columns: function,x,value,abs_error,method");
  sp->add_option("--function", special.function, "Function to evaluate")
      ->required()
      ->check(CLI::IsMember({"gamma", "lgamma", "bessel-k", "psi", "u-lambda", "whittaker-w", "whitt-margin", "beta-gamma-kernel"}));
  sp->add_option("--x", special.xs, "Argument(s); repeat or separate with commas")->delimiter(',')->required();
  sp->add_option("--nu", special.nu, "Order of bessel-k")->capture_default_str();
  sp->add_option("--a", special.a, "psi: a; beta-gamma-kernel: alpha")->capture_default_str();
  sp->add_option("--b", special.b, "beta-gamma-kernel: beta")->capture_default_str();
  sp->add_option("--c", special.c, "psi: c; beta-gamma-kernel: c")->capture_default_str();
  sp->add_option("--lambda", special.lambda, "u-lambda: lambda")->capture_default_str();
  sp->add_option("--shift", special.shift, "beta-gamma-kernel: shift in {-1,0,1}")->capture_default_str();
  sp->add_option("--format", special.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  FactorizationArgs fact;
  auto* f = app.add_subcommand("verify-factorization",
                               "Mellin check of the Beta/Gamma product for Z_{p/n}^{-p}; JSON report");
  f->add_option("--p", fact.p, "p >= 2")->capture_default_str();
  f->add_option("--n", fact.n, "n > 2p")->capture_default_str();
  f->add_option("--s-grid", fact.s_grid, "Comma-separated Mellin arguments")->delimiter(',')->capture_default_str();
  f->add_option("--tolerance", fact.tolerance, "Pass threshold on the relative discrepancy")->capture_default_str();
  f->add_option("--mc-samples", fact.mc_samples, "Also run a two-sample KS check with this many draws")
      ->capture_default_str();
  f->add_option("--seed", fact.seed, seed_help);
  f->add_flag("--entropy", fact.entropy, "Seed from std::random_device instead of --seed");

  LaplaceArgs laplace;
  auto* l = app.add_subcommand("check-laplace", "Quadrature check of int e^{-lambda x} f(x) dx = exp(-lambda^alpha)");
  l->add_option("--alpha", laplace.alpha, "Stability index in (0,1), decimal or p/n")->required();
  l->add_option("--lambdas", laplace.lambdas, "Comma-separated lambda values")->delimiter(',')->capture_default_str();
  l->add_option("--threshold", laplace.threshold, "Pass threshold")->capture_default_str();

  IdentitiesArgs ident;
  auto* id = app.add_subcommand("check-identities",
                                "Monte Carlo checks: log-difference law (diff) and sampler vs series CDF (sampler)");
  id->add_option("--alpha", ident.alphas, "Stability indices")->delimiter(',')->capture_default_str();
  id->add_option("--samples", ident.samples, "Draws per check (>= 10000)")->capture_default_str();
  id->add_option("--seed", ident.seed, seed_help);
  id->add_flag("--entropy", ident.entropy, "Seed from std::random_device instead of --seed");
  id->add_option("--ks-coefficient", ident.ks_coefficient, "Asymptotic KS critical coefficient")->capture_default_str();
  id->add_option("--which", ident.which, "Checks to run")
      ->check(CLI::IsMember({"all", "diff", "sampler"}))
      ->capture_default_str();

  AcceptanceArgs acc;
  auto* ac = app.add_subcommand("acceptance", "Run a JSON acceptance config; JSON summary to stdout");
  ac->add_option("--config", acc.config, "Config file")->required();
  ac->add_option("--only", acc.only, "Run only the named checks (repeatable)");

  auto usage = [&](const std::string& message) {
    const CLI::App* shown = &app;
    for (const CLI::App* sub : app.get_subcommands()) shown = sub;
    err << "error: " << message << "\n\n" << shown->help();
    return 2;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  try {
    if (d->parsed()) return cmd_density(density, out);
    if (s->parsed()) return cmd_scan(scan, out);
    if (sa->parsed()) return cmd_sample(sample, out);
    if (sp->parsed()) return cmd_special(special, out);
    if (f->parsed()) return cmd_factorization(fact, out);
    if (l->parsed()) return cmd_laplace(laplace, out);
    if (id->parsed()) return cmd_identities(ident, out);
    if (ac->parsed()) return cmd_acceptance(acc, out);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return usage("no subcommand given");
}

}  // namespace stable_msu::cli
