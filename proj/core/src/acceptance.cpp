#include "stable_msu/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "stable_msu/density.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/factorizations.hpp"
#include "stable_msu/msu.hpp"

namespace stable_msu {
namespace {

using nlohmann::json;

struct Context {
  const json& spec;
  double threshold;
  std::uint64_t seed;
};

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

long long integer(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("key '") + key + "' must be an integer");
  return v.get<long long>();
}

Alpha alpha_from(const json& v) {
  if (v.is_string()) return Alpha::parse(v.get<std::string>());
  if (v.is_number()) return Alpha(v.get<double>());
  throw ConfigError("alpha must be a number or a \"p/n\" string");
}

/// "alphas": [...] or "alpha_grid": {"denominator": d, "exclude_half": bool},
/// the latter giving k/d for k = 1 .. d-1.
std::vector<Alpha> alphas_from(const json& j) {
  std::vector<Alpha> out;
  if (j.contains("alphas")) {
    for (const json& v : require(j, "alphas")) out.push_back(alpha_from(v));
  } else if (j.contains("alpha_grid")) {
    const json& g = j.at("alpha_grid");
    const long long d = integer(g, "denominator");
    const bool skip_half = g.value("exclude_half", false);
    if (d < 2) throw ConfigError("alpha_grid.denominator must be >= 2");
    for (long long k = 1; k < d; ++k) {
      if (skip_half && 2 * k == d) continue;
      out.push_back(Alpha::rational(k, d));
    }
  } else {
    throw ConfigError("expected 'alphas' or 'alpha_grid'");
  }
  if (out.empty()) throw ConfigError("no alpha values given");
  return out;
}

std::vector<double> numbers_from(const json& j, const char* key) {
  std::vector<double> out;
  for (const json& v : require(j, key)) {
    if (!v.is_number()) throw ConfigError(std::string("entries of '") + key + "' must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw ConfigError("invalid log grid");
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) x[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return x;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

IdentityReport make(const Context& c, double discrepancy, json details) {
  IdentityReport r;
  r.discrepancy = discrepancy;
  r.threshold = c.threshold;
  r.pass = discrepancy < c.threshold;
  r.details = std::move(details);
  return r;
}

IdentityReport closed_form(const Context& c) {
  const std::vector<double> xs =
      log_grid(number(c.spec, "x_min"), number(c.spec, "x_max"), static_cast<int>(integer(c.spec, "points")));
  double worst = 0.0;
  int unreliable = 0;
  json per_alpha = json::object();
  for (const Alpha& a : alphas_from(c.spec)) {
    double w = 0.0, at = xs.front();
    for (double x : xs) {
      const EvalResult s = density_series(a, x);
      if (!s.reliable) ++unreliable;
      const double e = rel_diff(s.value, density_closed(a, x).value);
      if (e >= w) w = e, at = x;
    }
    per_alpha[a.to_string()] = {{"max_rel_error", w}, {"at_x", at}};
    worst = std::max(worst, w);
  }
  json d = {{"per_alpha", per_alpha}, {"unreliable_points", unreliable}};
  return make(c, unreliable > 0 ? std::numeric_limits<double>::infinity() : worst, std::move(d));
}

IdentityReport laplace(const Context& c) {
  const std::vector<double> lambdas = numbers_from(c.spec, "lambdas");
  double worst = 0.0;
  bool reliable = true;
  json per_alpha = json::object();
  for (const Alpha& a : alphas_from(c.spec)) {
    const IdentityReport r = check_laplace(a, lambdas, c.threshold);
    reliable = reliable && r.details.value("reliable", false);
    per_alpha[a.to_string()] = r.discrepancy;
    worst = std::max(worst, r.discrepancy);
  }
  json d = {{"per_alpha", per_alpha}, {"reliable", reliable}};
  return make(c, reliable ? worst : std::numeric_limits<double>::infinity(), std::move(d));
}

IdentityReport msu_dichotomy(const Context& c) {
  const bool expect_msu = require(c.spec, "expect_msu").get<bool>();
  const double lo = number(c.spec, "x_min"), hi = number(c.spec, "x_max");
  const int points = static_cast<int>(integer(c.spec, "points"));
  const int threads = static_cast<int>(c.spec.value("threads", 0));
  int mismatches = 0;
  json per_alpha = json::object();
  for (const Alpha& a : alphas_from(c.spec)) {
    const MsuReport r = msu_scan(a, lo, hi, points, {}, threads);
    const bool msu = r.classification == MsuClass::no_violation_found;
    if (msu != expect_msu) ++mismatches;
    json e = {{"classification", std::string(to_string(r.classification))},
              {"unreliable_fraction", r.unreliable_fraction}};
    if (r.witness) e["witness"] = *r.witness;
    per_alpha[a.to_string()] = std::move(e);
  }
  return make(c, mismatches, {{"expect_msu", expect_msu}, {"per_alpha", per_alpha}});
}

IdentityReport tail_sign(const Context& c) {
  int mismatches = 0, tested = 0;
  json wrong = json::array();
  for (const Alpha& a : alphas_from(c.spec)) {
    const TailSign s = tail_residual_sign(a);
    ++tested;
    if ((s.coefficient > 0.0) != (a.value() < 0.5)) {
      ++mismatches;
      wrong.push_back(a.to_string());
    }
  }
  return make(c, mismatches, {{"tested", tested}, {"mismatched_alphas", wrong}});
}

IdentityReport half_residual(const Context& c) {
  const Alpha half = Alpha::rational(1, 2);
  double worst = 0.0;
  json rows = json::array();
  for (double x : numbers_from(c.spec, "xs")) {
    const EvalResult g = lce_residual(half, x);
    const double f = density_closed(half, x).value;
    const double expected = -f * f / (4.0 * x);
    const double e = rel_diff(g.value, expected);
    worst = std::max(worst, g.reliable ? e : std::numeric_limits<double>::infinity());
    rows.push_back({{"x", x}, {"residual", g.value}, {"expected", expected}, {"rel_error", e}});
  }
  return make(c, worst, {{"points", rows}});
}

IdentityReport mellin_product_identity(const Context& c) {
  const std::vector<double> ss = numbers_from(c.spec, "s");
  double worst = 0.0;
  json per_pair = json::object();
  for (const json& pr : require(c.spec, "pairs")) {
    const int p = pr.at(0).get<int>(), n = pr.at(1).get<int>();
    const MellinProfile m = mellin_product(lemma2_product(p, n));
    double w = 0.0;
    for (double s : ss) {
      // E[(Z_{p/n}^{-p})^s] = Gamma(1 + n s) / Gamma(1 + p s)
      const double target = log_gamma(1.0 + n * s).value - log_gamma(1.0 + p * s).value;
      w = std::max(w, std::abs(std::expm1(m.log_at(s) - target)));
    }
    per_pair[std::to_string(p) + "," + std::to_string(n)] = w;
    worst = std::max(worst, w);
  }
  json d = {{"per_pair", per_pair}};
  if (c.spec.contains("spot")) {
    const json& sp = c.spec.at("spot");
    const int p = static_cast<int>(integer(sp, "p")), n = static_cast<int>(integer(sp, "n"));
    const double s = number(sp, "s"), expected = number(sp, "value");
    const double lhs = mellin_product(lemma2_product(p, n))(s);
    const double rhs = std::exp(log_gamma(1.0 + n * s).value - log_gamma(1.0 + p * s).value);
    const double e = std::max(rel_diff(lhs, expected), rel_diff(rhs, expected));
    d["spot"] = {{"product_side", lhs}, {"gamma_side", rhs}, {"expected", expected}, {"rel_error", e}};
    worst = std::max(worst, e);
  }
  return make(c, worst, std::move(d));
}

std::size_t sample_count(const json& j) {
  const long long n = integer(j, "samples");
  if (n < 1) throw ConfigError("'samples' must be positive");
  return static_cast<std::size_t>(n);
}

IdentityReport sampler_ks(const Context& c) {
  const std::size_t n = sample_count(c.spec);
  double worst = 0.0;
  json per_alpha = json::object();
  std::uint64_t stream = 0;
  for (const Alpha& a : alphas_from(c.spec)) {
    const IdentityReport r = check_sampler_ks(a, n, derive_seed(c.seed, stream++), c.threshold);
    per_alpha[a.to_string()] = {{"scaled_statistic", r.discrepancy}, {"details", r.details}};
    worst = std::max(worst, r.discrepancy);
  }
  return make(c, worst, {{"per_alpha", per_alpha}, {"seed", c.seed}});
}

IdentityReport factorization_ks(const Context& c) {
  const std::size_t n = sample_count(c.spec);
  double worst = 0.0;
  json per_pair = json::object();
  std::uint64_t stream = 0;
  for (const json& pr : require(c.spec, "pairs")) {
    const int p = pr.at(0).get<int>(), q = pr.at(1).get<int>();
    const IdentityReport r = check_factorization_mc(p, q, n, derive_seed(c.seed, stream++), c.threshold);
    per_pair[std::to_string(p) + "," + std::to_string(q)] = {{"scaled_statistic", r.discrepancy},
                                                              {"details", r.details}};
    worst = std::max(worst, r.discrepancy);
  }
  return make(c, worst, {{"per_pair", per_pair}, {"seed", c.seed}});
}

IdentityReport diff_identity(const Context& c) {
  const std::size_t n = sample_count(c.spec);
  double worst = 0.0;
  bool symmetric = true;
  json per_alpha = json::object();
  std::uint64_t stream = 0;
  for (const Alpha& a : alphas_from(c.spec)) {
    const IdentityReport r = check_diff_identity(a, n, derive_seed(c.seed, stream++), c.threshold);
    symmetric = symmetric && r.details.value("symmetry_pass", true);
    per_alpha[a.to_string()] = {{"scaled_statistic", r.discrepancy}, {"details", r.details}};
    worst = std::max(worst, r.discrepancy);
  }
  json d = {{"per_alpha", per_alpha}, {"symmetry_pass", symmetric}, {"seed", c.seed}};
  return make(c, symmetric ? worst : std::numeric_limits<double>::infinity(), std::move(d));
}

IdentityReport ualpha_dichotomy(const Context& c) {
  const double lo = number(c.spec, "x_min"), hi = number(c.spec, "x_max"), step = number(c.spec, "x_step");
  if (!(hi > lo && step > 0.0)) throw ConfigError("invalid x range");
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  int mismatches = 0;
  json wrong = json::array();
  for (const Alpha& a : alphas_from(c.spec)) {
    double least = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < count; ++i) least = std::min(least, ualpha_logconcavity_margin(a, lo + i * step));
    if ((least >= 0.0) != (a.value() <= 0.5)) {
      ++mismatches;
      wrong.push_back({{"alpha", a.to_string()}, {"min_margin", least}});
    }
  }
  return make(c, mismatches, {{"x_points", count}, {"mismatches", wrong}});
}

IdentityReport whittaker_inequality(const Context& c) {
  const std::vector<double> above =
      log_grid(number(c.spec, "x_min"), number(c.spec, "x_max"), static_cast<int>(integer(c.spec, "points")));
  int failures = 0;
  double least = std::numeric_limits<double>::infinity();
  for (double x : above) {
    const SpecEval m = whitt_margin(x);
    least = std::min(least, m.value);
    if (m.value < 0.0) ++failures;
  }
  const json& sc = require(c.spec, "scan");
  const auto v = whitt_violation_scan(number(sc, "x_min"), number(sc, "x_max"), static_cast<int>(integer(sc, "points")));
  json d = {{"min_margin_above", least}, {"negative_above", failures}};
  if (v) {
    d["violation"] = {{"x", v->x}, {"margin", v->margin.value}, {"error_estimate", v->margin.abs_error_estimate}};
  } else {
    d["violation"] = nullptr;
    ++failures;
  }
  return make(c, failures, std::move(d));
}

IdentityReport beta_gamma_inequality(const Context& c) {
  const std::vector<double> xs =
      log_grid(number(c.spec, "x_min"), number(c.spec, "x_max"), static_cast<int>(integer(c.spec, "points")));
  double least = std::numeric_limits<double>::infinity();
  json per_triple = json::array();
  for (const json& t : require(c.spec, "triples")) {
    const double a = t.at(0).get<double>(), b = t.at(1).get<double>(), cc = t.at(2).get<double>();
    double m = std::numeric_limits<double>::infinity(), at = xs.front();
    for (double x : xs) {
      const double v = lemma1_inequality(a, b, cc, x).value;
      if (v < m) m = v, at = x;
    }
    per_triple.push_back({{"triple", t}, {"min_value", m}, {"at_x", at}});
    least = std::min(least, m);
  }
  return make(c, std::max(0.0, -least), {{"per_triple", per_triple}, {"min_value", least}});
}

IdentityReport bb_crosscheck(const Context& c) {
  const BbExpansion e = bb_expansion(static_cast<int>(integer(c.spec, "order")));
  const double t_lo = number(c.spec, "t_min"), t_hi = number(c.spec, "t_max");
  const int points = static_cast<int>(integer(c.spec, "points"));
  if (points < 2 || !(t_hi > t_lo)) throw ConfigError("invalid t grid");
  double worst = 0.0;
  int unreliable = 0;
  json per_alpha = json::object();
  for (const Alpha& a : alphas_from(c.spec)) {
    double w = 0.0;
    for (int i = 0; i < points; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / (points - 1);
      const double x = std::exp(t);
      const EvalResult f = density_series(a, x);
      if (!f.reliable) ++unreliable;
      w = std::max(w, rel_diff(bb_log_density(a, t, e).value, f.value * x));
    }
    per_alpha[a.to_string()] = w;
    worst = std::max(worst, w);
  }
  json d = {{"per_alpha", per_alpha}, {"unreliable_points", unreliable}};
  return make(c, unreliable > 0 ? std::numeric_limits<double>::infinity() : worst, std::move(d));
}

IdentityReport r_poly_exact(const Context& c) {
  const int order = static_cast<int>(integer(c.spec, "max_j"));
  const auto r = r_polys_exact(order);
  int mismatches = 0;
  for (int j = 0; j <= order; ++j) {
    const auto& poly = r[static_cast<std::size_t>(j)];
    const BigInt at0 = poly.empty() ? BigInt(0) : poly[0];
    const BigInt slope = poly.size() > 1 ? poly[1] : BigInt(0);
    const BigInt expected = (BigInt(1) << j) - 1;
    if (at0 != 1 || slope != expected) ++mismatches;
  }
  return make(c, mismatches, {{"polynomials_checked", order + 1}});
}

using CheckFn = IdentityReport (*)(const Context&);

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> r = {
      {"bb_crosscheck", bb_crosscheck}, {"closed_form", closed_form},
      {"diff_identity", diff_identity}, {"factorization_ks", factorization_ks},
      {"half_residual", half_residual}, {"laplace", laplace},
      {"beta_gamma_inequality", beta_gamma_inequality}, {"mellin_product_identity", mellin_product_identity},
      {"msu_dichotomy", msu_dichotomy}, {"r_poly_exact", r_poly_exact},
      {"sampler_ks", sampler_ks},       {"tail_sign", tail_sign},
      {"ualpha_dichotomy", ualpha_dichotomy}, {"whittaker_inequality", whittaker_inequality},
  };
  return r;
}

json report_json(const IdentityReport& r, const json& check) {
  json out = {{"name", r.name},
              {"kind", check.value("kind", "")},
              {"pass", r.pass},
              {"discrepancy", std::isfinite(r.discrepancy) ? json(r.discrepancy) : json(nullptr)},
              {"threshold", r.threshold},
              {"details", r.details}};
  if (check.contains("criterion")) out["criterion"] = check.at("criterion");
  return out;
}

}  // namespace

const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k;
    for (const auto& [name, fn] : registry()) k.push_back(name);
    return k;
  }();
  return kinds;
}

IdentityReport run_check(const json& check, std::uint64_t default_seed) {
  if (!check.is_object()) throw ConfigError("check must be a JSON object");
  IdentityReport fail;
  fail.name = require(check, "name").get<std::string>();
  const std::string kind = require(check, "kind").get<std::string>();
  fail.discrepancy = std::numeric_limits<double>::infinity();
  try {
    const auto it = registry().find(kind);
    if (it == registry().end()) throw ConfigError("unknown check kind '" + kind + "'");
    const double threshold = number(check, "threshold");
    std::uint64_t seed = default_seed;
    if (check.contains("seed")) seed = require(check, "seed").get<std::uint64_t>();
    IdentityReport r = it->second(Context{check, threshold, seed});
    r.name = fail.name;
    return r;
  } catch (const std::exception& e) {
    fail.threshold = check.contains("threshold") && check.at("threshold").is_number()
                         ? check.at("threshold").get<double>()
                         : std::numeric_limits<double>::quiet_NaN();
    fail.details = {{"error", e.what()}};
    return fail;
  }
}

json run_acceptance(const json& config) {
  if (!config.is_object()) throw ConfigError("acceptance config must be a JSON object");
  std::uint64_t seed = RandomSource::kDefaultSeed;
  if (config.contains("seed")) seed = config.at("seed").get<std::uint64_t>();
  const json checks = config.value("checks", json::array());
  if (!checks.is_array()) throw ConfigError("'checks' must be an array");

  std::vector<json> results;
  results.reserve(checks.size());
  for (const json& check : checks) {
    json entry;
    try {
      entry = report_json(run_check(check, seed), check);
    } catch (const std::exception& e) {
      entry = {{"name", check.is_object() ? check.value("name", "") : ""},
               {"kind", check.is_object() ? check.value("kind", "") : ""},
               {"pass", false},
               {"discrepancy", nullptr},
               {"threshold", nullptr},
               {"details", {{"error", e.what()}}}};
    }
    results.push_back(std::move(entry));
  }
  std::stable_sort(results.begin(), results.end(), [](const json& a, const json& b) {
    return a.at("name").get<std::string>() < b.at("name").get<std::string>();
  });
  const auto failed = std::count_if(results.begin(), results.end(), [](const json& r) { return !r.at("pass").get<bool>(); });
  return {{"schema", 1},
          {"passed", failed == 0},
          {"n_checks", results.size()},
          {"n_failed", failed},
          {"checks", results}};
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config '" + path + "': " + e.what());
  }
}

}  // namespace stable_msu
