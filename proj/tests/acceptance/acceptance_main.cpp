#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "stable_msu/acceptance.hpp"

namespace {

using nlohmann::json;
using stable_msu::IdentityReport;

struct Pinned {
  const char* check;
  double threshold;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::vector<Pinned> checks;
};

// Tolerances and budgets are fixed here; the config must agree with them.
const std::vector<Criterion> kCriteria = {
    {1, "closed-form agreement", 5, {{"c01a_closed_form_half_third", 1e-8}, {"c01b_closed_form_two_thirds", 1e-6}}},
    {2, "Laplace transform", 30, {{"c02_laplace", 1e-5}}},
    {3, "MSU dichotomy on [0.5, 50]", 120, {{"c03a_msu_holds", 1}, {"c03b_msu_fails", 1}}},
    {4, "tail-sign law", 1, {{"c04_tail_sign", 1}}},
    {5, "alpha = 1/2 exact residual", 1, {{"c05_half_residual", 1e-7}}},
    {6, "Beta/Gamma Mellin identity", 1, {{"c06_mellin_product_identity", 1e-10}}},
    {7, "sampler fidelity (KS 1%)", 180, {{"c07a_sampler_ks", 1.628}, {"c07b_factorization_ks", 1.628}}},
    {8, "log-difference law (KS 1%)", 120, {{"c08_diff_identity", 1.628}}},
    {9, "u_alpha log-concavity dichotomy", 5, {{"c09_ualpha_dichotomy", 1}}},
    {10, "Whittaker inequality", 10, {{"c10_whittaker_inequality", 1}}},
    {11, "Beta x Gamma inequality", 30, {{"c11_beta_gamma_inequality", 1e-10}}},
    {12, "log-density expansion cross-check", 5, {{"c12a_bb_crosscheck", 1e-5}, {"c12b_r_poly_exact", 1}}},
};

const json* find_check(const json& config, const std::string& name) {
  for (const json& c : config.at("checks")) {
    if (c.value("name", "") == name) return &c;
  }
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : STABLE_MSU_ACCEPTANCE_CONFIG;
  json config;
  try {
    config = stable_msu::load_config(path);
  } catch (const std::exception& e) {
    std::printf("FAIL cannot load %s: %s\n", path.c_str(), e.what());
    return 1;
  }
  const std::uint64_t seed = config.value("seed", std::uint64_t{20240229});

  int failed = 0;
  for (const Criterion& c : kCriteria) {
    bool pass = true;
    std::string summary;
    const auto start = std::chrono::steady_clock::now();
    for (const Pinned& p : c.checks) {
      const json* check = find_check(config, p.check);
      if (check == nullptr) {
        pass = false;
        summary += std::string(" ") + p.check + "=missing";
        continue;
      }
      if (check->value("threshold", -1.0) != p.threshold) {
        pass = false;
        summary += std::string(" ") + p.check + "=threshold-mismatch";
        continue;
      }
      const IdentityReport r = stable_msu::run_check(*check, seed);
      pass = pass && r.pass;
      char buf[160];
      std::snprintf(buf, sizeof buf, " %s=%.3g/%.3g", p.check, r.discrepancy, r.threshold);
      summary += buf;
      if (!r.pass && r.details.contains("error")) summary += "(" + r.details.at("error").get<std::string>() + ")";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < c.budget_seconds;
    pass = pass && in_budget;
    if (!pass) ++failed;
    std::printf("criterion %2d %s  %s:%s  [%.2fs of %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.title, summary.c_str(),
                seconds, c.budget_seconds, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(kCriteria.size()) - failed, kCriteria.size());
  return failed == 0 ? 0 : 1;
}
