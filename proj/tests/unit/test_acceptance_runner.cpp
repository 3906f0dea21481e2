#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "stable_msu/acceptance.hpp"

namespace stable_msu {
namespace {

using nlohmann::json;

TEST(RunAcceptance, EmptyConfigPasses) {
  for (const json& cfg : {json::object(), json{{"checks", json::array()}}}) {
    const json s = run_acceptance(cfg);
    EXPECT_EQ(s.at("schema"), 1);
    EXPECT_TRUE(s.at("passed").get<bool>());
    EXPECT_EQ(s.at("n_checks"), 0);
    EXPECT_TRUE(s.at("checks").empty());
  }
}

TEST(RunAcceptance, WrongMsuExpectationIsReportedAsFailure) {
  const json cfg = {{"checks",
                     {{{"name", "sixty"},
                       {"kind", "msu_dichotomy"},
                       {"alphas", {0.6}},
                       {"expect_msu", true},
                       {"x_min", 0.5},
                       {"x_max", 50},
                       {"points", 400},
                       {"threshold", 1}}}}};
  const json s = run_acceptance(cfg);
  EXPECT_FALSE(s.at("passed").get<bool>());
  EXPECT_EQ(s.at("n_failed"), 1);
  EXPECT_EQ(s.at("checks")[0].at("details").at("per_alpha").at("0.6").at("classification"), "violation_found");
}

TEST(RunAcceptance, FailuresDoNotAbortAndResultsAreSorted) {
  const json cfg = {{"checks",
                     {{{"name", "z_unknown"}, {"kind", "no_such_kind"}, {"threshold", 1}},
                      {{"name", "m_missing_threshold"}, {"kind", "tail_sign"}, {"alpha_grid", {{"denominator", 10}}}},
                      {{"name", "a_tail"},
                       {"kind", "tail_sign"},
                       {"alpha_grid", {{"denominator", 10}, {"exclude_half", true}}},
                       {"threshold", 1}}}}};
  const json s = run_acceptance(cfg);
  ASSERT_EQ(s.at("n_checks"), 3);
  EXPECT_EQ(s.at("n_failed"), 2);
  EXPECT_EQ(s.at("checks")[0].at("name"), "a_tail");
  EXPECT_TRUE(s.at("checks")[0].at("pass").get<bool>());
  EXPECT_EQ(s.at("checks")[1].at("name"), "m_missing_threshold");
  EXPECT_TRUE(s.at("checks")[1].at("details").contains("error"));
  EXPECT_EQ(s.at("checks")[2].at("name"), "z_unknown");
  EXPECT_TRUE(s.at("checks")[2].at("discrepancy").is_null());
}

TEST(RunAcceptance, ThresholdComesFromConfig) {
  json check = {{"name", "mellin"},
                {"kind", "mellin_product_identity"},
                {"pairs", {{2, 5}}},
                {"s", {1.0}},
                {"threshold", 1e-10}};
  EXPECT_TRUE(run_check(check).pass);
  check["threshold"] = 0.0;
  const IdentityReport r = run_check(check);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.threshold, 0.0);
}

TEST(RunAcceptance, ByteIdenticalUnderFixedSeed) {
  const json cfg = {{"seed", 77},
                    {"checks",
                     {{{"name", "diff"}, {"kind", "diff_identity"}, {"alphas", {0.5}}, {"samples", 20000}, {"threshold", 1.628}},
                      {{"name", "ks"}, {"kind", "sampler_ks"}, {"alphas", {0.4}}, {"samples", 20000}, {"threshold", 1.628}}}}};
  EXPECT_EQ(run_acceptance(cfg).dump(), run_acceptance(cfg).dump());
  json other = cfg;
  other["seed"] = 78;
  EXPECT_NE(run_acceptance(cfg).dump(), run_acceptance(other).dump());
}

TEST(RunAcceptance, EveryKindIsRegistered) {
  EXPECT_EQ(check_kinds().size(), 14u);
  EXPECT_TRUE(std::is_sorted(check_kinds().begin(), check_kinds().end()));
}

TEST(RunAcceptance, ConfigErrors) {
  EXPECT_THROW(run_acceptance(json::array()), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/acceptance.json"), ConfigError);
  EXPECT_THROW(run_check(json{{"kind", "tail_sign"}}), ConfigError);
}

}  // namespace
}  // namespace stable_msu
