#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ossa/error.hpp"
#include "ossa/harness.hpp"
#include "ossa/io.hpp"

namespace ossa {
namespace {

SweepConfig small_config() {
  SweepConfig config;
  SyntheticSource source;
  source.config.n = 6;
  source.config.horizon = 80;
  config.source = source;
  config.rho_grid = {0.2, 0.8};
  config.replications = 3;
  config.base_seed = 123;
  for (const char* name : {"gpa", "always-fill", "rho-greedy", "rho-coinflip",
                           "backlog", "never"}) {
    config.policies.push_back(parse_policy_spec(name));
  }
  config.policies.push_back(parse_policy_spec("la-gpa:0.1:10s"));
  config.policies.push_back(parse_policy_spec("la-gpa:0.01:0s"));
  return config;
}

std::string results_text(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

TEST(PolicySpecTest, ParseAndLabel) {
  const PolicySpec gpa = parse_policy_spec("gpa");
  EXPECT_EQ(gpa.label(), "gpa");
  const PolicySpec relative = parse_policy_spec("la-gpa:0.01:10s");
  EXPECT_EQ(relative.lambda, 0.01);
  EXPECT_EQ(relative.eta_factor, 10.0);
  EXPECT_FALSE(relative.eta_target);
  EXPECT_EQ(relative.label(), "la-gpa(lambda=0.01,eta=10s)");
  const PolicySpec absolute = parse_policy_spec("la-gpa:0.1:250");
  EXPECT_EQ(*absolute.eta_target, 250.0);
  EXPECT_EQ(absolute.label(), "la-gpa(lambda=0.1,eta=250)");
  EXPECT_THROW(parse_policy_spec("gpa:1"), Error);
  EXPECT_THROW(parse_policy_spec("la-gpa:x"), Error);
}

TEST(MakePolicyTest, UnknownNameAndRhoModes) {
  const Instance e = fixtures::instance_e();
  PolicySpec spec;
  spec.name = "oracle";
  try {
    make_policy(spec, e, {});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kUnknownPolicy);
  }
  spec.name = "rho-greedy";
  PolicyContext context;
  context.rho_sweep = 0.9;
  EXPECT_DOUBLE_EQ(*make_policy(spec, e, context).rho, 3.0 / 5.0);
  context.rho_mode = RhoMode::kSweep;
  EXPECT_DOUBLE_EQ(*make_policy(spec, e, context).rho, 0.9);
  spec.name = "rho-coinflip";
  context.rho_sweep = 1.2;
  EXPECT_DOUBLE_EQ(*make_policy(spec, e, context).rho, 1.0);
  spec.name = "gpa";
  EXPECT_TRUE(make_policy(spec, e, context).gamma.has_value());
  spec.name = "backlog";
  EXPECT_FALSE(make_policy(spec, e, context).gamma.has_value());
}

TEST(SweepTest, SingleCellGivesOneRow) {
  SweepConfig config;
  SyntheticSource source;
  source.config.n = 3;
  source.config.horizon = 20;
  config.source = source;
  config.rho_grid = {0.5};
  config.policies = {parse_policy_spec("gpa")};
  const auto rows = run_sweep(config);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].audited);
  EXPECT_EQ(rows[0].invariant_violations, 0u);
}

TEST(SweepTest, RowsAreConsistentAndAudited) {
  const auto rows = run_sweep(small_config());
  ASSERT_EQ(rows.size(), 2u * 3u * 8u);
  for (const ResultRow& row : rows) {
    EXPECT_NEAR(row.transport + row.penalty, row.total,
                1e-9 * std::max(1.0, row.total));
    if (row.opt_relaxed > 0.0) {
      ASSERT_TRUE(row.ratio_relaxed.has_value());
      EXPECT_DOUBLE_EQ(*row.ratio_relaxed, row.total / row.opt_relaxed);
    } else {
      EXPECT_FALSE(row.ratio_relaxed.has_value());
    }
    const bool gpa_family = row.policy == "gpa" || row.policy == "la-gpa";
    EXPECT_EQ(row.audited, gpa_family);
    EXPECT_EQ(row.invariant_violations, 0u);
    if (row.policy == "la-gpa") {
      ASSERT_TRUE(row.eta_realized.has_value());
      EXPECT_NEAR(*row.eta_realized, *row.eta_target, 1e-6 * (1 + *row.eta_target));
    }
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_LE(rows[k - 1].rho, rows[k].rho);
    if (rows[k - 1].rho == rows[k].rho) {
      EXPECT_LE(rows[k - 1].policy, rows[k].policy);
    }
  }
}

TEST(SweepTest, ThreadCountDoesNotChangeResults) {
  SweepConfig config = small_config();
  config.threads = 1;
  const std::string serial = results_text(run_sweep(config));
  config.threads = 4;
  const std::string parallel = results_text(run_sweep(config));
  EXPECT_EQ(serial, parallel);
  config.base_seed = 124;
  EXPECT_NE(serial, results_text(run_sweep(config)));
}

TEST(SweepTest, ConfigErrors) {
  SweepConfig config = small_config();
  config.replications = 0;
  EXPECT_THROW(run_sweep(config), Error);
  config = small_config();
  config.policies.push_back(parse_policy_spec("mystery"));
  try {
    run_sweep(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownPolicy);
  }
  config = small_config();
  config.policies.push_back(parse_policy_spec("la-gpa:0.5:0"));
  try {
    run_sweep(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLambdaOutOfRange);
  }
}

TEST(SummarizeTest, MeansAndSampleDeviation) {
  std::vector<ResultRow> rows(3);
  for (std::size_t k = 0; k < 3; ++k) {
    rows[k].rho = 0.5;
    rows[k].policy = rows[k].series = "gpa";
    rows[k].total = 1.0 + static_cast<double>(k);
    rows[k].opt_relaxed = 1.0;
    rows[k].ratio_relaxed = rows[k].total;
  }
  ResultRow lone = rows[0];
  lone.policy = lone.series = "never";
  rows.push_back(lone);
  const auto summary = summarize(rows);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0].series, "gpa");
  EXPECT_DOUBLE_EQ(summary[0].mean_total, 2.0);
  EXPECT_DOUBLE_EQ(summary[0].std_total, 1.0);
  EXPECT_EQ(summary[0].count, 3u);
  EXPECT_EQ(summary[1].std_total, 0.0);
  EXPECT_THROW(summarize({}), Error);
}

TEST(SweepOutputTest, WritesAllPanels) {
  const auto dir = std::filesystem::temp_directory_path() / "ossa_sweep_out";
  std::filesystem::remove_all(dir);
  const SweepConfig config = small_config();
  write_sweep_outputs(dir, config, run_sweep(config));
  for (const char* name : {"results.csv", "summary.csv", "costs.csv",
                           "ratios_baselines.csv", "ratios_la_gpa.csv",
                           "metadata.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  std::ifstream in(dir / "ratios_la_gpa.csv");
  std::string header, first;
  std::getline(in, header);
  EXPECT_EQ(header, "rho,series,mean_ratio,std_ratio");
  std::filesystem::remove_all(dir);
}

TEST(SweepOutputTest, NothingWrittenOnFailure) {
  const auto dir = std::filesystem::temp_directory_path() / "ossa_sweep_fail";
  std::filesystem::remove_all(dir);
  EXPECT_THROW(write_sweep_outputs(dir, small_config(), {}), Error);
  EXPECT_FALSE(std::filesystem::exists(dir));
}

TEST(SweepConfigTest, LoadsJsonAndFileSource) {
  const auto dir = std::filesystem::temp_directory_path() / "ossa_sweep_cfg";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "e.json");
    write_instance_json(out, fixtures::instance_e());
  }
  std::ofstream(dir / "sweep.json") << R"({
    "source": {"type": "file", "path": "e.json"},
    "rho_grid": [],
    "policies": ["gpa", {"name": "la-gpa", "lambda": 0.05, "eta_target": 2}],
    "replications": 2, "base_seed": 5, "rho_mode": "sweep"})";
  const SweepConfig config = load_sweep_config((dir / "sweep.json").string());
  EXPECT_EQ(config.replications, 2u);
  EXPECT_EQ(config.rho_mode, RhoMode::kSweep);
  ASSERT_EQ(config.policies.size(), 2u);
  EXPECT_EQ(*config.policies[1].eta_target, 2.0);
  const auto rows = run_sweep(config);
  ASSERT_EQ(rows.size(), 4u);
  for (const ResultRow& row : rows) {
    EXPECT_EQ(row.supply, 3u);
    if (row.policy == "gpa") {
      EXPECT_NEAR(row.total, 0.7, 1e-12);
    }
  }

  std::ofstream(dir / "bad.json") << R"({"replications": 0})";
  EXPECT_THROW(load_sweep_config((dir / "bad.json").string()), Error);
  std::ofstream(dir / "bad.json") << R"({"rho_mode": "both"})";
  EXPECT_THROW(load_sweep_config((dir / "bad.json").string()), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace ossa
