#pragma once

// Experiment runner: rho sweeps over a policy list with replications, ratios
// against the relaxed offline optimum, invariant audits on GPA-family runs,
// and plot-ready CSV output.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ossa/advice.hpp"
#include "ossa/engine.hpp"
#include "ossa/instances.hpp"
#include "ossa/model.hpp"
#include "ossa/offline.hpp"

namespace ossa {

// Which rho the rho-aware baselines receive.
enum class RhoMode {
  kRealized,  // s / sum_i D_i of the instance being run
  kSweep,     // the grid value that set s
};

struct PolicySpec {
  std::string name;  // gpa | la-gpa | always-fill | rho-greedy | rho-coinflip | backlog | never
  double lambda = 1.0 / 3.0;  // la-gpa only
  // la-gpa prediction error: eta_target if set, else eta_factor * s.
  std::optional<double> eta_target;
  double eta_factor = 0.0;

  // Series label, e.g. "gpa" or "la-gpa(lambda=0.01,eta=10s)".
  std::string label() const;
};

// Parses a policy argument such as "gpa", "la-gpa:0.01:10s" or
// "la-gpa:0.1:250" (lambda, then eta as a multiple of s or an absolute value).
PolicySpec parse_policy_spec(const std::string& text);

struct PolicyContext {
  double rho_sweep = 0.0;  // grid value, if any
  RhoMode rho_mode = RhoMode::kRealized;
  std::uint64_t seed = 0;
  // Overrides generated predictions for la-gpa when set.
  std::optional<Predictions> predictions;
};

struct PolicyRun {
  std::unique_ptr<Policy> policy;
  std::optional<GammaVector> gamma;  // set for GPA-family policies
  std::optional<Predictions> predictions;
  std::optional<double> rho;  // what a rho-aware baseline received
};

// Throws UnknownPolicy for names outside the list above.
PolicyRun make_policy(const PolicySpec& spec, const Instance& instance,
                      const PolicyContext& context);

// s / sum_i D_i (0 when there is no demand).
double realized_rho(const Instance& instance);

struct SyntheticSource {
  SyntheticConfig config;  // rho_grid and seed are ignored
};
struct FileSource {
  std::string path;
  std::string demand_csv;  // optional t,site_id,demand merge
};
struct TaxiSource {
  std::string demand_csv;
  std::string geo_csv;
  TaxiOptions options;  // rho_grid is ignored
};
using InstanceSource = std::variant<SyntheticSource, FileSource, TaxiSource>;

struct SweepConfig {
  InstanceSource source = SyntheticSource{};
  // Supplies s = floor(rho (sum D - sum b)). A file source with an empty grid
  // keeps the supply from the file.
  std::vector<double> rho_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6,
                                  0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
  std::vector<PolicySpec> policies;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  RhoMode rho_mode = RhoMode::kRealized;
  std::size_t threads = 1;  // 0: hardware concurrency
  std::string output;       // default output directory
};

// Reads the JSON sweep configuration (see README for the schema). Relative
// paths inside the file resolve against the file's directory.
SweepConfig load_sweep_config(const std::string& path);

struct ResultRow {
  double rho = 0.0;
  std::size_t replication = 0;
  std::string policy;  // name
  std::string series;  // PolicySpec::label()
  std::uint64_t seed = 0;
  std::optional<double> policy_rho;
  std::optional<double> lambda;
  std::optional<double> eta_target;
  std::optional<double> eta_realized;
  Units supply = 0;
  Units supply_end = 0;
  double transport = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  double opt_relaxed = 0.0;
  double opt_rounded = 0.0;
  // total / opt_relaxed; empty when opt_relaxed is 0.
  std::optional<double> ratio_relaxed;
  double additive = 0.0;  // sum_i 3 p (b_i + c_i)
  bool audited = false;
  std::size_t invariant_violations = 0;
};

// Deterministic given the config: rows are sorted by (rho, policy, seed) and
// identical for any thread count.
std::vector<ResultRow> run_sweep(const SweepConfig& config);

struct SummaryRow {
  double rho = 0.0;
  std::string series;
  std::string policy;
  std::size_t count = 0;
  double mean_total = 0.0;
  double std_total = 0.0;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;
  std::size_t ratio_count = 0;
  double mean_opt = 0.0;
};

// Per (rho, series) sample mean and standard deviation (0 for one sample).
// Throws EmptyResults on an empty table.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

// results.csv, summary.csv, costs.csv, ratios_baselines.csv,
// ratios_la_gpa.csv and metadata.json under `dir`.
void write_sweep_outputs(const std::filesystem::path& dir,
                         const SweepConfig& config,
                         const std::vector<ResultRow>& rows);

}  // namespace ossa
