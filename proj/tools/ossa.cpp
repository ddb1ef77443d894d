// ossa: command-line front end for the simulation library.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ossa/advice.hpp"
#include "ossa/engine.hpp"
#include "ossa/error.hpp"
#include "ossa/harness.hpp"
#include "ossa/instances.hpp"
#include "ossa/io.hpp"
#include "ossa/offline.hpp"
#include "ossa/seed.hpp"

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

// OSSA_SEED wins over any seed given on the command line.
std::uint64_t effective_seed(std::uint64_t flag_value) {
  const char* env = std::getenv("OSSA_SEED");
  if (env == nullptr || *env == '\0') return flag_value;
  std::uint64_t value = 0;
  const char* last = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ossa::Error(ossa::ErrorCode::kParameterRange,
                      std::string("OSSA_SEED='") + env +
                          "' is not an unsigned integer");
  }
  return value;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ossa::Error(ossa::ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void save(const fs::path& path, const ossa::Instance& instance) {
  auto out = open_out(path);
  ossa::write_instance_json(out, instance);
}

ossa::RhoMode parse_rho_mode(const std::string& text) {
  if (text == "realized") return ossa::RhoMode::kRealized;
  if (text == "sweep") return ossa::RhoMode::kSweep;
  throw ossa::Error(ossa::ErrorCode::kParameterRange,
                    "--rho-mode must be realized or sweep");
}

struct SimulateArgs {
  std::string instance;
  std::string demand_csv;
  std::string policy = "gpa";
  double lambda = 1.0 / 3.0;
  std::optional<double> eta_target;
  std::uint64_t advice_seed = 0;
  std::string predictions;
  std::optional<double> rho;
  std::string rho_mode = "realized";
  std::string trace;
  std::string summary;
};

int simulate(const SimulateArgs& args) {
  ossa::RawInstance raw = ossa::load_instance_json(args.instance);
  const std::vector<std::int64_t> file_ids = [&] {
    std::vector<std::int64_t> ids;
    for (const auto& site : raw.sites) ids.push_back(site.site_id);
    return ids;
  }();
  if (!args.demand_csv.empty()) ossa::merge_demand_csv(raw, args.demand_csv);
  const ossa::Instance instance = ossa::validate(raw);

  ossa::PolicySpec spec;
  spec.name = args.policy;
  spec.lambda = args.lambda;
  spec.eta_target = args.eta_target.value_or(0.0);

  ossa::PolicyContext context;
  context.rho_mode = parse_rho_mode(args.rho_mode);
  context.rho_sweep = args.rho.value_or(ossa::realized_rho(instance));
  if (args.rho) context.rho_mode = ossa::RhoMode::kSweep;
  context.seed = effective_seed(args.advice_seed);
  if (!args.predictions.empty()) {
    context.predictions =
        ossa::load_predictions_json(args.predictions, instance, file_ids);
  }

  ossa::PolicyRun made = ossa::make_policy(spec, instance, context);
  const ossa::Trace trace = ossa::run(instance, *made.policy);
  const ossa::CostBreakdown cost = ossa::cost_of(instance, trace);

  if (!args.trace.empty()) {
    auto out = open_out(args.trace);
    ossa::write_trace_csv(out, trace);
  }
  if (!args.summary.empty()) {
    auto out = open_out(args.summary);
    ossa::write_summary_csv(out, trace);
  }
  std::cout << "policy " << made.policy->name() << "\n"
            << "transport " << num(cost.transport) << "\n"
            << "penalty " << num(cost.penalty) << "\n"
            << "total " << num(cost.total) << "\n"
            << "supply_end " << trace.supply_end << "\n";
  if (made.predictions) {
    std::cout << "eta " << num(made.predictions->eta) << "\n";
  }
  return 0;
}

int opt(const std::string& path, const std::string& demand_csv,
        const std::string& out_path, bool brute) {
  ossa::RawInstance raw = ossa::load_instance_json(path);
  if (!demand_csv.empty()) ossa::merge_demand_csv(raw, demand_csv);
  const ossa::Instance instance = ossa::validate(raw);
  const ossa::OfflineSolution solution = ossa::solve_offline(instance);
  if (out_path.empty()) {
    ossa::write_offline_json(std::cout, instance, solution);
  } else {
    auto out = open_out(out_path);
    ossa::write_offline_json(out, instance, solution);
    std::cout << "cost_relaxed " << num(solution.cost_relaxed) << "\n"
              << "cost_rounded " << num(solution.cost_rounded) << "\n";
  }
  if (brute) {
    const auto result = ossa::brute_force_offline(instance);
    std::cerr << "brute_force cost_relaxed " << num(result.cost_relaxed)
              << " (" << result.candidates << " candidates)\n";
  }
  return 0;
}

void print_pair(const ossa::HardPair& pair) {
  std::cout << "opt_first " << num(pair.opt_first) << "\n"
            << "opt_second " << num(pair.opt_second) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online shared supply allocation: simulation, offline optimum, "
               "instance generators and sweeps"};
  app.require_subcommand(1);

  // simulate
  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one policy on one instance");
  simulate_cmd->add_option("--instance", sim.instance, "Instance JSON")->required();
  simulate_cmd->add_option("--demand-csv", sim.demand_csv, "t,site_id,demand rows to merge");
  simulate_cmd->add_option("--policy", sim.policy,
                           "gpa|la-gpa|always-fill|rho-greedy|rho-coinflip|backlog|never");
  simulate_cmd->add_option("--lambda", sim.lambda, "LA-GPA distrust parameter in (0, 1/3]");
  simulate_cmd->add_option("--eta-target", sim.eta_target, "LA-GPA prediction error budget");
  simulate_cmd->add_option("--advice-seed", sim.advice_seed,
                           "Seed for generated predictions and coin flips");
  simulate_cmd->add_option("--predictions", sim.predictions,
                           "Predictions JSON {s_hat, d_hat}");
  simulate_cmd->add_option("--rho", sim.rho, "rho handed to rho-aware baselines");
  simulate_cmd->add_option("--rho-mode", sim.rho_mode, "realized|sweep");
  simulate_cmd->add_option("--trace", sim.trace, "Write the per-step trace CSV");
  simulate_cmd->add_option("--summary", sim.summary, "Write the per-site summary CSV");

  // sweep
  std::string sweep_config;
  std::string sweep_out;
  std::optional<std::size_t> sweep_threads;
  std::optional<std::uint64_t> sweep_seed;
  std::string sweep_rho_mode;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a rho sweep from a JSON config");
  sweep_cmd->add_option("--config", sweep_config, "Sweep JSON")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory");
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
  sweep_cmd->add_option("--seed", sweep_seed, "Base seed");
  sweep_cmd->add_option("--rho-mode", sweep_rho_mode, "realized|sweep");

  // opt
  std::string opt_instance;
  std::string opt_demand;
  std::string opt_out;
  bool opt_brute = false;
  auto* opt_cmd = app.add_subcommand("opt", "Solve the offline optimum");
  opt_cmd->add_option("--instance", opt_instance, "Instance JSON")->required();
  opt_cmd->add_option("--demand-csv", opt_demand, "t,site_id,demand rows to merge");
  opt_cmd->add_option("--out", opt_out, "Write the solution JSON here");
  opt_cmd->add_flag("--brute-force", opt_brute, "Cross-check by enumeration");

  // gen-synthetic
  ossa::SyntheticConfig syn;
  std::string syn_out = "synthetic";
  auto* syn_cmd = app.add_subcommand("gen-synthetic", "Synthetic instance family, one file per rho");
  syn_cmd->add_option("--n", syn.n, "Sites");
  syn_cmd->add_option("--horizon", syn.horizon, "Steps");
  syn_cmd->add_option("--capacity", syn.capacity, "Shipment capacity c");
  syn_cmd->add_option("--beta-alpha", syn.beta_alpha, "Beta shape for w");
  syn_cmd->add_option("--beta-beta", syn.beta_beta, "Beta shape for w");
  syn_cmd->add_option("--bound-mean", syn.bound_mean, "Poisson mean for b");
  syn_cmd->add_option("--rho", syn.rho_grid, "rho grid");
  syn_cmd->add_option("--seed", syn.seed, "Seed");
  syn_cmd->add_option("--out", syn_out, "Output directory");

  // gen-hard
  std::string hard_out = "hard";
  auto* hard_cmd = app.add_subcommand("gen-hard", "Hard instance constructions");
  hard_cmd->require_subcommand(1);
  hard_cmd->add_option("--out", hard_out, "Output directory");

  std::size_t l1_n = 10;
  ossa::Units l1_g = 4;
  double l1_eps = 0.5;
  double l1_k = 1.0;
  std::uint64_t l1_seed = 0;
  auto* lower1_cmd = hard_cmd->add_subcommand("lower1", "Randomized two-step family");
  lower1_cmd->add_option("--n", l1_n, "Even number of sites");
  lower1_cmd->add_option("--gamma", l1_g, "b = c = gamma");
  lower1_cmd->add_option("--eps", l1_eps, "epsilon");
  lower1_cmd->add_option("--k", l1_k, "Constant k");
  lower1_cmd->add_option("--seed", l1_seed, "Seed for the second-step half");

  ossa::Units l2_s = 10;
  double l2_p = 1.0;
  auto* lower2_cmd = hard_cmd->add_subcommand("lower2", "Deterministic instance pair");
  lower2_cmd->add_option("--s", l2_s, "Supply");
  lower2_cmd->add_option("--p", l2_p, "Penalty");

  int aw_case = 1;
  ossa::Units aw_k = 10;
  double aw_p = 1.0;
  auto* weak_cmd = hard_cmd->add_subcommand("advice-weak", "Instance pair with identical advice");
  weak_cmd->add_option("--case", aw_case, "1 or 2");
  weak_cmd->add_option("--K", aw_k, "Scale K");
  weak_cmd->add_option("--p", aw_p, "Penalty");

  double par_lambda = 0.1;
  double par_eps = 0.5;
  double par_c = 1.0;
  double par_p = 1.0;
  auto* pareto_cmd = hard_cmd->add_subcommand("pareto", "Accurate and inaccurate advice pair");
  pareto_cmd->add_option("--lambda", par_lambda, "lambda");
  pareto_cmd->add_option("--eps", par_eps, "epsilon");
  pareto_cmd->add_option("--C", par_c, "Additive constant C");
  pareto_cmd->add_option("--p", par_p, "Penalty");

  // ingest-taxi
  std::string taxi_demand;
  std::string taxi_geo;
  std::string taxi_out = "taxi";
  ossa::TaxiOptions taxi;
  std::optional<std::int64_t> taxi_split;
  std::optional<std::int64_t> taxi_north;
  auto* taxi_cmd = app.add_subcommand("ingest-taxi", "Build instances from aggregated pickup CSVs");
  taxi_cmd->add_option("--demand", taxi_demand, "date,site_id,pickups")->required();
  taxi_cmd->add_option("--geo", taxi_geo, "site_id,x,y")->required();
  taxi_cmd->add_flag("--zones", taxi.zones, "Collapse to two sites split at the median y");
  taxi_cmd->add_option("--split-site", taxi_split, "Site id of the southern zone");
  taxi_cmd->add_option("--north-site", taxi_north, "Site id of the northern zone");
  taxi_cmd->add_option("--capacity", taxi.capacity, "Shipment capacity c");
  taxi_cmd->add_option("--rho", taxi.rho_grid, "rho grid");
  taxi_cmd->add_option("--out", taxi_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate_cmd) return simulate(sim);

    if (*sweep_cmd) {
      ossa::SweepConfig config = ossa::load_sweep_config(sweep_config);
      if (sweep_seed) config.base_seed = *sweep_seed;
      config.base_seed = effective_seed(config.base_seed);
      if (sweep_threads) config.threads = *sweep_threads;
      if (!sweep_rho_mode.empty()) config.rho_mode = parse_rho_mode(sweep_rho_mode);
      std::string out = sweep_out.empty() ? config.output : sweep_out;
      if (out.empty()) out = "results";
      const auto rows = ossa::run_sweep(config);
      ossa::write_sweep_outputs(out, config, rows);
      std::size_t violations = 0;
      for (const auto& row : rows) violations += row.invariant_violations;
      std::cout << rows.size() << " rows written to " << out << "\n";
      if (violations > 0) {
        std::cerr << "warning: " << violations << " invariant violations\n";
        return 3;
      }
      return 0;
    }

    if (*opt_cmd) return opt(opt_instance, opt_demand, opt_out, opt_brute);

    if (*syn_cmd) {
      syn.seed = effective_seed(syn.seed);
      const auto family = ossa::gen_synthetic(syn);
      for (std::size_t r = 0; r < family.size(); ++r) {
        const fs::path path =
            fs::path(syn_out) / ("synthetic_rho" + num(syn.rho_grid[r]) + ".json");
        save(path, family[r]);
        std::cout << path.string() << " supply " << family[r].supply() << "\n";
      }
      return 0;
    }

    if (*hard_cmd) {
      const fs::path dir(hard_out);
      if (*lower1_cmd) {
        const auto made =
            ossa::gen_lower1(l1_n, l1_g, l1_eps, l1_k, effective_seed(l1_seed));
        save(dir / "lower1.json", made.instance);
        std::cout << "opt " << num(made.opt_cost) << "\nsecond_step_sites";
        for (auto id : made.second_step_sites) std::cout << ' ' << id;
        std::cout << "\n";
      } else if (*lower2_cmd) {
        const auto pair = ossa::gen_lower2(l2_s, l2_p);
        save(dir / "lower2_first.json", pair.first);
        save(dir / "lower2_second.json", pair.second);
        print_pair(pair);
      } else if (*weak_cmd) {
        const auto pair = ossa::gen_advice_weak(aw_case, aw_k, aw_p);
        const std::string stem = "advice_weak" + std::to_string(aw_case);
        save(dir / (stem + "_first.json"), pair.first);
        save(dir / (stem + "_second.json"), pair.second);
        print_pair(pair);
      } else if (*pareto_cmd) {
        const auto made = ossa::gen_pareto(par_lambda, par_eps, par_c, par_p);
        save(dir / "pareto_accurate.json", made.accurate);
        save(dir / "pareto_inaccurate.json", made.inaccurate);
        {
          auto out = open_out(dir / "pareto_accurate_predictions.json");
          ossa::write_predictions_json(out, made.accurate, made.accurate_predictions);
        }
        {
          auto out = open_out(dir / "pareto_inaccurate_predictions.json");
          ossa::write_predictions_json(out, made.inaccurate,
                                       made.inaccurate_predictions);
        }
        std::cout << "K " << made.k << "\ntau " << num(made.tau) << "\n"
                  << "opt_accurate " << num(made.opt_accurate) << "\n"
                  << "opt_inaccurate " << num(made.opt_inaccurate) << "\n";
      }
      return 0;
    }

    if (*taxi_cmd) {
      taxi.split_site_id = taxi_split;
      taxi.north_site_id = taxi_north;
      const auto family = ossa::ingest_taxi(taxi_demand, taxi_geo, taxi);
      for (std::size_t r = 0; r < family.instances.size(); ++r) {
        const fs::path path =
            fs::path(taxi_out) / ("taxi_rho" + num(taxi.rho_grid[r]) + ".json");
        save(path, family.instances[r]);
        std::cout << path.string() << " supply " << family.instances[r].supply()
                  << "\n";
      }
      std::cout << "warehouse " << num(family.warehouse_x) << ' '
                << num(family.warehouse_y) << "\ndistance_scale "
                << num(family.distance_scale) << "\nsteps " << family.dates.size()
                << "\n";
      return 0;
    }
  } catch (const ossa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
