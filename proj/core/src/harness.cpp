#include "ossa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ossa/audit.hpp"
#include "ossa/error.hpp"
#include "ossa/io.hpp"
#include "ossa/policies.hpp"
#include "ossa/seed.hpp"

namespace ossa {

namespace {

// Shortest round-trip form so the CSVs are byte-stable.
std::string fmt(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

std::string fmt(const std::optional<double>& x) {
  return x ? fmt(*x) : std::string();
}

double parse_number(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kMalformedInput,
                "bad " + what + " '" + text + "' in policy spec");
  }
  return value;
}

bool is_la_gpa(const std::string& name) { return name == "la-gpa"; }

}  // namespace

std::string PolicySpec::label() const {
  if (!is_la_gpa(name)) return name;
  std::string out = "la-gpa(lambda=" + fmt(lambda) + ",eta=";
  if (eta_target) {
    out += fmt(*eta_target);
  } else {
    out += fmt(eta_factor) + "s";
  }
  return out + ")";
}

PolicySpec parse_policy_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  PolicySpec spec;
  spec.name = parts[0];
  if (parts.size() > 1 && !is_la_gpa(spec.name)) {
    throw Error(ErrorCode::kMalformedInput,
                "policy '" + spec.name + "' takes no parameters");
  }
  if (parts.size() > 3) {
    throw Error(ErrorCode::kMalformedInput, "too many fields in '" + text + "'");
  }
  if (parts.size() > 1) spec.lambda = parse_number(parts[1], "lambda");
  if (parts.size() > 2) {
    std::string eta = parts[2];
    if (!eta.empty() && eta.back() == 's') {
      eta.pop_back();
      spec.eta_factor = parse_number(eta, "eta");
    } else {
      spec.eta_target = parse_number(eta, "eta");
    }
  }
  return spec;
}

double realized_rho(const Instance& instance) {
  const Units demand = instance.total_demand();
  if (demand == 0) return 0.0;
  return static_cast<double>(instance.supply()) / static_cast<double>(demand);
}

PolicyRun make_policy(const PolicySpec& spec, const Instance& instance,
                      const PolicyContext& context) {
  PolicyRun out;
  const double rho = context.rho_mode == RhoMode::kRealized
                         ? realized_rho(instance)
                         : context.rho_sweep;
  if (spec.name == "gpa") {
    GammaVector gamma = default_gamma(instance);
    out.policy = std::make_unique<GpaPolicy>(gamma);
    out.gamma = std::move(gamma);
  } else if (is_la_gpa(spec.name)) {
    Predictions predictions;
    if (context.predictions) {
      predictions = *context.predictions;
    } else {
      const double eta =
          spec.eta_target
              ? *spec.eta_target
              : spec.eta_factor * static_cast<double>(instance.supply());
      predictions = make_predictions(instance, eta, context.seed);
    }
    auto policy = la_gpa(instance, predictions, spec.lambda);
    out.gamma = policy->gamma();
    out.policy = std::move(policy);
    out.predictions = std::move(predictions);
  } else if (spec.name == "always-fill") {
    out.policy = std::make_unique<AlwaysFillPolicy>();
  } else if (spec.name == "rho-greedy") {
    out.policy = std::make_unique<RhoGreedyPolicy>(rho);
    out.rho = rho;
  } else if (spec.name == "rho-coinflip") {
    const double q = std::min(1.0, rho);
    out.policy = std::make_unique<RhoCoinFlipPolicy>(q, context.seed);
    out.rho = q;
  } else if (spec.name == "backlog") {
    out.policy = std::make_unique<BacklogPolicy>();
  } else if (spec.name == "never") {
    out.policy = std::make_unique<NeverPolicy>();
  } else {
    throw Error(ErrorCode::kUnknownPolicy,
                "'" + spec.name +
                    "' (expected gpa, la-gpa, always-fill, rho-greedy, "
                    "rho-coinflip, backlog or never)");
  }
  return out;
}

namespace {

Instance base_instance(const InstanceSource& source, std::uint64_t seed) {
  if (const auto* syn = std::get_if<SyntheticSource>(&source)) {
    SyntheticConfig config = syn->config;
    config.rho_grid = {1.0};
    config.seed = seed;
    return gen_synthetic(config).front();
  }
  if (const auto* file = std::get_if<FileSource>(&source)) {
    RawInstance raw = load_instance_json(file->path);
    if (!file->demand_csv.empty()) merge_demand_csv(raw, file->demand_csv);
    return validate(raw);
  }
  const auto& taxi = std::get<TaxiSource>(source);
  TaxiOptions options = taxi.options;
  options.rho_grid = {1.0};
  return ingest_taxi(taxi.demand_csv, taxi.geo_csv, options).instances.front();
}

bool source_is_random(const InstanceSource& source) {
  return std::holds_alternative<SyntheticSource>(source);
}

struct Task {
  std::size_t rho_index;
  std::size_t replication;
};

std::vector<ResultRow> run_task(const SweepConfig& config, const Task& task,
                                const Instance& base, bool keep_supply) {
  const double rho_sweep =
      keep_supply ? realized_rho(base) : config.rho_grid[task.rho_index];
  const Instance instance =
      keep_supply ? base : base.with_supply(supply_for_rho(base, rho_sweep));
  const OfflineSolution offline = solve_offline(instance);
  const double additive = additive_term(instance);

  std::vector<ResultRow> rows;
  rows.reserve(config.policies.size());
  for (std::size_t k = 0; k < config.policies.size(); ++k) {
    const PolicySpec& spec = config.policies[k];
    PolicyContext context;
    context.rho_sweep = rho_sweep;
    context.rho_mode = config.rho_mode;
    context.seed = derive_seed(config.base_seed,
                               {task.rho_index, k, task.replication});
    PolicyRun made = make_policy(spec, instance, context);
    const Trace trace = run(instance, *made.policy);
    const CostBreakdown cost = cost_of(instance, trace);

    ResultRow row;
    row.rho = rho_sweep;
    row.replication = task.replication;
    row.policy = spec.name;
    row.series = spec.label();
    row.seed = context.seed;
    row.policy_rho = made.rho;
    if (is_la_gpa(spec.name)) {
      row.lambda = spec.lambda;
      row.eta_target =
          spec.eta_target
              ? *spec.eta_target
              : spec.eta_factor * static_cast<double>(instance.supply());
      row.eta_realized = made.predictions->eta;
    }
    row.supply = instance.supply();
    row.supply_end = trace.supply_end;
    row.transport = cost.transport;
    row.penalty = cost.penalty;
    row.total = cost.total;
    row.opt_relaxed = offline.cost_relaxed;
    row.opt_rounded = offline.cost_rounded;
    if (offline.cost_relaxed > 0.0) {
      row.ratio_relaxed = cost.total / offline.cost_relaxed;
    }
    row.additive = additive;
    if (made.gamma) {
      row.audited = true;
      row.invariant_violations =
          audit_invariants(trace, instance, *made.gamma, offline).size();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepConfig& config) {
  if (config.replications < 1) {
    throw Error(ErrorCode::kParameterRange, "replications must be >= 1");
  }
  if (config.policies.empty()) {
    throw Error(ErrorCode::kParameterRange, "no policies configured");
  }
  const bool keep_supply = config.rho_grid.empty() &&
                           std::holds_alternative<FileSource>(config.source);
  if (config.rho_grid.empty() && !keep_supply) {
    throw Error(ErrorCode::kParameterRange, "empty rho grid");
  }
  for (double rho : config.rho_grid) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw Error(ErrorCode::kRhoOutOfRange, "rho grid values must be > 0");
    }
  }
  // Fail on bad policy names before any work is done.
  for (const PolicySpec& spec : config.policies) {
    static const char* kNames[] = {"gpa",          "la-gpa",  "always-fill",
                                   "rho-greedy",   "rho-coinflip",
                                   "backlog",      "never"};
    if (std::find(std::begin(kNames), std::end(kNames), spec.name) ==
        std::end(kNames)) {
      throw Error(ErrorCode::kUnknownPolicy, "'" + spec.name + "'");
    }
    if (is_la_gpa(spec.name)) tau_of_lambda(spec.lambda);
  }

  // Deterministic sources are loaded once and shared by every replication.
  std::vector<Instance> bases;
  if (source_is_random(config.source)) {
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
      bases.push_back(
          base_instance(config.source, derive_seed(config.base_seed, {rep})));
    }
  } else {
    bases.push_back(base_instance(config.source, config.base_seed));
  }

  const std::size_t num_rho = keep_supply ? 1 : config.rho_grid.size();
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < num_rho; ++r) {
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
      tasks.push_back({r, rep});
    }
  }

  std::size_t threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, tasks.size());

  std::vector<std::vector<ResultRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        const Instance& base =
            bases[bases.size() == 1 ? 0 : tasks[i].replication];
        results[i] = run_task(config, tasks[i], base, keep_supply);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& chunk : results) {
    for (auto& row : chunk) rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return std::tie(a.rho, a.policy, a.series, a.seed,
                              a.replication) <
                     std::tie(b.rho, b.policy, b.series, b.seed,
                              b.replication);
            });
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyResults, "no result rows");
  struct Acc {
    std::string policy;
    std::vector<double> totals;
    std::vector<double> ratios;
    double opt_sum = 0.0;
  };
  std::map<std::pair<double, std::string>, Acc> groups;
  for (const ResultRow& row : rows) {
    Acc& acc = groups[{row.rho, row.series}];
    acc.policy = row.policy;
    acc.totals.push_back(row.total);
    if (row.ratio_relaxed) acc.ratios.push_back(*row.ratio_relaxed);
    acc.opt_sum += row.opt_relaxed;
  }
  auto mean_std = [](const std::vector<double>& xs) {
    if (xs.empty()) return std::pair<double, double>{0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return std::pair<double, double>{mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::pair<double, double>{
        mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
  };
  std::vector<SummaryRow> out;
  for (const auto& [key, acc] : groups) {
    SummaryRow row;
    row.rho = key.first;
    row.series = key.second;
    row.policy = acc.policy;
    row.count = acc.totals.size();
    std::tie(row.mean_total, row.std_total) = mean_std(acc.totals);
    std::tie(row.mean_ratio, row.std_ratio) = mean_std(acc.ratios);
    row.ratio_count = acc.ratios.size();
    row.mean_opt = acc.opt_sum / static_cast<double>(row.count);
    out.push_back(std::move(row));
  }
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "rho,replication,policy,series,seed,policy_rho,lambda,eta_target,"
         "eta_realized,supply,supply_end,transport,penalty,total,opt_relaxed,"
         "opt_rounded,ratio_relaxed,additive,audited,invariant_violations\n";
  for (const ResultRow& r : rows) {
    out << fmt(r.rho) << ',' << r.replication << ',' << r.policy << ",\""
        << r.series << "\"," << r.seed << ',' << fmt(r.policy_rho) << ','
        << fmt(r.lambda) << ',' << fmt(r.eta_target) << ','
        << fmt(r.eta_realized) << ',' << r.supply << ',' << r.supply_end << ','
        << fmt(r.transport) << ',' << fmt(r.penalty) << ',' << fmt(r.total)
        << ',' << fmt(r.opt_relaxed) << ',' << fmt(r.opt_rounded) << ','
        << fmt(r.ratio_relaxed) << ',' << fmt(r.additive) << ','
        << (r.audited ? 1 : 0) << ',' << r.invariant_violations << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "rho,policy,series,count,mean_total,std_total,mean_ratio,std_ratio,"
         "ratio_count,mean_opt_relaxed\n";
  for (const SummaryRow& r : rows) {
    out << fmt(r.rho) << ',' << r.policy << ",\"" << r.series << "\","
        << r.count << ',' << fmt(r.mean_total) << ',' << fmt(r.std_total)
        << ',' << fmt(r.mean_ratio) << ',' << fmt(r.std_ratio) << ','
        << r.ratio_count << ',' << fmt(r.mean_opt) << '\n';
  }
}

namespace {

template <typename Pred>
std::string panel_csv(const std::vector<SummaryRow>& rows, bool costs,
                      Pred keep) {
  std::ostringstream out;
  out << (costs ? "rho,series,mean_total,std_total\n"
                : "rho,series,mean_ratio,std_ratio\n");
  for (const SummaryRow& r : rows) {
    if (!keep(r)) continue;
    out << fmt(r.rho) << ",\"" << r.series << "\",";
    if (costs) {
      out << fmt(r.mean_total) << ',' << fmt(r.std_total) << '\n';
    } else {
      out << fmt(r.mean_ratio) << ',' << fmt(r.std_ratio) << '\n';
    }
  }
  return out.str();
}

std::string source_name(const InstanceSource& source) {
  if (std::holds_alternative<SyntheticSource>(source)) return "synthetic";
  if (std::holds_alternative<FileSource>(source)) return "file";
  return "taxi";
}

}  // namespace

void write_sweep_outputs(const std::filesystem::path& dir,
                         const SweepConfig& config,
                         const std::vector<ResultRow>& rows) {
  const std::vector<SummaryRow> summary = summarize(rows);

  // Everything is rendered before the first file is opened.
  std::map<std::string, std::string> files;
  {
    std::ostringstream out;
    write_results_csv(out, rows);
    files["results.csv"] = out.str();
  }
  {
    std::ostringstream out;
    write_summary_csv(out, summary);
    files["summary.csv"] = out.str();
  }
  files["costs.csv"] =
      panel_csv(summary, true, [](const SummaryRow&) { return true; });
  files["ratios_baselines.csv"] = panel_csv(
      summary, false, [](const SummaryRow& r) { return !is_la_gpa(r.policy); });
  files["ratios_la_gpa.csv"] = panel_csv(summary, false, [](const SummaryRow& r) {
    return is_la_gpa(r.policy) || r.policy == "gpa";
  });

  nlohmann::ordered_json meta;
  meta["source"] = source_name(config.source);
  meta["base_seed"] = config.base_seed;
  meta["replications"] = config.replications;
  meta["rho_grid"] = config.rho_grid;
  meta["rho_mode"] =
      config.rho_mode == RhoMode::kRealized ? "realized" : "sweep";
  meta["supply_rule"] = "floor(rho * (sum D - sum b))";
  meta["ratio_denominator"] = "opt_relaxed";
  meta["prediction_noise"] =
      "L1 budget split over supply and per-site totals, uniform weights, "
      "random signs";
  std::vector<std::string> series;
  for (const PolicySpec& spec : config.policies) series.push_back(spec.label());
  meta["series"] = series;
  meta["rows"] = rows.size();
  files["metadata.json"] = meta.dump(2) + "\n";

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  for (const auto& [name, body] : files) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
}

namespace {

using nlohmann::json;

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.string();
}

PolicySpec policy_from_json(const json& j) {
  if (j.is_string()) return parse_policy_spec(j.get<std::string>());
  PolicySpec spec;
  spec.name = j.at("name").get<std::string>();
  if (j.contains("lambda")) spec.lambda = j.at("lambda").get<double>();
  if (j.contains("eta_target")) {
    spec.eta_target = j.at("eta_target").get<double>();
  }
  if (j.contains("eta_factor")) {
    spec.eta_factor = j.at("eta_factor").get<double>();
  }
  return spec;
}

InstanceSource source_from_json(const json& j,
                                const std::filesystem::path& base) {
  const std::string type = j.value("type", std::string("synthetic"));
  if (type == "synthetic") {
    SyntheticSource src;
    SyntheticConfig& c = src.config;
    c.n = j.value("n", c.n);
    c.horizon = j.value("horizon", c.horizon);
    c.capacity = j.value("capacity", c.capacity);
    c.beta_alpha = j.value("beta_alpha", c.beta_alpha);
    c.beta_beta = j.value("beta_beta", c.beta_beta);
    c.bound_mean = j.value("bound_mean", c.bound_mean);
    return src;
  }
  if (type == "file") {
    FileSource src;
    src.path = resolve(base, j.at("path").get<std::string>());
    src.demand_csv = resolve(base, j.value("demand_csv", std::string()));
    return src;
  }
  if (type == "taxi") {
    TaxiSource src;
    src.demand_csv = resolve(base, j.at("demand_csv").get<std::string>());
    src.geo_csv = resolve(base, j.at("geo_csv").get<std::string>());
    src.options.zones = j.value("zones", false);
    if (j.contains("split_site_id")) {
      src.options.split_site_id = j.at("split_site_id").get<std::int64_t>();
    }
    if (j.contains("north_site_id")) {
      src.options.north_site_id = j.at("north_site_id").get<std::int64_t>();
    }
    src.options.capacity = j.value("capacity", src.options.capacity);
    return src;
  }
  throw Error(ErrorCode::kMalformedInput, "unknown source type '" + type + "'");
}

}  // namespace

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  const std::filesystem::path base =
      std::filesystem::path(path).parent_path();
  SweepConfig config;
  try {
    const json j = json::parse(in);
    if (j.contains("source")) config.source = source_from_json(j["source"], base);
    if (j.contains("rho_grid")) {
      config.rho_grid = j["rho_grid"].get<std::vector<double>>();
    }
    if (j.contains("policies")) {
      for (const json& p : j["policies"]) {
        config.policies.push_back(policy_from_json(p));
      }
    }
    const long long reps = j.value("replications", 1LL);
    if (reps < 1) {
      throw Error(ErrorCode::kParameterRange, "replications must be >= 1");
    }
    config.replications = static_cast<std::size_t>(reps);
    config.base_seed = j.value("base_seed", std::uint64_t{0});
    const std::string mode = j.value("rho_mode", std::string("realized"));
    if (mode == "realized") {
      config.rho_mode = RhoMode::kRealized;
    } else if (mode == "sweep") {
      config.rho_mode = RhoMode::kSweep;
    } else {
      throw Error(ErrorCode::kMalformedInput, "rho_mode '" + mode + "'");
    }
    config.threads = j.value("threads", std::size_t{1});
    config.output = j.value("output", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, path + ": " + e.what());
  }
  return config;
}

}  // namespace ossa
