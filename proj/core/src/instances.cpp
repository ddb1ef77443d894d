#include "ossa/instances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "ossa/csv.hpp"
#include "ossa/error.hpp"

namespace ossa {

Units supply_for_rho(const Instance& instance, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::kRhoOutOfRange, "rho must be >= 0");
  }
  const double demand = static_cast<double>(instance.total_demand());
  const double bound = static_cast<double>(instance.total_bound());
  const double target = std::floor(rho * (demand - bound));
  return target > 0.0 ? static_cast<Units>(target) : 0;
}

namespace {

std::vector<Instance> per_rho(const Instance& base,
                              const std::vector<double>& rho_grid) {
  std::vector<Instance> family;
  family.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    if (!(rho > 0.0)) {
      throw Error(ErrorCode::kRhoOutOfRange, "rho grid values must be > 0");
    }
    family.push_back(base.with_supply(supply_for_rho(base, rho)));
  }
  return family;
}

double beta_sample(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x + y > 0.0 ? x / (x + y) : 0.5;
}

SiteSpec unit_site(std::int64_t id, double w) {
  SiteSpec site;
  site.site_id = id;
  site.w = w;
  site.c = 1;
  site.b = 1;
  return site;
}

}  // namespace

std::vector<Instance> gen_synthetic(const SyntheticConfig& config) {
  if (config.n == 0 || config.capacity < 1 || !(config.beta_alpha > 0.0) ||
      !(config.beta_beta > 0.0) || !(config.bound_mean > 0.0)) {
    throw Error(ErrorCode::kParameterRange, "invalid synthetic configuration");
  }
  std::mt19937_64 rng(config.seed);
  RawInstance raw;
  raw.sites.resize(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    raw.sites[i].site_id = static_cast<std::int64_t>(i + 1);
    raw.sites[i].w = beta_sample(rng, config.beta_alpha, config.beta_beta);
    raw.sites[i].c = config.capacity;
  }
  std::poisson_distribution<std::int64_t> bound_dist(config.bound_mean);
  for (auto& site : raw.sites) {
    std::int64_t b = 0;
    while (b == 0) b = bound_dist(rng);
    site.b = static_cast<Units>(b);
  }
  double max_unit = 0.0;
  for (const auto& site : raw.sites) max_unit = std::max(max_unit, site.unit_cost());
  raw.p = 1e-6 + max_unit;

  raw.demand.resize(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const Units b = raw.sites[i].b;
    std::poisson_distribution<std::int64_t> arrivals(static_cast<double>(b));
    auto& row = raw.demand[i];
    row.resize(config.horizon);
    for (auto& d : row) d = std::min(b, static_cast<Units>(arrivals(rng)));
  }
  raw.horizon = config.horizon;
  raw.horizon_set = true;
  return per_rho(validate(raw), config.rho_grid);
}

Lower1Instance gen_lower1(std::size_t n, Units g, double epsilon,
                          double k_const, std::uint64_t seed) {
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorCode::kOddN, "n = " + std::to_string(n) + " must be even and positive");
  }
  if (g < 1 || !(epsilon > 0.0) || !(k_const >= 0.0)) {
    throw Error(ErrorCode::kParameterRange, "need g >= 1, epsilon > 0, k >= 0");
  }
  const double p = 1.0;
  const double w = p * static_cast<double>(g) * epsilon / (2.0 * (k_const + 1.0));
  if (w > p * static_cast<double>(g)) {
    throw Error(ErrorCode::kParameterRange, "epsilon too large: w exceeds p*c");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> in_h(n, false);
  for (std::size_t j = 0; j < n / 2; ++j) in_h[order[j]] = true;

  RawInstance raw;
  raw.p = p;
  raw.s = static_cast<Units>(n) * g / 2;
  Lower1Instance out{Instance{}, {}, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    SiteSpec site;
    site.site_id = static_cast<std::int64_t>(i + 1);
    site.w = w;
    site.c = g;
    site.b = g;
    raw.sites.push_back(site);
    raw.demand.push_back({g, in_h[i] ? g : 0});
    if (in_h[i]) out.second_step_sites.push_back(site.site_id);
  }
  out.instance = validate(raw);
  out.opt_cost = w * static_cast<double>(n) / 2.0;
  return out;
}

HardPair gen_lower2(Units s, double p) {
  if (s < 2) {
    throw Error(ErrorCode::kSupplyTooSmall, "s = " + std::to_string(s) + " < 2");
  }
  if (!(p > 0.0)) throw Error(ErrorCode::kParameterRange, "p must be > 0");
  const std::size_t horizon = static_cast<std::size_t>(2 * s);
  RawInstance raw;
  raw.p = p;
  raw.s = s;
  raw.sites = {unit_site(1, 0.0), unit_site(2, p / 2.0)};
  raw.demand.assign(2, std::vector<Units>(horizon, 0));
  raw.demand[0][0] = 1;
  raw.demand[1][0] = 1;
  for (std::size_t t = 2; t <= s; ++t) raw.demand[1][t - 1] = 1;
  raw.horizon = horizon;
  raw.horizon_set = true;

  HardPair pair;
  pair.first = validate(raw);
  for (std::size_t t = s + 1; t <= 2 * s; ++t) raw.demand[0][t - 1] = 1;
  pair.second = validate(raw);
  pair.opt_first = p * static_cast<double>(s - 1) / 2.0;
  pair.opt_second = p * static_cast<double>(s - 1);
  return pair;
}

HardPair gen_advice_weak(int case_id, Units k_const, double p) {
  if (case_id != 1 && case_id != 2) {
    throw Error(ErrorCode::kUnknownCase,
                "case " + std::to_string(case_id) + " (expected 1 or 2)");
  }
  if (k_const < 1 || !(p > 0.0)) {
    throw Error(ErrorCode::kParameterRange, "need K >= 1 and p > 0");
  }
  const Units k = k_const;
  const std::size_t horizon = static_cast<std::size_t>(2 * k + 1);
  RawInstance raw;
  raw.p = p;
  raw.sites = {unit_site(1, 0.0), unit_site(2, p / 2.0), unit_site(3, p)};
  raw.demand.assign(3, std::vector<Units>(horizon, 0));
  for (auto& row : raw.demand) row[0] = 1;
  for (std::size_t t = 2; t <= k + 1; ++t) raw.demand[1][t - 1] = 1;
  raw.horizon = horizon;
  raw.horizon_set = true;

  const double kd = static_cast<double>(k);
  HardPair pair;
  if (case_id == 1) {
    for (std::size_t t = k + 2; t <= 2 * k + 1; ++t) raw.demand[0][t - 1] = 1;
    raw.s = k;
    pair.first = validate(raw);
    raw.s = 2 * k;
    pair.second = validate(raw);
    pair.opt_first = kd * p;
    pair.opt_second = kd * p / 2.0;
  } else {
    raw.s = k;
    auto tail_at = [&](std::size_t site) {
      RawInstance copy = raw;
      for (std::size_t t = k + 2; t <= 2 * k + 1; ++t) copy.demand[site][t - 1] = 1;
      return validate(copy);
    };
    pair.first = tail_at(0);
    pair.second = tail_at(2);
    pair.opt_first = kd * p;
    pair.opt_second = 3.0 * kd * p / 2.0;
  }
  return pair;
}

ParetoInstances gen_pareto(double lambda, double epsilon, double c_const,
                           double p) {
  if (!(lambda > 0.0 && lambda <= 1.0 / 3.0)) {
    throw Error(ErrorCode::kLambdaOutOfRange, "lambda outside (0, 1/3]");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(c_const > 0.0) || !(p > 0.0)) {
    throw Error(ErrorCode::kParameterRange,
                "need 0 < epsilon < 1, C > 0 and p > 0");
  }
  const double tau = lambda * epsilon;
  const double r_lambda = (1.0 + lambda) * (1.0 + lambda) / (4.0 * lambda);
  const double r_tau = (1.0 + tau) * (1.0 + tau) / (4.0 * tau);
  const double delta = r_tau - r_lambda;
  const double bound = c_const * (1.0 + tau) / (2.0 * tau * delta) *
                       (4.0 + 2.0 * (1.0 - tau) / tau);
  if (!(bound < 1e7)) {
    throw Error(ErrorCode::kParameterRange,
                "required K = " + std::to_string(bound) + " is too large");
  }
  const Units k = static_cast<Units>(std::floor(bound)) + 1;
  const double w2 = 2.0 * tau / (1.0 + tau) * p;
  const std::size_t horizon = static_cast<std::size_t>(2 * k + 1);

  RawInstance raw;
  raw.p = p;
  raw.s = k;
  raw.sites = {unit_site(1, 0.0), unit_site(2, w2)};
  raw.demand.assign(2, std::vector<Units>(horizon, 0));
  raw.demand[0][0] = 1;
  raw.demand[1][0] = 1;
  for (std::size_t t = 2; t <= k + 1; ++t) raw.demand[1][t - 1] = 1;
  raw.horizon = horizon;
  raw.horizon_set = true;

  ParetoInstances out;
  out.k = k;
  out.tau = tau;
  out.inaccurate = validate(raw);
  for (std::size_t t = k + 2; t <= 2 * k + 1; ++t) raw.demand[0][t - 1] = 1;
  out.accurate = validate(raw);
  const double kd = static_cast<double>(k);
  const std::vector<double> d_hat = {kd + 1.0, kd + 1.0};
  out.accurate_predictions = make_predictions_from(out.accurate, kd, d_hat);
  out.inaccurate_predictions = make_predictions_from(out.inaccurate, kd, d_hat);
  out.opt_accurate = kd * p;
  out.opt_inaccurate = w2 * kd;
  return out;
}

namespace {

bool is_iso_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  for (std::size_t j : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (text[j] < '0' || text[j] > '9') return false;
  }
  const int month = std::stoi(text.substr(5, 2));
  const int day = std::stoi(text.substr(8, 2));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

struct Point {
  double x = 0.0;
  double y = 0.0;
  std::int64_t site = 0;
};

}  // namespace

TaxiFamily ingest_taxi(const std::string& demand_csv, const std::string& geo_csv,
                       const TaxiOptions& options) {
  if (options.capacity < 1) {
    throw Error(ErrorCode::kParameterRange, "capacity must be >= 1");
  }
  const csv::Table demand = csv::Table::read_file(demand_csv);
  const csv::Table geo = csv::Table::read_file(geo_csv);
  if (demand.rows() == 0) throw Error(ErrorCode::kEmptyInput, demand_csv + ": no rows");
  if (geo.rows() == 0) throw Error(ErrorCode::kEmptyInput, geo_csv + ": no rows");

  const char* key = options.zones ? "zone_id" : "site_id";
  const std::size_t d_date = demand.column("date");
  const std::size_t d_key = demand.column(key);
  const std::size_t d_pickups = demand.column("pickups");

  // Location keyed by demand key (site or zone).
  std::map<std::int64_t, Point> where;
  {
    const std::size_t g_key = geo.column(key);
    const std::size_t g_x = geo.column("x");
    const std::size_t g_y = geo.column("y");
    const std::size_t g_site = options.zones ? geo.column("site_id") : g_key;
    for (std::size_t r = 0; r < geo.rows(); ++r) {
      where[geo.as_int(r, g_key)] =
          Point{geo.as_double(r, g_x), geo.as_double(r, g_y), geo.as_int(r, g_site)};
    }
  }

  std::set<std::string> date_set;
  std::map<std::int64_t, Units> key_pickups;
  for (std::size_t r = 0; r < demand.rows(); ++r) {
    const std::string& date = demand.cell(r, d_date);
    if (!is_iso_date(date)) {
      throw Error(ErrorCode::kNonPositiveDates,
                  demand_csv + ": '" + date + "' is not an ISO-8601 date");
    }
    const auto id = demand.as_int(r, d_key);
    const auto q = demand.as_int(r, d_pickups);
    if (q < 0) throw Error(ErrorCode::kMalformedInput, demand_csv + ": negative pickups");
    if (!where.count(id)) {
      throw Error(ErrorCode::kMissingGeo,
                  std::string(key) + " " + std::to_string(id) + " has no coordinates");
    }
    date_set.insert(date);
    key_pickups[id] += static_cast<Units>(q);
  }

  // Map each demand key to its final site, splitting one site if requested.
  std::map<std::int64_t, std::int64_t> site_of;
  for (const auto& [id, total] : key_pickups) site_of[id] = where[id].site;
  if (options.zones && options.split_site_id) {
    const std::int64_t split = *options.split_site_id;
    std::vector<std::pair<double, Units>> ys;
    Units weight = 0;
    for (const auto& [id, total] : key_pickups) {
      if (site_of[id] == split) {
        ys.emplace_back(where[id].y, total);
        weight += total;
      }
    }
    std::sort(ys.begin(), ys.end());
    double median = ys.empty() ? 0.0 : ys.back().first;
    Units running = 0;
    for (const auto& [y, q] : ys) {
      running += q;
      if (2 * running >= weight) {
        median = y;
        break;
      }
    }
    std::int64_t north = 0;
    if (options.north_site_id) {
      north = *options.north_site_id;
    } else {
      for (const auto& [id, total] : key_pickups) north = std::max(north, site_of[id]);
      ++north;
    }
    for (const auto& [id, total] : key_pickups) {
      if (site_of[id] == split && where[id].y > median) site_of[id] = north;
    }
  }

  // Site centroids weighted by pickups (unweighted if a site has none).
  std::map<std::int64_t, SiteGeo> sites;
  std::map<std::int64_t, std::pair<double, double>> unweighted;
  std::map<std::int64_t, std::size_t> members;
  for (const auto& [id, total] : key_pickups) {
    const std::int64_t s = site_of[id];
    SiteGeo& g = sites[s];
    g.site_id = s;
    g.x += static_cast<double>(total) * where[id].x;
    g.y += static_cast<double>(total) * where[id].y;
    g.total_pickups += total;
    unweighted[s].first += where[id].x;
    unweighted[s].second += where[id].y;
    ++members[s];
  }
  for (auto& [s, g] : sites) {
    if (g.total_pickups > 0) {
      g.x /= static_cast<double>(g.total_pickups);
      g.y /= static_cast<double>(g.total_pickups);
    } else {
      g.x = unweighted[s].first / static_cast<double>(members[s]);
      g.y = unweighted[s].second / static_cast<double>(members[s]);
    }
  }

  TaxiFamily family;
  family.dates.assign(date_set.begin(), date_set.end());
  std::map<std::string, std::size_t> date_index;
  for (std::size_t t = 0; t < family.dates.size(); ++t) date_index[family.dates[t]] = t;

  Units grand_total = 0;
  for (const auto& [s, g] : sites) grand_total += g.total_pickups;
  for (const auto& [s, g] : sites) {
    const double weight = grand_total > 0 ? static_cast<double>(g.total_pickups)
                                          : 1.0;
    family.warehouse_x += weight * g.x;
    family.warehouse_y += weight * g.y;
    family.sites.push_back(g);
  }
  const double norm = grand_total > 0 ? static_cast<double>(grand_total)
                                      : static_cast<double>(sites.size());
  family.warehouse_x /= norm;
  family.warehouse_y /= norm;

  RawInstance raw;
  const std::size_t horizon = family.dates.size();
  std::map<std::int64_t, std::size_t> row_of;
  for (const SiteGeo& g : family.sites) {
    row_of[g.site_id] = raw.sites.size();
    SiteSpec site;
    site.site_id = g.site_id;
    site.w = std::hypot(g.x - family.warehouse_x, g.y - family.warehouse_y);
    site.c = options.capacity;
    raw.sites.push_back(site);
  }
  raw.demand.assign(raw.sites.size(), std::vector<Units>(horizon, 0));
  for (std::size_t r = 0; r < demand.rows(); ++r) {
    const std::int64_t s = site_of[demand.as_int(r, d_key)];
    raw.demand[row_of[s]][date_index[demand.cell(r, d_date)]] +=
        static_cast<Units>(demand.as_int(r, d_pickups));
  }

  double max_unit = 0.0;
  for (const auto& site : raw.sites) max_unit = std::max(max_unit, site.unit_cost());
  family.distance_scale = std::max(1.0, max_unit);
  max_unit = 0.0;
  for (std::size_t i = 0; i < raw.sites.size(); ++i) {
    SiteSpec& site = raw.sites[i];
    site.w /= family.distance_scale;
    max_unit = std::max(max_unit, site.unit_cost());
    const auto& row = raw.demand[i];
    site.b = std::max<Units>(1, *std::max_element(row.begin(), row.end()));
  }
  raw.p = 1e-6 + max_unit;
  raw.horizon = horizon;
  raw.horizon_set = true;
  family.instances = per_rho(validate(raw), options.rho_grid);
  return family;
}

}  // namespace ossa
