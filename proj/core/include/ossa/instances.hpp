#pragma once

// Instance generators: the randomized synthetic family, the hard instances
// behind the lower-bound arguments (each with its closed-form offline cost),
// and ingestion of pre-aggregated taxi pickup data.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ossa/advice.hpp"
#include "ossa/model.hpp"

namespace ossa {

// s = floor(rho * (sum D - sum b)), clamped at 0.
Units supply_for_rho(const Instance& instance, double rho);

// ---------------------------------------------------------------------------
// Synthetic family.

struct SyntheticConfig {
  std::size_t n = 50;
  std::size_t horizon = 10000;
  Units capacity = 10;
  double beta_alpha = 1.0;
  double beta_beta = 1.0;
  double bound_mean = 10.0;  // Poisson mean for b_i
  std::vector<double> rho_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6,
                                  0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
  std::uint64_t seed = 0;
};

// w_i ~ Beta(alpha, beta), c_i = capacity, b_i ~ Poisson(mean) redrawn while
// 0, d_i^t = min{b_i, Poisson(b_i)}, p = 1e-6 + max w/c. One instance per
// rho; they share everything except s.
std::vector<Instance> gen_synthetic(const SyntheticConfig& config);

// ---------------------------------------------------------------------------
// Hard instances.

struct Lower1Instance {
  Instance instance;
  std::vector<std::int64_t> second_step_sites;  // H, |H| = n/2
  double opt_cost = 0.0;                        // w n / 2
};

// n sites with b = c = g, w = p g eps / (2 (k + 1)), p = 1, s = n g / 2.
// Everyone demands g at t = 1; a uniformly random half H demands g again at
// t = 2.
Lower1Instance gen_lower1(std::size_t n, Units g, double epsilon,
                          double k_const, std::uint64_t seed);

struct HardPair {
  Instance first;
  Instance second;
  double opt_first = 0.0;
  double opt_second = 0.0;
};

// Two sites, w = (0, p/2), b = c = 1, demand (1, 1) at t = 1 and one unit at
// site 2 for t = 2..s. The second event adds one unit at site 1 for
// t = s+1..2s. OPT costs p(s-1)/2 and p(s-1).
HardPair gen_lower2(Units s, double p = 1.0);

// Three sites, w = (0, p/2, p), b = c = 1. Case 1: one demand stream, supply
// K versus 2K (OPT Kp and Kp/2). Case 2: supply K, the tail of K units lands
// on site 1 versus site 3 (OPT Kp and 3Kp/2).
HardPair gen_advice_weak(int case_id, Units k_const, double p = 1.0);

struct ParetoInstances {
  Instance accurate;
  Instance inaccurate;
  Predictions accurate_predictions;
  Predictions inaccurate_predictions;
  Units k = 0;
  double tau = 0.0;  // lambda * epsilon
  double opt_accurate = 0.0;
  double opt_inaccurate = 0.0;
};

// Two sites, b = c = 1, w = (0, 2 tau p / (1 + tau)) with tau = lambda eps,
// s = K, predictions s_hat = K, d_hat = (K+1, K+1). K is the smallest
// integer above the bound that makes the consistency/robustness trade-off
// bite for additive constant C.
ParetoInstances gen_pareto(double lambda, double epsilon, double c_const,
                           double p = 1.0);

// ---------------------------------------------------------------------------
// Taxi-style ingestion.

struct TaxiOptions {
  // Sites mode: demand rows (date, site_id, pickups), geo rows (site_id, x, y).
  // Zones mode: demand rows (date, zone_id, pickups), geo rows
  // (zone_id, x, y, site_id); site centroids are pickup-weighted.
  bool zones = false;
  // In zones mode, split this site's zones at the pickup-weighted median y
  // into a southern part (keeps the id) and a northern part (north_site_id).
  std::optional<std::int64_t> split_site_id;
  std::optional<std::int64_t> north_site_id;
  Units capacity = 10;
  std::vector<double> rho_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6,
                                  0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
};

struct SiteGeo {
  std::int64_t site_id = 0;
  double x = 0.0;
  double y = 0.0;
  Units total_pickups = 0;
};

struct TaxiFamily {
  std::vector<Instance> instances;  // one per rho
  std::vector<SiteGeo> sites;
  double warehouse_x = 0.0;
  double warehouse_y = 0.0;
  double distance_scale = 1.0;  // raw distance / scale = w
  std::vector<std::string> dates;
};

TaxiFamily ingest_taxi(const std::string& demand_csv, const std::string& geo_csv,
                       const TaxiOptions& options);

}  // namespace ossa
