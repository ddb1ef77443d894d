#pragma once

// Domain types for the online shared-supply allocation model.
//
// Units (supply, demand, stock) are unsigned 64-bit integers; money-valued
// quantities (shipment weights, penalty) are doubles. Every site starts the
// horizon with stock equal to its per-step demand bound b.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ossa {

using Units = std::uint64_t;

struct SiteSpec {
  friend bool operator==(const SiteSpec&, const SiteSpec&) = default;

  std::int64_t site_id = 0;
  double w = 0.0;  // cost per shipment
  Units c = 1;     // units per shipment
  Units b = 1;     // per-step demand bound, also the initial stock

  // Fractional transport cost w/c used for the canonical ordering.
  double unit_cost() const { return w / static_cast<double>(c); }
};

// Unvalidated instance as read from a file or produced by a generator.
// demand[i] is the demand row of sites[i]; rows need not be sorted.
struct RawInstance {
  std::vector<SiteSpec> sites;
  double p = 0.0;
  Units s = 0;
  std::vector<std::vector<Units>> demand;
  // Horizon. When unset it is taken from the demand row length.
  std::size_t horizon = 0;
  bool horizon_set = false;
};

// A validated instance: sites sorted by ascending w/c (ties by site_id),
// demand reindexed to that order, and every model assumption checked.
// Only `validate` can build one, so holders may rely on the invariants.
class Instance {
 public:
  std::size_t num_sites() const { return sites_.size(); }
  std::size_t horizon() const { return horizon_; }
  double penalty() const { return p_; }
  Units supply() const { return s_; }

  const std::vector<SiteSpec>& sites() const { return sites_; }
  const SiteSpec& site(std::size_t i) const { return sites_[i]; }

  // Demand of site i at 0-based step t.
  Units demand(std::size_t i, std::size_t t) const { return data_->demand[i][t]; }
  std::span<const Units> demand_row(std::size_t i) const {
    return data_->demand[i];
  }

  // Total demand D_i over the horizon.
  Units total_demand(std::size_t i) const { return data_->totals[i]; }
  Units total_demand() const;
  Units total_bound() const;

  // Copy with a different hub supply; every invariant is unaffected by s.
  // The demand matrix is shared, not copied.
  Instance with_supply(Units s) const;

  RawInstance to_raw() const;

  friend bool operator==(const Instance& a, const Instance& b);

  // Empty instance (no sites, T = 0); mostly a placeholder for aggregates.
  Instance();

 private:
  friend Instance validate(const RawInstance& raw);

  struct Demand {
    std::vector<std::vector<Units>> demand;
    std::vector<Units> totals;
  };

  std::vector<SiteSpec> sites_;
  double p_ = 0.0;
  Units s_ = 0;
  std::size_t horizon_ = 0;
  std::shared_ptr<const Demand> data_;
};

// Checks the model assumptions and returns the canonical form. Throws
// ossa::Error (CapacityZero, DemandBoundViolated, PenaltyDominated or
// InvalidInstance) naming the offending site and step.
Instance validate(const RawInstance& raw);

struct GammaVector {
  std::vector<double> gamma;

  std::size_t size() const { return gamma.size(); }
  double operator[](std::size_t i) const { return gamma[i]; }

  // Throws ParameterRange unless every entry lies in [0, 1].
  void check() const;
};

// min{1, scale * p * c_i / w_i}, or 1 for free shipping. Shared by the
// advice-free threshold and both prediction bands so that equal scales give
// bit-identical thresholds.
double capped_band(double scale, double p, const SiteSpec& site);

}  // namespace ossa
