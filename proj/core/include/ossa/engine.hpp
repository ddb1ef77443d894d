#pragma once

// Exact online simulation. Each step runs, in order: demand is served from
// stock and shortfall is penalised, the policy requests replenishment, the hub
// grants requests in ascending site order until it runs dry, and stock is
// updated for the next step.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ossa/model.hpp"

namespace ossa {

// What a policy may observe at the replenishment phase of step t. It never
// exposes the hub's remaining supply.
struct StateView {
  std::size_t t = 0;  // 1-based step
  std::span<const SiteSpec> sites;
  double p = 0.0;
  std::span<const Units> stock;        // k_i^t, before this step's demand
  std::span<const Units> demand;       // d_i^t
  std::span<const Units> remainder;    // r_i^t = (k_i^t - d_i^t)_+
  std::span<const Units> cum_granted;  // L_i^{t-1}
  std::span<const Units> cum_demand;   // D_i^t, includes this step
  std::span<const Units> last_grants;  // grants of step t-1 (zeros at t = 1)
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  // Writes the requested units per site into `out` (same order as sites).
  // Negative values are rejected by the engine.
  virtual void requests(const StateView& view, std::span<std::int64_t> out) = 0;

  // Called after granting; grant < request means the hub is exhausted.
  virtual void notify_grants(std::span<const std::int64_t> requested,
                             std::span<const Units> granted) {
    (void)requested;
    (void)granted;
  }
};

struct StepRecord {
  Units demand = 0;
  Units penalty_units = 0;
  Units request = 0;
  Units grant = 0;
  Units stock_after = 0;  // k_i^{t+1}

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

class Trace {
 public:
  Trace() = default;
  Trace(std::size_t num_sites, std::size_t horizon);

  std::size_t num_sites() const { return num_sites_; }
  std::size_t horizon() const { return horizon_; }

  // 0-based step and site.
  const StepRecord& at(std::size_t t, std::size_t i) const {
    return records_[t * num_sites_ + i];
  }
  StepRecord& at(std::size_t t, std::size_t i) {
    return records_[t * num_sites_ + i];
  }

  std::vector<std::int64_t> site_ids;
  std::vector<double> transport;  // per site
  std::vector<double> penalty;    // per site
  std::vector<Units> terminal_stock;
  std::vector<Units> cum_granted;  // L_i at the end of the horizon
  std::vector<Units> cum_demand;   // D_i
  Units supply = 0;
  Units supply_end = 0;
  // First step (1-based) whose grants fell short of a request; 0 if never.
  std::size_t exhausted_at = 0;
  double total_transport = 0.0;
  double total_penalty = 0.0;
  double total = 0.0;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::size_t num_sites_ = 0;
  std::size_t horizon_ = 0;
  std::vector<StepRecord> records_;
};

// Runs `policy` (fresh, no carried state) over the validated instance.
// Throws NegativeRequest if the policy asks for a negative amount.
Trace run(const Instance& instance, Policy& policy);

struct CostBreakdown {
  double transport = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

// Recomputes the objective from the step records and checks it against the
// totals accumulated during the run. Throws AccountingMismatch on
// disagreement.
CostBreakdown cost_of(const Instance& instance, const Trace& trace);

// Columns: t,site_id,demand,penalty_units,request,grant,stock_after.
void write_trace_csv(std::ostream& out, const Trace& trace);
// Columns: site_id,transport,penalty.
void write_summary_csv(std::ostream& out, const Trace& trace);

inline Units ceil_div(Units a, Units b) { return a / b + (a % b != 0 ? 1 : 0); }

}  // namespace ossa
