#include "ossa/audit.hpp"

#include <algorithm>
#include <cmath>

namespace ossa {

std::string to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::kTerminalInventory: return "terminal-inventory";
    case InvariantKind::kCumulativeUpper: return "cumulative-upper";
    case InvariantKind::kCumulativeLower: return "cumulative-lower";
    case InvariantKind::kPenaltyGap: return "penalty-gap";
  }
  return "unknown";
}

double additive_term(const Instance& instance) {
  double sum = 0.0;
  for (const SiteSpec& site : instance.sites()) {
    sum += 3.0 * instance.penalty() * static_cast<double>(site.b + site.c);
  }
  return sum;
}

namespace {

double slack(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

}  // namespace

std::vector<Violation> audit_invariants(const Trace& trace,
                                        const Instance& instance,
                                        const GammaVector& gamma,
                                        const OfflineSolution& offline) {
  std::vector<Violation> report;
  const std::size_t n = instance.num_sites();
  for (std::size_t i = 0; i < n; ++i) {
    const SiteSpec& site = instance.site(i);
    const double cap = static_cast<double>(site.b + site.c);

    const double terminal = static_cast<double>(trace.terminal_stock[i]);
    if (terminal > cap) {
      report.push_back({InvariantKind::kTerminalInventory, site.site_id, 0,
                        terminal, cap});
    }

    Units granted = 0;
    Units demand = 0;
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
      granted += trace.at(t, i).grant;
      demand += trace.at(t, i).demand;
      const double rhs = gamma[i] * static_cast<double>(demand) + cap;
      const double lhs = static_cast<double>(granted);
      if (lhs > rhs + slack(rhs)) {
        report.push_back({InvariantKind::kCumulativeUpper, site.site_id, t + 1,
                          lhs, rhs});
      }
    }

    if (trace.supply_end > 0) {
      const double lhs = static_cast<double>(trace.cum_granted[i]);
      const double rhs = gamma[i] * static_cast<double>(trace.cum_demand[i]);
      if (lhs < rhs - slack(rhs)) {
        report.push_back({InvariantKind::kCumulativeLower, site.site_id, 0,
                          lhs, rhs});
      }
    }
  }

  if (trace.supply_end == 0) {
    double allowance = 0.0;
    for (const SiteSpec& site : instance.sites()) {
      allowance += instance.penalty() * static_cast<double>(site.b + site.c);
    }
    const double gap = trace.total_penalty - offline.penalty;
    if (gap > allowance + slack(allowance)) {
      report.push_back({InvariantKind::kPenaltyGap, 0, 0, gap, allowance});
    }
  }
  return report;
}

}  // namespace ossa
