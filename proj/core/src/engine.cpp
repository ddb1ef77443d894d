#include "ossa/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "ossa/error.hpp"

namespace ossa {

Trace::Trace(std::size_t num_sites, std::size_t horizon)
    : num_sites_(num_sites),
      horizon_(horizon),
      records_(num_sites * horizon) {
  site_ids.resize(num_sites);
  transport.assign(num_sites, 0.0);
  penalty.assign(num_sites, 0.0);
  terminal_stock.assign(num_sites, 0);
  cum_granted.assign(num_sites, 0);
  cum_demand.assign(num_sites, 0);
}

Trace run(const Instance& instance, Policy& policy) {
  const std::size_t n = instance.num_sites();
  const std::size_t horizon = instance.horizon();
  const double p = instance.penalty();
  const auto& sites = instance.sites();

  Trace trace(n, horizon);
  trace.supply = instance.supply();

  std::vector<Units> stock(n), remainder(n, 0), cum_granted(n, 0),
      cum_demand(n, 0), demand(n, 0), grants(n, 0);
  std::vector<std::int64_t> requests(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    stock[i] = sites[i].b;
    trace.site_ids[i] = sites[i].site_id;
  }
  Units hub = instance.supply();

  for (std::size_t t = 0; t < horizon; ++t) {
    // Demand realization.
    for (std::size_t i = 0; i < n; ++i) {
      const Units d = instance.demand(i, t);
      demand[i] = d;
      cum_demand[i] += d;
      const Units unmet = d > stock[i] ? d - stock[i] : 0;
      remainder[i] = stock[i] > d ? stock[i] - d : 0;
      StepRecord& rec = trace.at(t, i);
      rec.demand = d;
      rec.penalty_units = unmet;
      trace.penalty[i] += p * static_cast<double>(unmet);
    }

    // Replenishment.
    StateView view{t + 1,       sites,     p,           stock,
                   demand,      remainder, cum_granted, cum_demand,
                   grants};
    std::fill(requests.begin(), requests.end(), 0);
    policy.requests(view, requests);

    bool short_granted = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (requests[i] < 0) {
        throw Error(ErrorCode::kNegativeRequest,
                    policy.name() + " requested " +
                        std::to_string(requests[i]) + " at site " +
                        std::to_string(sites[i].site_id) + " step " +
                        std::to_string(t + 1));
      }
      const Units want = static_cast<Units>(requests[i]);
      const Units got = std::min(hub, want);
      hub -= got;
      grants[i] = got;
      if (got < want) short_granted = true;
      if (got > 0) {
        trace.transport[i] +=
            sites[i].w * static_cast<double>(ceil_div(got, sites[i].c));
      }
      StepRecord& rec = trace.at(t, i);
      rec.request = want;
      rec.grant = got;
    }
    if (short_granted && trace.exhausted_at == 0) trace.exhausted_at = t + 1;
    policy.notify_grants(requests, grants);

    // Inventory update.
    for (std::size_t i = 0; i < n; ++i) {
      cum_granted[i] += grants[i];
      stock[i] = remainder[i] + grants[i];
      trace.at(t, i).stock_after = stock[i];
    }
  }

  trace.supply_end = hub;
  for (std::size_t i = 0; i < n; ++i) {
    trace.terminal_stock[i] = stock[i];
    trace.cum_granted[i] = cum_granted[i];
    trace.cum_demand[i] = cum_demand[i];
    trace.total_transport += trace.transport[i];
    trace.total_penalty += trace.penalty[i];
    trace.total += trace.transport[i] + trace.penalty[i];
  }
  return trace;
}

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

CostBreakdown cost_of(const Instance& instance, const Trace& trace) {
  const std::size_t n = trace.num_sites();
  if (n != instance.num_sites() || trace.horizon() != instance.horizon()) {
    throw Error(ErrorCode::kAccountingMismatch,
                "trace shape does not match instance");
  }
  CostBreakdown out;
  Units granted_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const SiteSpec& site = instance.site(i);
    double transport = 0.0;
    double penalty = 0.0;
    Units granted = 0;
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
      const StepRecord& rec = trace.at(t, i);
      if (rec.grant > 0) {
        transport += site.w * static_cast<double>(ceil_div(rec.grant, site.c));
      }
      penalty += instance.penalty() * static_cast<double>(rec.penalty_units);
      granted += rec.grant;
    }
    if (!close(transport, trace.transport[i]) ||
        !close(penalty, trace.penalty[i]) || granted != trace.cum_granted[i]) {
      throw Error(ErrorCode::kAccountingMismatch,
                  "site " + std::to_string(site.site_id) +
                      " totals disagree with the step log");
    }
    granted_total += granted;
    out.transport += transport;
    out.penalty += penalty;
    out.total += transport + penalty;
  }
  if (granted_total + trace.supply_end != trace.supply) {
    throw Error(ErrorCode::kAccountingMismatch,
                "supply is not conserved: granted " +
                    std::to_string(granted_total) + " + remaining " +
                    std::to_string(trace.supply_end) + " != " +
                    std::to_string(trace.supply));
  }
  if (!close(out.total, trace.total)) {
    throw Error(ErrorCode::kAccountingMismatch,
                "total " + std::to_string(trace.total) + " vs recomputed " +
                    std::to_string(out.total));
  }
  return out;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "t,site_id,demand,penalty_units,request,grant,stock_after\n";
  for (std::size_t t = 0; t < trace.horizon(); ++t) {
    for (std::size_t i = 0; i < trace.num_sites(); ++i) {
      const StepRecord& rec = trace.at(t, i);
      out << (t + 1) << ',' << trace.site_ids[i] << ',' << rec.demand << ','
          << rec.penalty_units << ',' << rec.request << ',' << rec.grant << ','
          << rec.stock_after << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const Trace& trace) {
  const auto old_precision = out.precision(17);
  out << "site_id,transport,penalty\n";
  for (std::size_t i = 0; i < trace.num_sites(); ++i) {
    out << trace.site_ids[i] << ',' << trace.transport[i] << ','
        << trace.penalty[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace ossa
