#include "ossa/offline.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ossa/engine.hpp"
#include "ossa/error.hpp"

namespace ossa {

double relaxed_cost(const Instance& instance, const std::vector<Units>& net,
                    const std::vector<Units>& allocation) {
  double cost = 0.0;
  for (std::size_t i = 0; i < instance.num_sites(); ++i) {
    const SiteSpec& site = instance.site(i);
    cost += site.w * static_cast<double>(allocation[i]) /
                static_cast<double>(site.c) +
            instance.penalty() * static_cast<double>(net[i] - allocation[i]);
  }
  return cost;
}

OfflineSolution solve_offline(const Instance& instance) {
  const std::size_t n = instance.num_sites();
  OfflineSolution sol;
  sol.net_demand.resize(n);
  sol.allocation.assign(n, 0);
  sol.gamma.assign(n, 0.0);
  Units total_net = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Units d = instance.total_demand(i);
    const Units b = instance.site(i).b;
    sol.net_demand[i] = d > b ? d - b : 0;
    total_net += sol.net_demand[i];
  }
  if (n == 0) return sol;

  const Units s = instance.supply();
  if (s >= total_net) {
    sol.surplus = true;
    sol.pivotal_index = n - 1;
    sol.pivotal_value = 1.0;
    sol.allocation = sol.net_demand;
    sol.gamma.assign(n, 1.0);
  } else if (s == 0) {
    sol.pivotal_index = 0;
    sol.pivotal_value = 0.0;
  } else {
    Units prefix = 0;
    std::size_t pivot = 0;
    while (prefix + sol.net_demand[pivot] < s) {
      prefix += sol.net_demand[pivot];
      ++pivot;
    }
    // prefix < s <= prefix + N_pivot, so N_pivot > 0.
    for (std::size_t i = 0; i < pivot; ++i) {
      sol.allocation[i] = sol.net_demand[i];
      sol.gamma[i] = 1.0;
    }
    sol.allocation[pivot] = s - prefix;
    sol.pivotal_index = pivot;
    sol.pivotal_value = static_cast<double>(s - prefix) /
                        static_cast<double>(sol.net_demand[pivot]);
    sol.gamma[pivot] = sol.pivotal_value;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double unserved =
        static_cast<double>(sol.net_demand[i] - sol.allocation[i]);
    sol.penalty += instance.penalty() * unserved;
  }
  double transport_relaxed = 0.0;
  double transport_rounded = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SiteSpec& site = instance.site(i);
    transport_relaxed += site.w * static_cast<double>(sol.allocation[i]) /
                         static_cast<double>(site.c);
    transport_rounded +=
        site.w * static_cast<double>(ceil_div(sol.allocation[i], site.c));
  }
  sol.cost_relaxed = transport_relaxed + sol.penalty;
  sol.cost_rounded = transport_rounded + sol.penalty;
  return sol;
}

double relaxed_lower_bound(const Instance& instance) {
  return solve_offline(instance).cost_relaxed;
}

namespace {

struct Search {
  const Instance& instance;
  const std::vector<Units>& net;
  std::vector<Units> current;
  BruteForceResult best;

  void visit(std::size_t i, Units left) {
    if (i == net.size()) {
      ++best.candidates;
      const double cost = relaxed_cost(instance, net, current);
      if (cost < best.cost_relaxed) {
        best.cost_relaxed = cost;
        best.allocation = current;
      }
      return;
    }
    const Units top = std::min(net[i], left);
    for (Units l = 0; l <= top; ++l) {
      current[i] = l;
      visit(i + 1, left - l);
    }
    current[i] = 0;
  }
};

}  // namespace

BruteForceResult brute_force_offline(const Instance& instance,
                                     std::uint64_t max_candidates) {
  const std::size_t n = instance.num_sites();
  std::vector<Units> net(n);
  double grid = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Units d = instance.total_demand(i);
    const Units b = instance.site(i).b;
    net[i] = d > b ? d - b : 0;
    grid *= static_cast<double>(std::min(net[i], instance.supply()) + 1);
  }
  if (grid > static_cast<double>(max_candidates)) {
    throw Error(ErrorCode::kEnumerationBudgetExceeded,
                "candidate grid of " + std::to_string(grid) +
                    " exceeds budget " + std::to_string(max_candidates));
  }
  Search search{instance, net, std::vector<Units>(n, 0), {}};
  search.best.cost_relaxed = std::numeric_limits<double>::infinity();
  search.visit(0, instance.supply());
  return search.best;
}

void write_offline_json(std::ostream& out, const Instance& instance,
                        const OfflineSolution& solution) {
  nlohmann::ordered_json doc;
  std::vector<std::int64_t> ids;
  for (const auto& site : instance.sites()) ids.push_back(site.site_id);
  doc["site_ids"] = ids;
  doc["net_demand"] = solution.net_demand;
  doc["pivotal_index"] = solution.pivotal_index + 1;
  doc["pivotal_site_id"] =
      ids.empty() ? std::int64_t{0} : ids[solution.pivotal_index];
  doc["pivotal_value"] = solution.pivotal_value;
  doc["allocation"] = solution.allocation;
  doc["gamma_star"] = solution.gamma;
  doc["penalty"] = solution.penalty;
  doc["cost_relaxed"] = solution.cost_relaxed;
  doc["cost_rounded"] = solution.cost_rounded;
  doc["surplus"] = solution.surplus;
  out << doc.dump(2) << '\n';
}

}  // namespace ossa
