#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's engine, policies or offline solver: the event
// loop, the threshold rule and the offline optimum are re-derived from the
// model definition and solved by different means (a knapsack-style DP for the
// offline problem, bisection for tau).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "ossa/model.hpp"

namespace ref {

using ossa::RawInstance;
using ossa::SiteSpec;
using ossa::Units;

// Sort permutation by w/c then id. Inputs from RandomRaw use w = k/8 so the
// cross products are exact in binary.
inline std::vector<std::size_t> order(const RawInstance& raw) {
  std::vector<std::size_t> idx(raw.sites.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const SiteSpec& x = raw.sites[a];
    const SiteSpec& y = raw.sites[b];
    const long double lhs = static_cast<long double>(x.w) * y.c;
    const long double rhs = static_cast<long double>(y.w) * x.c;
    if (lhs != rhs) return lhs < rhs;
    return x.site_id < y.site_id;
  });
  return idx;
}

struct Sorted {
  std::vector<SiteSpec> sites;
  std::vector<std::vector<Units>> demand;
  double p = 0.0;
  Units s = 0;
  std::size_t horizon = 0;
};

inline Sorted sorted(const RawInstance& raw) {
  Sorted out;
  out.p = raw.p;
  out.s = raw.s;
  out.horizon = raw.demand.empty() ? 0 : raw.demand[0].size();
  for (std::size_t i : order(raw)) {
    out.sites.push_back(raw.sites[i]);
    out.demand.push_back(raw.demand[i]);
  }
  return out;
}

struct Step {
  Units demand, lost, request, grant, stock;
};

struct Result {
  std::vector<std::vector<Step>> steps;  // [t][i]
  std::vector<Units> allocated;         // L_i
  Units hub_end = 0;
  double transport = 0.0;
  double penalty = 0.0;
  double total() const { return transport + penalty; }
};

// Per-site decision: given (site index, remainder, L so far, D so far) return
// whether to order a full top-up.
using Rule = std::function<bool(std::size_t, Units, Units, Units)>;

inline Result simulate(const Sorted& in, const Rule& rule) {
  const std::size_t n = in.sites.size();
  Result res;
  res.allocated.assign(n, 0);
  std::vector<Units> stock(n), seen(n, 0);
  for (std::size_t i = 0; i < n; ++i) stock[i] = in.sites[i].b;
  Units hub = in.s;
  for (std::size_t t = 0; t < in.horizon; ++t) {
    std::vector<Step> row(n);
    std::vector<Units> left(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Units d = in.demand[i][t];
      seen[i] += d;
      const Units served = std::min(d, stock[i]);
      row[i].demand = d;
      row[i].lost = d - served;
      left[i] = stock[i] - served;
      res.penalty += in.p * static_cast<double>(d - served);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const SiteSpec& site = in.sites[i];
      Units want = 0;
      if (rule(i, left[i], res.allocated[i], seen[i]) && left[i] < site.b) {
        const Units gap = site.b - left[i];
        want = (gap + site.c - 1) / site.c * site.c;
      }
      const Units got = want < hub ? want : hub;
      hub -= got;
      row[i].request = want;
      row[i].grant = got;
      if (got > 0) {
        res.transport += site.w * std::ceil(static_cast<double>(got) /
                                            static_cast<double>(site.c));
      }
      res.allocated[i] += got;
      stock[i] = left[i] + got;
      row[i].stock = stock[i];
    }
    res.steps.push_back(std::move(row));
  }
  res.hub_end = hub;
  return res;
}

// L <= min(1, p c / (3 w)) D, compared exactly: w and p are dyadic.
inline Rule gpa_rule(const Sorted& in) {
  return [&in](std::size_t i, Units, Units L, Units D) {
    const SiteSpec& site = in.sites[i];
    const long double lhs = 3.0L * site.w * L;
    const long double rhs = static_cast<long double>(in.p) * site.c * D;
    return L <= D && lhs <= rhs;
  };
}

// L <= num/den * D on integers.
inline Rule fraction_rule(Units num, Units den) {
  return [=](std::size_t, Units, Units L, Units D) { return L * den <= num * D; };
}

// Offline optimum of the relaxed problem by DP over the supply spent:
//   min sum_i (w_i/c_i) L_i + p (N_i - L_i)   s.t. 0 <= L_i <= N_i, sum L <= s.
struct Offline {
  std::vector<Units> net;
  std::vector<Units> alloc;
  double cost = 0.0;
  double penalty = 0.0;
};

inline Offline offline(const Sorted& in) {
  const std::size_t n = in.sites.size();
  Offline out;
  Units total_net = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Units d = 0;
    for (Units x : in.demand[i]) d += x;
    out.net.push_back(d > in.sites[i].b ? d - in.sites[i].b : 0);
    total_net += out.net.back();
  }
  const Units cap = std::min(in.s, total_net);
  const double inf = std::numeric_limits<double>::infinity();
  // best[i][k]: min cost of sites [0, i) using exactly k units.
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(cap + 1, inf));
  std::vector<std::vector<Units>> pick(n + 1, std::vector<Units>(cap + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double unit = in.sites[i].w / static_cast<double>(in.sites[i].c);
    for (Units k = 0; k <= cap; ++k) {
      if (best[i][k] == inf) continue;
      for (Units l = 0; l <= out.net[i] && k + l <= cap; ++l) {
        const double c = best[i][k] + unit * static_cast<double>(l) +
                         in.p * static_cast<double>(out.net[i] - l);
        if (c < best[i + 1][k + l]) {
          best[i + 1][k + l] = c;
          pick[i + 1][k + l] = l;
        }
      }
    }
  }
  Units k_best = 0;
  for (Units k = 0; k <= cap; ++k) {
    if (best[n][k] < best[n][k_best]) k_best = k;
  }
  out.cost = best[n][k_best];
  out.alloc.assign(n, 0);
  for (std::size_t i = n; i > 0; --i) {
    out.alloc[i - 1] = pick[i][k_best];
    k_best -= pick[i][k_best];
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.penalty += in.p * static_cast<double>(out.net[i] - out.alloc[i]);
  }
  return out;
}

// tau in (0, 1] with (1 - tau)^2 / (4 tau) = lambda, by bisection.
inline double tau_bisect(double lambda) {
  double lo = 1e-12, hi = 1.0;  // f decreasing on (0, 1]
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = (1.0 - mid) * (1.0 - mid) / (4.0 * mid);
    (f > lambda ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct RandomSpec {
  std::size_t max_sites = 10;
  std::size_t max_horizon = 200;
  Units max_bound = 12;
  Units max_capacity = 12;
  Units max_demand = 0;  // 0: up to b
  Units max_supply = 0;  // 0: drawn relative to total net demand
};

// Random valid instance with w = k/8 and p = m/8 so ordering ties are exact.
inline RawInstance random_raw(std::mt19937_64& rng, const RandomSpec& spec) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  RawInstance raw;
  const std::size_t n = pick(1, spec.max_sites);
  const std::size_t horizon = pick(0, spec.max_horizon);
  raw.p = static_cast<double>(pick(1, 16)) / 8.0;
  std::vector<std::int64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  Units total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    SiteSpec site;
    site.site_id = ids[i] * 7;
    site.c = pick(1, spec.max_capacity);
    site.b = pick(1, spec.max_bound);
    const auto max_k = static_cast<std::uint64_t>(raw.p * 8.0) * site.c;
    site.w = static_cast<double>(pick(0, max_k)) / 8.0;
    raw.sites.push_back(site);
    std::vector<Units> row(horizon);
    const Units top = spec.max_demand ? std::min(spec.max_demand, site.b) : site.b;
    // Mix of busy and quiet sites.
    const double busy = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (auto& d : row) {
      d = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < busy
              ? pick(0, top)
              : 0;
      total += d;
    }
    raw.demand.push_back(std::move(row));
  }
  raw.s = spec.max_supply ? pick(0, spec.max_supply) : pick(0, total + total / 4 + 1);
  return raw;
}

}  // namespace ref
