#include "ossa/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "ossa/error.hpp"

namespace ossa {

namespace {

std::string site_label(const SiteSpec& site) {
  return "site " + std::to_string(site.site_id);
}

}  // namespace

Instance::Instance() : data_(std::make_shared<const Demand>()) {}

bool operator==(const Instance& a, const Instance& b) {
  return a.sites_ == b.sites_ && a.p_ == b.p_ && a.s_ == b.s_ &&
         a.horizon_ == b.horizon_ &&
         (a.data_ == b.data_ || a.data_->demand == b.data_->demand);
}

Units Instance::total_demand() const {
  return std::accumulate(data_->totals.begin(), data_->totals.end(), Units{0});
}

Units Instance::total_bound() const {
  Units sum = 0;
  for (const auto& site : sites_) sum += site.b;
  return sum;
}

Instance Instance::with_supply(Units s) const {
  Instance copy = *this;
  copy.s_ = s;
  return copy;
}

RawInstance Instance::to_raw() const {
  RawInstance raw;
  raw.sites = sites_;
  raw.p = p_;
  raw.s = s_;
  raw.demand = data_->demand;
  raw.horizon = horizon_;
  raw.horizon_set = true;
  return raw;
}

Instance validate(const RawInstance& raw) {
  const std::size_t n = raw.sites.size();
  if (!(raw.p >= 0.0)) {
    throw Error(ErrorCode::kInvalidInstance, "penalty must be non-negative");
  }
  if (raw.demand.size() != n) {
    throw Error(ErrorCode::kInvalidInstance,
                "expected " + std::to_string(n) + " demand rows, got " +
                    std::to_string(raw.demand.size()));
  }
  std::size_t horizon = raw.horizon;
  if (!raw.horizon_set) horizon = n == 0 ? 0 : raw.demand.front().size();

  std::set<std::int64_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    const SiteSpec& site = raw.sites[i];
    if (!ids.insert(site.site_id).second) {
      throw Error(ErrorCode::kInvalidInstance,
                  "duplicate " + site_label(site));
    }
    if (site.c < 1) {
      throw Error(ErrorCode::kCapacityZero, site_label(site) + " has c = 0");
    }
    if (site.b < 1) {
      throw Error(ErrorCode::kInvalidInstance, site_label(site) + " has b = 0");
    }
    if (!(site.w >= 0.0)) {
      throw Error(ErrorCode::kInvalidInstance,
                  site_label(site) + " has negative shipment cost");
    }
    if (site.w > raw.p * static_cast<double>(site.c)) {
      throw Error(ErrorCode::kPenaltyDominated,
                  site_label(site) + " has w = " + std::to_string(site.w) +
                      " > p*c = " +
                      std::to_string(raw.p * static_cast<double>(site.c)));
    }
    const auto& row = raw.demand[i];
    if (row.size() != horizon) {
      throw Error(ErrorCode::kInvalidInstance,
                  site_label(site) + " demand row has length " +
                      std::to_string(row.size()) + ", horizon is " +
                      std::to_string(horizon));
    }
    for (std::size_t t = 0; t < horizon; ++t) {
      if (row[t] > site.b) {
        throw Error(ErrorCode::kDemandBoundViolated,
                    site_label(site) + " step " + std::to_string(t + 1) +
                        ": demand " + std::to_string(row[t]) + " > b = " +
                        std::to_string(site.b));
      }
    }
  }

  // w_i/c_i < w_j/c_j compared as w_i*c_j < w_j*c_i to avoid the division.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const SiteSpec& x = raw.sites[a];
    const SiteSpec& y = raw.sites[b];
    const double lhs = x.w * static_cast<double>(y.c);
    const double rhs = y.w * static_cast<double>(x.c);
    if (lhs != rhs) return lhs < rhs;
    return x.site_id < y.site_id;
  });

  Instance inst;
  inst.p_ = raw.p;
  inst.s_ = raw.s;
  inst.horizon_ = horizon;
  auto data = std::make_shared<Instance::Demand>();
  inst.sites_.reserve(n);
  data->demand.reserve(n);
  data->totals.reserve(n);
  for (std::size_t idx : order) {
    inst.sites_.push_back(raw.sites[idx]);
    data->demand.push_back(raw.demand[idx]);
    const auto& row = raw.demand[idx];
    data->totals.push_back(std::accumulate(row.begin(), row.end(), Units{0}));
  }
  inst.data_ = std::move(data);
  return inst;
}

void GammaVector::check() const {
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!(gamma[i] >= 0.0 && gamma[i] <= 1.0)) {
      throw Error(ErrorCode::kParameterRange,
                  "gamma[" + std::to_string(i) + "] = " +
                      std::to_string(gamma[i]) + " outside [0, 1]");
    }
  }
}

double capped_band(double scale, double p, const SiteSpec& site) {
  if (site.w == 0.0) return 1.0;
  return std::min(1.0, scale * p * static_cast<double>(site.c) / site.w);
}

}  // namespace ossa
