#include "ossa/policies.hpp"

#include <cassert>
#include <cmath>

#include "ossa/error.hpp"

namespace ossa {

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::kRhoOutOfRange,
                "rho = " + std::to_string(rho) + " must be >= 0");
  }
}

// L <= share * D, with exact ties kept eligible despite rounding in share.
bool within_share(Units granted, double share, Units demand) {
  const double cap = share * static_cast<double>(demand);
  return static_cast<double>(granted) <= cap + 1e-12 * cap;
}

}  // namespace

bool gpa_eligible(Units remainder, Units cum_granted_prev, Units cum_demand,
                  double gamma, const SiteSpec& site) {
  return remainder < site.b && within_share(cum_granted_prev, gamma, cum_demand);
}

GpaPolicy::GpaPolicy(GammaVector gamma, std::string label)
    : gamma_(std::move(gamma)), label_(std::move(label)) {
  gamma_.check();
}

void GpaPolicy::requests(const StateView& view, std::span<std::int64_t> out) {
  const std::size_t n = view.sites.size();
  if (gamma_.size() != n) {
    throw Error(ErrorCode::kParameterRange,
                "gamma has " + std::to_string(gamma_.size()) +
                    " entries for " + std::to_string(n) + " sites");
  }
  if (cum_demand_.empty()) {
    cum_demand_.assign(n, 0);
    cum_granted_.assign(n, 0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    cum_demand_[i] += view.demand[i];
    assert(cum_demand_[i] == view.cum_demand[i]);
    assert(cum_granted_[i] == view.cum_granted[i]);
    const SiteSpec& site = view.sites[i];
    out[i] = gpa_eligible(view.remainder[i], cum_granted_[i], cum_demand_[i],
                          gamma_[i], site)
                 ? static_cast<std::int64_t>(
                       full_shipment_topup(view.remainder[i], site))
                 : 0;
  }
}

void GpaPolicy::notify_grants(std::span<const std::int64_t>,
                              std::span<const Units> granted) {
  for (std::size_t i = 0; i < granted.size(); ++i) cum_granted_[i] += granted[i];
}

GammaVector default_gamma(const Instance& instance) {
  GammaVector out;
  out.gamma.reserve(instance.num_sites());
  for (const SiteSpec& site : instance.sites()) {
    out.gamma.push_back(capped_band(1.0 / 3.0, instance.penalty(), site));
  }
  return out;
}

void NeverPolicy::requests(const StateView&, std::span<std::int64_t> out) {
  for (auto& r : out) r = 0;
}

void AlwaysFillPolicy::requests(const StateView& view,
                                std::span<std::int64_t> out) {
  for (std::size_t i = 0; i < view.sites.size(); ++i) {
    out[i] = static_cast<std::int64_t>(
        full_shipment_topup(view.remainder[i], view.sites[i]));
  }
}

RhoGreedyPolicy::RhoGreedyPolicy(double rho) : rho_(rho) { check_rho(rho); }

void RhoGreedyPolicy::requests(const StateView& view,
                               std::span<std::int64_t> out) {
  for (std::size_t i = 0; i < view.sites.size(); ++i) {
    const bool under =
        within_share(view.cum_granted[i], rho_, view.cum_demand[i]);
    out[i] = under ? static_cast<std::int64_t>(full_shipment_topup(
                         view.remainder[i], view.sites[i]))
                   : 0;
  }
}

RhoCoinFlipPolicy::RhoCoinFlipPolicy(double rho, std::uint64_t seed)
    : rho_(rho), rng_(seed) {
  check_rho(rho);
  if (rho > 1.0) {
    throw Error(ErrorCode::kRhoOutOfRange,
                "coin-flip probability " + std::to_string(rho) + " > 1");
  }
}

void RhoCoinFlipPolicy::requests(const StateView& view,
                                 std::span<std::int64_t> out) {
  for (std::size_t i = 0; i < view.sites.size(); ++i) {
    const bool heads = uniform01(rng_) < rho_;
    out[i] = heads ? static_cast<std::int64_t>(full_shipment_topup(
                         view.remainder[i], view.sites[i]))
                   : 0;
  }
}

void BacklogPolicy::requests(const StateView& view,
                             std::span<std::int64_t> out) {
  const std::size_t n = view.sites.size();
  if (unmet_.empty()) unmet_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (view.demand[i] > view.stock[i]) {
      unmet_[i] += view.demand[i] - view.stock[i];
    }
    const bool due = unmet_[i] > 0 &&
                     view.p * static_cast<double>(unmet_[i]) >= view.sites[i].w;
    out[i] = due ? static_cast<std::int64_t>(full_shipment_topup(
                       view.remainder[i], view.sites[i]))
                 : 0;
  }
}

void BacklogPolicy::notify_grants(std::span<const std::int64_t>,
                                  std::span<const Units> granted) {
  for (std::size_t i = 0; i < granted.size(); ++i) {
    if (granted[i] > 0) unmet_[i] = 0;
  }
}

}  // namespace ossa
