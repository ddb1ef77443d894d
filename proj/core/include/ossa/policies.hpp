#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ossa/engine.hpp"
#include "ossa/model.hpp"

namespace ossa {

// Units needed to lift stock r back to at least b, in whole shipments of c.
// Zero when r >= b.
inline Units full_shipment_topup(Units r, const SiteSpec& site) {
  if (r >= site.b) return 0;
  return site.c * ceil_div(site.b - r, site.c);
}

// Threshold-proportional allocation. A site is eligible at step t when its
// post-demand stock is below b and L^{t-1} <= gamma * D^t; eligible sites ask
// for enough full shipments to get back to b.
class GpaPolicy : public Policy {
 public:
  explicit GpaPolicy(GammaVector gamma, std::string label = "gpa");

  std::string name() const override { return label_; }
  void requests(const StateView& view, std::span<std::int64_t> out) override;
  void notify_grants(std::span<const std::int64_t> requested,
                     std::span<const Units> granted) override;

  const GammaVector& gamma() const { return gamma_; }

 private:
  GammaVector gamma_;
  std::string label_;
  std::vector<Units> cum_granted_;
  std::vector<Units> cum_demand_;
};

// gamma_i = min{1, p c_i / (3 w_i)}, and 1 for free shipping.
GammaVector default_gamma(const Instance& instance);

// The single-site eligibility rule shared by GPA and its tests.
bool gpa_eligible(Units remainder, Units cum_granted_prev, Units cum_demand,
                  double gamma, const SiteSpec& site);

class NeverPolicy : public Policy {
 public:
  std::string name() const override { return "never"; }
  void requests(const StateView&, std::span<std::int64_t> out) override;
};

class AlwaysFillPolicy : public Policy {
 public:
  std::string name() const override { return "always-fill"; }
  void requests(const StateView& view, std::span<std::int64_t> out) override;
};

// GPA's cumulative-proportion test with a single known rho and no
// below-b trigger.
class RhoGreedyPolicy : public Policy {
 public:
  explicit RhoGreedyPolicy(double rho);

  std::string name() const override { return "rho-greedy"; }
  void requests(const StateView& view, std::span<std::int64_t> out) override;

  double rho() const { return rho_; }

 private:
  double rho_;
};

// Each site independently tops up with probability rho. One uniform draw per
// site per step, site-major, whether or not the site is below b.
class RhoCoinFlipPolicy : public Policy {
 public:
  RhoCoinFlipPolicy(double rho, std::uint64_t seed);

  std::string name() const override { return "rho-coinflip"; }
  void requests(const StateView& view, std::span<std::int64_t> out) override;

  double rho() const { return rho_; }

 private:
  double rho_;
  std::mt19937_64 rng_;
};

// Tops up once penalty-weighted unmet demand since the last successful
// resupply reaches the shipment cost: U_i > 0 and p * U_i >= w_i.
class BacklogPolicy : public Policy {
 public:
  std::string name() const override { return "backlog"; }
  void requests(const StateView& view, std::span<std::int64_t> out) override;
  void notify_grants(std::span<const std::int64_t> requested,
                     std::span<const Units> granted) override;

 private:
  std::vector<Units> unmet_;
};

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace ossa
