#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ossa/engine.hpp"
#include "ossa/error.hpp"
#include "ossa/policies.hpp"
#include "reference.hpp"

namespace ossa {
namespace {

Instance single_site(double w, Units c, Units b, std::vector<Units> demand,
                     Units s = 1000) {
  RawInstance raw;
  raw.p = 1.0;
  raw.s = s;
  raw.sites = {{1, w, c, b}};
  raw.demand = {std::move(demand)};
  return validate(raw);
}

TEST(AlwaysFillTest, TopsUpInFullShipments) {
  const Instance inst = single_site(1.0, 10, 5, {2});
  AlwaysFillPolicy fill;
  const Trace trace = run(inst, fill);
  EXPECT_EQ(trace.at(0, 0).request, 10u);
  EXPECT_EQ(trace.at(0, 0).stock_after, 13u);
}

TEST(BacklogTest, WaitsUntilUnmetCostReachesShipmentCost) {
  // p = 1, w = 3: unmet 1, 1, 1 after an initial drain.
  const Instance inst = single_site(3.0, 3, 3, {3, 1, 1, 1, 0});
  BacklogPolicy backlog;
  const Trace trace = run(inst, backlog);
  EXPECT_EQ(trace.at(0, 0).request, 0u);
  EXPECT_EQ(trace.at(1, 0).request, 0u);
  EXPECT_EQ(trace.at(2, 0).request, 0u);
  EXPECT_EQ(trace.at(3, 0).request, 3u);
  EXPECT_EQ(trace.at(3, 0).grant, 3u);
  // Accumulator reset after the grant; no shortfall at t = 5.
  EXPECT_EQ(trace.at(4, 0).request, 0u);
}

TEST(BacklogTest, FreeShippingRequestsOnFirstShortfall) {
  const Instance inst = single_site(0.0, 2, 2, {2, 2, 0});
  BacklogPolicy backlog;
  const Trace trace = run(inst, backlog);
  EXPECT_EQ(trace.at(0, 0).request, 0u);
  EXPECT_EQ(trace.at(1, 0).request, 2u);
}

TEST(BacklogTest, NeverShortNeverRequests) {
  const Instance inst = single_site(0.5, 1, 2, {1, 0, 1, 0});
  BacklogPolicy backlog;
  const Trace trace = run(inst, backlog);
  EXPECT_EQ(trace.total_transport, 0.0);
}

TEST(RhoPolicyTest, ParameterChecks) {
  EXPECT_THROW(RhoGreedyPolicy(-0.1), Error);
  EXPECT_NO_THROW(RhoGreedyPolicy(1.5));
  EXPECT_THROW(RhoCoinFlipPolicy(1.2, 0), Error);
  try {
    RhoCoinFlipPolicy(-1.0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRhoOutOfRange);
  }
}

TEST(RhoPolicyTest, CoinFlipExtremes) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    const Instance inst = validate(ref::random_raw(rng, {6, 40, 8, 8, 0, 0}));
    RhoCoinFlipPolicy heads(1.0, k), tails(0.0, k);
    AlwaysFillPolicy fill;
    NeverPolicy never;
    const Trace a = run(inst, heads), b = run(inst, fill);
    const Trace c = run(inst, tails), d = run(inst, never);
    EXPECT_EQ(a.total, b.total);
    EXPECT_EQ(a.supply_end, b.supply_end);
    EXPECT_EQ(c.total, d.total);
  }
}

TEST(RhoPolicyTest, CoinFlipSeedDeterminesDraws) {
  std::mt19937_64 rng(4);
  const Instance inst = validate(ref::random_raw(rng, {8, 100, 8, 8, 0, 0}));
  RhoCoinFlipPolicy a(0.5, 1), b(0.5, 1), c(0.5, 2);
  const Trace ta = run(inst, a), tb = run(inst, b), tc = run(inst, c);
  EXPECT_EQ(ta, tb);
  EXPECT_FALSE(ta == tc);
}

TEST(GpaTest, FullShipmentProperty) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    const Instance inst = validate(ref::random_raw(rng, {}));
    GpaPolicy gpa(default_gamma(inst));
    const Trace trace = run(inst, gpa);
    for (std::size_t t = 0; t < inst.horizon(); ++t) {
      for (std::size_t i = 0; i < inst.num_sites(); ++i) {
        ASSERT_EQ(trace.at(t, i).request % inst.site(i).c, 0u);
      }
    }
  }
}

TEST(GpaTest, FullThresholdWithAmpleSupplyNeverLosesDemand) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    RawInstance raw = ref::random_raw(rng, {});
    Units total = 0;
    for (const auto& row : raw.demand) {
      for (Units d : row) total += d;
    }
    // With gamma = 1 a site never receives more than D + b + c.
    for (const auto& site : raw.sites) total += site.b + site.c;
    raw.s = total;
    const Instance inst = validate(raw);
    GpaPolicy gpa(GammaVector{std::vector<double>(inst.num_sites(), 1.0)});
    EXPECT_EQ(run(inst, gpa).total_penalty, 0.0);
  }
}

TEST(GpaTest, EligibilityRule) {
  const SiteSpec site{1, 0.5, 2, 4};
  EXPECT_TRUE(gpa_eligible(3, 2, 4, 0.5, site));
  EXPECT_FALSE(gpa_eligible(4, 0, 4, 0.5, site));  // r = b
  EXPECT_FALSE(gpa_eligible(0, 3, 4, 0.5, site));  // L > gamma D
  EXPECT_EQ(full_shipment_topup(3, site), 2u);
  EXPECT_EQ(full_shipment_topup(0, site), 4u);
  EXPECT_EQ(full_shipment_topup(1, site), 4u);
}

TEST(GpaTest, RejectsBadGamma) {
  EXPECT_THROW(GpaPolicy(GammaVector{{1.2}}), Error);
  const Instance e = fixtures::instance_e();
  GpaPolicy wrong_size(GammaVector{{0.5}});
  EXPECT_THROW(run(e, wrong_size), Error);
}

}  // namespace
}  // namespace ossa
