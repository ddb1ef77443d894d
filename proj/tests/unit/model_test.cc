#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ossa/error.hpp"
#include "ossa/model.hpp"
#include "reference.hpp"

namespace ossa {
namespace {

ErrorCode code_of(const RawInstance& raw) {
  try {
    validate(raw);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "validate accepted the instance";
  return ErrorCode::kIo;
}

TEST(ValidateTest, SortsByUnitCostThenId) {
  RawInstance raw;
  raw.p = 1.0;
  raw.sites = {{5, 0.5, 1, 1}, {3, 1.0, 2, 1}, {4, 0.25, 1, 1}};
  raw.demand = {{1}, {0}, {1}};
  const Instance inst = validate(raw);
  ASSERT_EQ(inst.num_sites(), 3u);
  EXPECT_EQ(inst.site(0).site_id, 4);
  // 0.5/1 == 1.0/2: tie broken by id.
  EXPECT_EQ(inst.site(1).site_id, 3);
  EXPECT_EQ(inst.site(2).site_id, 5);
  EXPECT_EQ(inst.demand(0, 0), 1u);
  EXPECT_EQ(inst.demand(1, 0), 0u);
  EXPECT_EQ(inst.horizon(), 1u);
}

TEST(ValidateTest, InstanceEDerivedQuantities) {
  const Instance e = fixtures::instance_e();
  EXPECT_EQ(e.total_demand(0), 3u);
  EXPECT_EQ(e.total_demand(1), 2u);
  EXPECT_EQ(e.total_demand(), 5u);
  EXPECT_EQ(e.total_bound(), 2u);
  EXPECT_EQ(e.supply(), 3u);
}

TEST(ValidateTest, RejectsZeroCapacity) {
  RawInstance raw = fixtures::instance_e_raw();
  raw.sites[0].c = 0;
  EXPECT_EQ(code_of(raw), ErrorCode::kCapacityZero);
}

TEST(ValidateTest, RejectsDemandAboveBound) {
  RawInstance raw = fixtures::instance_e_raw();
  raw.demand[1][2] = 2;
  try {
    validate(raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDemandBoundViolated);
    EXPECT_NE(std::string(e.what()).find("site 2 step 3"), std::string::npos);
  }
}

TEST(ValidateTest, RejectsPenaltyDominated) {
  RawInstance raw = fixtures::instance_e_raw();
  raw.sites[1].w = 1.5;
  EXPECT_EQ(code_of(raw), ErrorCode::kPenaltyDominated);
}

TEST(ValidateTest, AcceptsShipmentCostEqualToPenaltyTimesCapacity) {
  RawInstance raw = fixtures::instance_e_raw();
  raw.sites[1].w = 1.0;
  EXPECT_NO_THROW(validate(raw));
}

TEST(ValidateTest, RejectsStructuralProblems) {
  RawInstance raw = fixtures::instance_e_raw();
  raw.sites[1].site_id = 1;
  EXPECT_EQ(code_of(raw), ErrorCode::kInvalidInstance);

  raw = fixtures::instance_e_raw();
  raw.sites[0].b = 0;
  raw.demand[0] = {0, 0, 0};
  EXPECT_EQ(code_of(raw), ErrorCode::kInvalidInstance);

  raw = fixtures::instance_e_raw();
  raw.demand[1].pop_back();
  EXPECT_EQ(code_of(raw), ErrorCode::kInvalidInstance);

  raw = fixtures::instance_e_raw();
  raw.demand.pop_back();
  EXPECT_EQ(code_of(raw), ErrorCode::kInvalidInstance);

  raw = fixtures::instance_e_raw();
  raw.p = -1.0;
  EXPECT_EQ(code_of(raw), ErrorCode::kInvalidInstance);

  raw = fixtures::instance_e_raw();
  raw.sites[0].w = -0.1;
  EXPECT_EQ(code_of(raw), ErrorCode::kInvalidInstance);
}

TEST(ValidateTest, EmptyHorizonIsAllowed) {
  RawInstance raw;
  raw.p = 1.0;
  raw.s = 4;
  raw.sites = {{1, 0.5, 1, 1}};
  raw.demand = {{}};
  const Instance inst = validate(raw);
  EXPECT_EQ(inst.horizon(), 0u);
  EXPECT_EQ(inst.total_demand(), 0u);
}

TEST(ValidateTest, IdempotentOnRandomInstances) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const RawInstance raw = ref::random_raw(rng, {});
    const Instance once = validate(raw);
    const Instance twice = validate(once.to_raw());
    EXPECT_EQ(once, twice);
    const auto perm = ref::order(raw);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      EXPECT_EQ(once.site(i), raw.sites[perm[i]]);
    }
  }
}

TEST(InstanceTest, WithSupplySharesEverythingElse) {
  const Instance e = fixtures::instance_e();
  const Instance more = e.with_supply(100);
  EXPECT_EQ(more.supply(), 100u);
  EXPECT_EQ(e.supply(), 3u);
  EXPECT_EQ(more.sites(), e.sites());
  EXPECT_EQ(more.demand_row(1).data(), e.demand_row(1).data());
  EXPECT_FALSE(more == e);
  EXPECT_EQ(more.with_supply(3), e);
}

TEST(GammaTest, CappedBand) {
  const SiteSpec free_site{1, 0.0, 4, 1};
  EXPECT_EQ(capped_band(0.01, 1.0, free_site), 1.0);
  const SiteSpec site{2, 0.5, 1, 1};
  EXPECT_DOUBLE_EQ(capped_band(1.0 / 3.0, 1.0, site), 2.0 / 3.0);
  EXPECT_EQ(capped_band(1.0, 1.0, site), 1.0);
}

TEST(GammaTest, CheckRange) {
  EXPECT_NO_THROW((GammaVector{{0.0, 0.5, 1.0}}.check()));
  try {
    GammaVector{{0.5, 1.5}}.check();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParameterRange);
  }
}

TEST(ErrorTest, MessageCarriesCodeName) {
  const Error e(ErrorCode::kAccountingMismatch, "detail");
  EXPECT_EQ(std::string(e.what()), "AccountingMismatch: detail");
  EXPECT_EQ(to_string(ErrorCode::kOddN), "OddN");
}

}  // namespace
}  // namespace ossa
