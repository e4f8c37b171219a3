#include <doctest.h>

#include <random>

#include "dam/driver.hpp"
#include "dam/error.hpp"
#include "dam/presolve.hpp"
#include "dam/verify.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dam;

TEST_CASE("without bids the bounds are the curve's zero crossing") {
  auto inst = Instance::build(testing::fixture_f3());
  auto bounds = presolve_price_bounds(inst);
  // No bids: each area may still trade up to the line capacity.
  CHECK(bounds(0, 0).contains(10.0));
  CHECK(bounds(1, 0).contains(40.0));

  InstanceData d;
  d.price_interval = {0, 100};
  d.areas = {{"X", std::nullopt}};
  d.curves = {{"X", 0, {{0, 30}, {60, -30}, {100, -40}}}};
  auto single = Instance::build(d);
  auto b = presolve_price_bounds(single);
  CHECK(b(0, 0).lower == doctest::Approx(30.0));
  CHECK(b(0, 0).upper == doctest::Approx(30.0));
}

TEST_CASE("four-bid book bounds contain every clearing price of a feasible selection") {
  auto inst = Instance::build(testing::four_bid_book());
  auto bounds = presolve_price_bounds(inst);
  CHECK(bounds(0, 0).contains(PriceInterval{1.0, 4.0}));
  auto r = clear_exact(inst);
  CHECK(bounds(0, 0).contains(r.prices(0, 0)));
}

TEST_CASE("blocks that lose at every admissible price are fixed out") {
  InstanceData d;
  d.price_interval = {0, 100};
  d.areas = {{"X", std::nullopt}};
  d.curves = {{"X", 0, {{0, 30}, {60, -30}, {100, -40}}}};
  d.blocks = {{"cheap_demand", "X", 5.0, {1.0}}, {"dear_supply", "X", 90.0, {-1.0}}, {"fine", "X", 50.0, {1.0}}};
  auto inst = Instance::build(d);
  auto fix = presolve_fixings(inst, presolve_price_bounds(inst));
  CHECK(fix.block_excluded[0] == 1);
  CHECK(fix.block_excluded[1] == 1);
  CHECK(fix.block_excluded[2] == 0);
  CHECK(fix.excluded_count() == 2);
}

TEST_CASE("property: bounds are sound and fixings keep the optimum") {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = Instance::build(testing::random_market(rng));
    OracleResult oracle;
    try {
      oracle = oracle_clear(inst);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::Infeasible);
      continue;
    }
    ++checked;
    auto bounds = presolve_price_bounds(inst);
    for (std::size_t a = 0; a < inst.areas().size(); ++a)
      for (std::size_t t = 0; t < inst.hour_count(); ++t) CHECK(bounds(a, t).contains(oracle.result.prices(a, t), 1e-7));
    ClearingOptions off;
    off.presolve = false;
    CHECK(clear_exact(inst).welfare == doctest::Approx(clear_exact(inst, off).welfare).epsilon(1e-9));
  }
  CHECK(checked > 40);
}
