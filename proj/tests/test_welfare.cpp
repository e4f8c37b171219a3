#include <doctest.h>

#include <random>

#include "dam/relaxation.hpp"
#include "dam/verify.hpp"
#include "dam/welfare.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dam;

namespace {

BidSelection pick_blocks(const Instance& inst, std::initializer_list<const char*> ids) {
  auto sel = BidSelection::none(inst);
  for (const char* id : ids) sel.blocks[*inst.find_block(id)] = 1;
  return sel;
}

// Midpoint-rule integral of dq * p(z) over [0, fill].
double quadrature(const NetCurveSegment& s, double fill) {
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += s.price_at((i + 0.5) * fill / n);
  return s.quantity_span * sum * fill / n;
}

}  // namespace

TEST_CASE("empty execution has zero welfare") {
  auto inst = Instance::build(testing::four_bid_book());
  auto sel = BidSelection::none(inst);
  std::vector<double> delta(inst.segment_count(), 0.0);
  CHECK(welfare(inst, delta, sel) == 0.0);
}

TEST_CASE("all four blocks of the four-bid book give objective 3") {
  auto inst = Instance::build(testing::four_bid_book());
  std::vector<double> delta(inst.segment_count(), 0.0);
  CHECK(welfare(inst, delta, pick_blocks(inst, {"a", "b", "c", "d"})) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("segment integral matches quadrature") {
  InstanceData d;
  d.price_interval = {10.0, 30.0};
  d.areas = {{"X", std::nullopt}};
  d.curves = {{"X", 0, {{10.0, 5.0}, {30.0, 0.0}}}};
  auto inst = Instance::build(d);
  REQUIRE(inst.segment_count() == 1);
  const auto& s = inst.segment(0);
  CHECK(s.base_price == 10.0);
  CHECK(s.price_span == 20.0);
  CHECK(s.quantity_span == 5.0);
  std::vector<double> delta{0.5};
  const double expected = quadrature(s, 0.5);
  CHECK(expected == doctest::Approx(62.5).epsilon(1e-9));
  CHECK(welfare(inst, delta, BidSelection::none(inst)) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("surplus split on the four-bid book at price 3") {
  auto inst = Instance::build(testing::four_bid_book());
  auto sel = pick_blocks(inst, {"c", "d"});
  auto r = solve_relaxation(inst, sel);
  PriceVector prices(1, 1, 3.0);
  auto report = surplus_report(inst, r.solution(sel), prices);
  CHECK(report.blocks[*inst.find_block("c")] == doctest::Approx(0.0));
  CHECK(report.blocks[*inst.find_block("d")] == doctest::Approx(2.0));
  CHECK(report.total - report.constant_offset == doctest::Approx(2.0));
}

TEST_CASE("zero execution has zero surplus at any price") {
  auto inst = Instance::build(testing::four_bid_book());
  auto sel = BidSelection::none(inst);
  PrimalSolution sol{sel, std::vector<double>(inst.segment_count(), 0.0), FlowMatrix(0, 1)};
  for (double p : {-3000.0, 0.0, 17.0}) {
    auto report = surplus_report(inst, sol, PriceVector(1, 1, p));
    for (double w : report.blocks) CHECK(w == 0.0);
    CHECK(report.total - report.constant_offset == doctest::Approx(0.0));
  }
}

TEST_CASE("congestion rent on the congested two-area fixture") {
  auto inst = Instance::build(testing::fixture_f3());
  auto oracle = oracle_clear(inst);
  auto report = surplus_report(inst, oracle.result.solution, oracle.result.prices);
  CHECK(report.congestion(0, 0) == doctest::Approx(600.0).epsilon(1e-9));
}

TEST_CASE("big-M of a block is its worst surplus over the interval") {
  PriceInterval P{-3000, 3000};
  CHECK(big_m(BlockBid{"b", 0, 2.0, {1.0}}, P) == doctest::Approx(-2998.0));
  CHECK(big_m(BlockBid{"z", 0, 2.0, {0.0, 0.0}}, P) == 0.0);
  // Supply at the top of the interval loses everything when the price falls to the bottom.
  CHECK(big_m(BlockBid{"s", 0, 3000.0, {-1.0}}, P) == doctest::Approx(-6000.0));
  CHECK(big_m(FlexBid{"f", 0, 5.0, 2.0}, P) == doctest::Approx(2.0 * (5.0 - 3000.0)));
}

TEST_CASE("property: surplus identity and big-M bounds on random books") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    auto inst = Instance::build(testing::random_market(rng));
    const auto& P = inst.price_interval();
    std::uniform_real_distribution<double> price(P.lower, P.upper);
    for (const auto& b : inst.blocks()) {
      const double m = big_m(b, P);
      CHECK(m <= 0.0);
      std::vector<double> pi(inst.hour_count());
      for (int k = 0; k < 20; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t < inst.hour_count(); ++t) s += (b.limit_price - price(rng)) * b.quantities[t];
        CHECK(s >= m - 1e-9);
      }
    }
    auto sel = BidSelection::none(inst);
    auto r = try_solve_relaxation(inst, sel);
    if (!r) continue;
    auto sol = r->solution(sel);
    PriceVector random_prices(inst.areas().size(), inst.hour_count());
    for (auto& p : random_prices.values()) p = price(rng);
    for (const PriceVector* prices : {&r->prices, &random_prices}) {
      auto report = surplus_report(inst, sol, *prices);
      CHECK(report.total - report.constant_offset == doctest::Approx(welfare(inst, sol)).epsilon(1e-9));
    }
  }
}
