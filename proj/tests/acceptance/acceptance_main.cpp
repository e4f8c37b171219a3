#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "dam/cli.hpp"
#include "dam/driver.hpp"
#include "dam/error.hpp"
#include "dam/master.hpp"
#include "dam/presolve.hpp"
#include "dam/pricing.hpp"
#include "dam/qp_engine.hpp"
#include "dam/relaxation.hpp"
#include "dam/verify.hpp"
#include "dam/welfare.hpp"
#include "support/brute_force.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dam;
using nlohmann::json;

namespace {

using Seconds = std::chrono::duration<double>;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return Seconds(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int n, const std::function<Verdict()>& criterion) {
  Verdict v;
  try {
    v = criterion();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %d: %s  %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str());
  std::fflush(stdout);
  failures += !v.pass;
}

BidSelection blocks_named(const Instance& inst, std::initializer_list<const char*> ids) {
  auto sel = BidSelection::none(inst);
  for (const char* id : ids) sel.blocks[*inst.find_block(id)] = 1;
  return sel;
}

bool prices_within(const Grid<PriceInterval>& bounds, const PriceVector& prices, double tol) {
  for (std::size_t a = 0; a < prices.rows(); ++a)
    for (std::size_t t = 0; t < prices.cols(); ++t)
      if (prices(a, t) < bounds(a, t).lower - tol || prices(a, t) > bounds(a, t).upper + tol) return false;
  return true;
}

Verdict four_bid_golden() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"clear", "--instance", std::string(DAM_DATA_DIR) + "/four_bid_book.json", "--mode", "exact"},
                            out, err);
  const double elapsed = seconds_since(start);
  if (code != 0) return {false, "exit code " + std::to_string(code) + ": " + err.str()};
  const auto doc = json::parse(out.str());
  const double w = doc["welfare"].get<double>();
  const double p = doc["prices"][0]["values"][0].get<double>();
  const bool ok = doc["selection"]["blocks"] == json::array({"c", "d"}) && std::abs(w - 2.0) <= 1e-9 &&
                  std::abs(p - 3.0) <= 1e-9 && elapsed < 1.0;
  return {ok, fmt("selection %s price %.12g welfare %.12g runtime %.3fs (tol 1e-9, < 1 s)",
                  doc["selection"]["blocks"].dump().c_str(), p, w, elapsed)};
}

Verdict four_bid_intermediate() {
  auto inst = Instance::build(testing::four_bid_book());
  auto master = solve_master(inst, {});
  const auto all = blocks_named(inst, {"a", "b", "c", "d"});
  const bool master_ok = master.solution.selection == all && std::abs(master.objective - 3.0) <= 1e-9;

  auto exact = clear_exact(inst);
  std::size_t cuts = 0;
  for (const auto& rec : exact.log) cuts += rec.cuts.size();

  auto relaxed = solve_relaxation(inst, all);
  auto priced = solve_qpprice(inst, solve_fixflow(inst, relaxed.solution(all)), true);
  return {master_ok && cuts > 0 && priced.total_loss > 0.0,
          fmt("master objective %.12g with %s; exact log %zu iterations, %zu cuts; relaxed total_loss %.6g",
              master.objective, master.solution.selection == all ? "{a,b,c,d}" : "another selection",
              exact.log.size(), cuts, priced.total_loss)};
}

struct SuiteStats {
  int instances = 0;
  int infeasible = 0;
  int mismatched = 0;       // exact vs oracle welfare or feasibility
  int checker_failures = 0;
  int heuristic_above = 0;  // heuristic welfare > exact + 1e-9
  int heuristic_optimal = 0;
  double gap_sum = 0.0;
  int presolve_bound_misses = 0;
  int presolve_welfare_changes = 0;
  double runtime = 0.0;
};

SuiteStats run_suite() {
  SuiteStats s;
  std::mt19937_64 rng(20240601);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 200; ++i) {
    auto inst = Instance::build(testing::random_market(rng));
    ++s.instances;
    std::optional<OracleResult> oracle;
    std::optional<ClearingResult> exact, heuristic, unpresolved;
    ClearingOptions no_presolve;
    no_presolve.presolve = false;
    int infeasible_modes = 0;
    auto attempt = [&](auto fn) {
      try {
        fn();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Infeasible) throw;
        ++infeasible_modes;
      }
    };
    attempt([&] { oracle = oracle_clear(inst); });
    attempt([&] { exact = clear_exact(inst); });
    attempt([&] { unpresolved = clear_exact(inst, no_presolve); });
    attempt([&] { heuristic = clear_heuristic(inst); });
    if (infeasible_modes == 4) {
      ++s.infeasible;
      continue;
    }
    if (infeasible_modes != 0) {
      ++s.mismatched;
      continue;
    }
    if (std::abs(exact->welfare - oracle->result.welfare) > 1e-7) ++s.mismatched;
    for (const ClearingResult* r : {&oracle->result, &*exact, &*heuristic, &*unpresolved})
      if (!check_all(inst, r->solution, r->prices, 1e-6).pass) ++s.checker_failures;
    if (heuristic->welfare > exact->welfare + 1e-9) ++s.heuristic_above;
    const double gap = std::max(0.0, exact->welfare - heuristic->welfare);
    if (gap <= 1e-9) ++s.heuristic_optimal;
    s.gap_sum += relative_gap(exact->welfare, heuristic->welfare);
    if (!prices_within(presolve_price_bounds(inst), oracle->result.prices, 1e-9)) ++s.presolve_bound_misses;
    if (std::abs(unpresolved->welfare - exact->welfare) > 1e-7) ++s.presolve_welfare_changes;
  }
  s.runtime = seconds_since(start);
  return s;
}

Verdict fixture_f3() {
  auto inst = Instance::build(testing::fixture_f3());
  auto oracle = oracle_clear(inst);
  const auto& r = oracle.result;
  const double rent = surplus_report(inst, r.solution, r.prices).congestion(0, 0);
  const double pr = r.prices(*inst.find_area("R"), 0), ps = r.prices(*inst.find_area("S"), 0);
  const double tau = r.solution.flows(0, 0);
  const bool ok = std::abs(pr - 10.0) <= 1e-6 && std::abs(ps - 40.0) <= 1e-6 && std::abs(tau - 20.0) <= 1e-6 &&
                  std::abs(rent - 600.0) <= 1e-6;
  return {ok, fmt("pi_R %.9g pi_S %.9g tau %.9g rent %.9g (tol 1e-6)", pr, ps, tau, rent)};
}

Verdict ramp_reflection() {
  auto inst = Instance::build(testing::ramp_fixture());
  auto r = clear_exact(inst);
  const std::size_t from = *inst.find_area("R"), to = *inst.find_area("S");
  const double d0 = r.prices(to, 0) - r.prices(from, 0);
  const double d1 = r.prices(to, 1) - r.prices(from, 1);
  const double step = std::abs(r.solution.flows(0, 1) - r.solution.flows(0, 0));
  const double rate = *inst.interconnectors()[0].ramp_rate;
  const bool binding = std::abs(step - rate) <= 1e-6;
  return {binding && std::abs(d0 + d1) <= 1e-6 && std::abs(d0) > 1e-6,
          fmt("spread t0 %.9g t1 %.9g, ramp step %.9g of %.9g (tol 1e-6)", d0, d1, step, rate)};
}

Verdict diamond_split() {
  auto inst = Instance::build(testing::diamond_fixture());
  const auto none = BidSelection::none(inst);
  auto sol = solve_relaxation(inst, none).solution(none);
  const auto ab = *inst.find_interconnector("AB"), bd = *inst.find_interconnector("BD");
  const auto ac = *inst.find_interconnector("AC"), cd = *inst.find_interconnector("CD");
  auto skewed = sol;
  skewed.flows(ab, 0) = skewed.flows(bd, 0) = 100.0;
  skewed.flows(ac, 0) = skewed.flows(cd, 0) = 0.0;
  double worst_split = 0.0, worst_welfare = 0.0;
  for (const auto* input : {&sol, &skewed}) {
    const auto fixed = solve_fixflow(inst, *input);
    worst_split = std::max({worst_split, std::abs(fixed.flows(ab, 0) - fixed.flows(ac, 0)),
                            std::abs(fixed.flows(bd, 0) - fixed.flows(cd, 0)), std::abs(fixed.flows(ab, 0) - 50.0)});
    worst_welfare = std::max(worst_welfare, std::abs(welfare(inst, fixed) - welfare(inst, *input)));
  }
  return {worst_split <= 1e-6 && worst_welfare <= 1e-9,
          fmt("route imbalance %.3g (tol 1e-6), welfare change %.3g (tol 1e-9)", worst_split, worst_welfare)};
}

Verdict checker_agreement() {
  std::mt19937_64 rng(41);
  int filling_agree = 0, filling_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = testing::random_filling_sample(rng);
    const bool a = check_filling(s.instance, s.delta, s.prices, 1e-6, FillingMode::case_rule).pass;
    const bool b = check_filling(s.instance, s.delta, s.prices, 1e-6, FillingMode::kkt).pass;
    filling_agree += a == b;
    filling_fail += !a;
  }
  std::mt19937_64 flow_rng(43);
  int flow_agree = 0, flow_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = testing::random_flow_sample(flow_rng);
    const bool a = check_flow_price(s.instance, s.flows, s.prices, 1e-6, FlowPriceMode::general).pass;
    const bool b = check_flow_price(s.instance, s.flows, s.prices, 1e-6, FlowPriceMode::fast_path).pass;
    flow_agree += a == b;
    flow_fail += !a;
  }
  return {filling_agree == 1000 && flow_agree == 1000,
          fmt("filling %d/1000 agree (%d rejected), flow price %d/1000 agree (%d rejected)", filling_agree,
              filling_fail, flow_agree, flow_fail)};
}

Verdict qp_suite() {
  std::mt19937_64 rng(42);
  int kkt_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    auto p = testing::random_qp(rng);
    auto s = qp::solve_qp(p);
    kkt_ok += s.status == qp::QpStatus::optimal && qp::check_kkt(p, s, 1e-8).pass;
  }
  std::mt19937_64 grid_rng(43);
  testing::QpShape shape;
  shape.max_variables = 3;
  shape.equalities = false;
  shape.finite_bounds = true;
  shape.box = 3.0;
  int grid_ok = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto p = testing::random_qp(grid_rng, shape);
    auto s = qp::solve_qp(p);
    const double grid = testing::grid_search(p);
    worst = std::max(worst, std::abs(s.objective - grid));
    grid_ok += s.status == qp::QpStatus::optimal && grid <= s.objective + 1e-9 && s.objective - grid <= 1e-4;
  }
  std::mt19937_64 rerun_rng(44);
  int identical = 0;
  for (int i = 0; i < 200; ++i) {
    auto p = testing::random_qp(rerun_rng);
    auto a = qp::solve_qp(p), b = qp::solve_qp(p);
    identical += a.x.size() == b.x.size() && std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0 &&
                 a.equality_multipliers == b.equality_multipliers &&
                 a.inequality_multipliers == b.inequality_multipliers &&
                 a.bound_lower_multipliers == b.bound_lower_multipliers &&
                 a.bound_upper_multipliers == b.bound_upper_multipliers;
  }
  return {kkt_ok == 1000 && grid_ok == 200 && identical == 200,
          fmt("KKT %d/1000 (tol 1e-8), grid search %d/200 (worst %.2g, tol 1e-4), bit-identical %d/200", kkt_ok,
              grid_ok, worst, identical)};
}

}  // namespace

int main() {
  report(1, four_bid_golden);
  report(2, four_bid_intermediate);

  SuiteStats suite;
  std::string suite_error;
  try {
    suite = run_suite();
  } catch (const std::exception& e) {
    suite_error = e.what();
  }
  const int cleared = suite.instances - suite.infeasible;
  report(3, [&]() -> Verdict {
    if (!suite_error.empty()) return {false, "exception: " + suite_error};
    return {suite.instances == 200 && suite.mismatched == 0 && suite.checker_failures == 0 && suite.runtime < 300.0,
            fmt("%d instances, %d without equilibrium in every mode, %d welfare mismatches (tol 1e-7), %d checker "
                "failures (tol 1e-6), %.1fs (< 300 s)",
                suite.instances, suite.infeasible, suite.mismatched, suite.checker_failures, suite.runtime)};
  });
  report(4, [&]() -> Verdict {
    if (!suite_error.empty()) return {false, "exception: " + suite_error};
    return {suite.heuristic_above == 0 && cleared > 0,
            fmt("%d above exact (tol 1e-9); heuristic optimal on %d/%d, mean relative gap %.3g", suite.heuristic_above,
                suite.heuristic_optimal, cleared, cleared > 0 ? suite.gap_sum / cleared : 0.0)};
  });
  report(5, fixture_f3);
  report(6, ramp_reflection);
  report(7, diamond_split);
  report(8, checker_agreement);
  report(9, qp_suite);
  report(10, [&]() -> Verdict {
    if (!suite_error.empty()) return {false, "exception: " + suite_error};
    return {suite.presolve_bound_misses == 0 && suite.presolve_welfare_changes == 0,
            fmt("oracle prices outside bounds on %d/%d, welfare changed by fixings on %d/%d (tol 1e-7)",
                suite.presolve_bound_misses, cleared, suite.presolve_welfare_changes, cleared)};
  });
  return failures == 0 ? 0 : 1;
}
