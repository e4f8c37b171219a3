#include "dam/driver.hpp"

#include <chrono>
#include <cmath>

#include "dam/error.hpp"
#include "dam/master.hpp"
#include "dam/relaxation.hpp"
#include "dam/verify.hpp"
#include "dam/welfare.hpp"

namespace dam {

namespace {

class Clock {
 public:
  explicit Clock(std::optional<double> limit) : limit_(limit), start_(std::chrono::steady_clock::now()) {}
  std::optional<double> remaining() const {
    if (!limit_) return std::nullopt;
    std::chrono::duration<double> used = std::chrono::steady_clock::now() - start_;
    return std::max(0.0, *limit_ - used.count());
  }
  bool expired() const { return limit_ && *remaining() <= 0.0; }

 private:
  std::optional<double> limit_;
  std::chrono::steady_clock::time_point start_;
};

// Fills prices, welfare, PRBs and warnings for a priced selection.
void finish(const Instance& instance, const SelectionCheck& check, ClearingResult& result) {
  result.solution = check.solution;
  auto clamped = clamp_prices(check.pricing->prices, instance);
  result.prices = clamped.prices;
  result.duals = check.pricing->duals;
  result.warnings.insert(result.warnings.end(), clamped.warnings.begin(), clamped.warnings.end());
  result.welfare = welfare(instance, result.solution);
  result.prbs = list_prbs(instance, result.solution.selection, result.prices);
}

SelectionCheck empty_selection(const Instance& instance) {
  auto relax = solve_relaxation(instance, BidSelection::none(instance));
  auto check = check_selection(instance, relax.solution(BidSelection::none(instance)));
  if (!check.pricing) throw Error(ErrorCode::Infeasible, "no prices support the empty selection");
  return check;
}

}  // namespace

SelectionCheck check_selection(const Instance& instance, const PrimalSolution& relaxed) {
  SelectionCheck out;
  out.solution = solve_fixflow(instance, relaxed);
  try {
    out.pricing = solve_qpprice(instance, out.solution, false);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Infeasible) throw;
  }
  out.curtailment = curtailment_violations(instance, out.solution);
  return out;
}

ClearingResult clear_heuristic(const Instance& instance, const ClearingOptions& options) {
  Clock clock(options.time_limit);
  const std::size_t bids = instance.blocks().size() + instance.flex_bids().size();
  const std::size_t limit = options.iteration_limit.value_or(std::max<std::size_t>(10, 10 * bids));

  ClearingResult result;
  result.mode = ClearingMode::heuristic;
  CutPool cuts;
  std::optional<double> bound;
  for (std::size_t it = 0; it < limit; ++it) {
    if (clock.expired()) {
      result.status = ClearingStatus::limit;
      break;
    }
    MasterOptions mo;
    mo.abs_gap = options.abs_gap;
    mo.time_limit = clock.remaining();
    mo.presolve = options.presolve;
    MasterResult master;
    try {
      master = solve_master(instance, cuts, mo);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TimeLimit) throw;
      result.status = ClearingStatus::limit;
      break;
    }
    if (!bound) bound = master.status == MasterStatus::optimal ? master.objective : master.dual_bound;

    IterationRecord rec;
    rec.master_objective = master.objective;
    rec.selection = master.solution.selection;
    auto fixed = solve_fixflow(instance, master.solution);
    auto relaxed = solve_qpprice(instance, fixed, true);
    rec.losses = loss_sets(instance, fixed.selection, relaxed.prices);
    auto curtail = curtailment_violations(instance, fixed);
    rec.curtailment_violations = curtail.size();

    std::optional<SelectionCheck> strict;
    if (rec.losses.empty() || relaxed.total_loss <= 1e-6) {
      auto check = check_selection(instance, master.solution);
      if (check.pricing) {
        rec.losses = {};
        strict = std::move(check);
      }
    }
    if (strict && curtail.empty()) {
      result.log.push_back(std::move(rec));
      finish(instance, *strict, result);
      result.status = master.status == MasterStatus::optimal ? ClearingStatus::converged : ClearingStatus::limit;
      result.dual_bound = std::max(*bound, result.welfare);
      result.relative_gap = relative_gap(result.dual_bound, result.welfare);
      return result;
    }
    if (!rec.losses.empty()) {
      cuts.push_back(bid_cut(rec.losses));
      rec.cuts.push_back(cuts.back().describe(instance));
    }
    if (!curtail.empty()) {
      cuts.push_back(curtailment_cut(instance, fixed.selection, curtail));
      rec.cuts.push_back(cuts.back().describe(instance));
      result.curtailment_cuts_fired = true;
    }
    if (rec.cuts.empty()) {
      // Losses vanished only under strict pricing yet curtailment is fine; cannot happen
      // without numerical trouble, so exclude the selection outright.
      cuts.push_back(no_good_cut(instance, fixed.selection));
      rec.cuts.push_back(cuts.back().describe(instance));
    }
    result.log.push_back(std::move(rec));
    if (master.status == MasterStatus::limit) {
      result.status = ClearingStatus::limit;
      break;
    }
  }
  result.status = ClearingStatus::limit;
  result.warnings.push_back("iteration or time limit reached; reporting the empty selection");
  finish(instance, empty_selection(instance), result);
  result.dual_bound = std::max(bound.value_or(result.welfare), result.welfare);
  result.relative_gap = relative_gap(result.dual_bound, result.welfare);
  return result;
}

ClearingResult clear_exact(const Instance& instance, const ClearingOptions& options) {
  Clock clock(options.time_limit);
  ClearingResult best = clear_heuristic(instance, options);
  ClearingResult result = best;
  result.mode = ClearingMode::exact;

  CutPool cuts;
  const BidSelection incumbent = best.solution.selection;
  double bound = best.dual_bound;
  while (true) {
    if (clock.expired()) {
      result.status = ClearingStatus::limit;
      result.dual_bound = std::max(bound, result.welfare);
      result.relative_gap = relative_gap(result.dual_bound, result.welfare);
      return result;
    }
    MasterOptions mo;
    mo.abs_gap = options.abs_gap;
    mo.time_limit = clock.remaining();
    mo.presolve = options.presolve;
    mo.incumbent = incumbent;
    auto master = solve_master(instance, cuts, mo);
    bound = master.dual_bound;

    IterationRecord rec;
    rec.master_objective = master.objective;
    rec.selection = master.solution.selection;
    if (master.status == MasterStatus::limit) {
      result.log.push_back(std::move(rec));
      result.status = ClearingStatus::limit;
      result.dual_bound = std::max(bound, result.welfare);
      result.relative_gap = relative_gap(result.dual_bound, result.welfare);
      return result;
    }
    const BidSelection& sel = master.solution.selection;
    if (sel == incumbent) {
      result.log.push_back(std::move(rec));
      result.status = ClearingStatus::optimal;
      result.dual_bound = std::max(master.objective, result.welfare);
      result.relative_gap = relative_gap(result.dual_bound, result.welfare);
      return result;
    }
    auto check = check_selection(instance, master.solution);
    if (check.feasible()) {
      result.log.push_back(std::move(rec));
      result.warnings.clear();
      finish(instance, check, result);
      result.status = ClearingStatus::optimal;
      result.dual_bound = std::max(master.objective, result.welfare);
      result.relative_gap = relative_gap(result.dual_bound, result.welfare);
      return result;
    }
    if (check.pricing) {
      rec.curtailment_violations = check.curtailment.size();
      cuts.push_back(no_good_cut(instance, sel, CutKind::curtailment));
    } else {
      auto relaxed = solve_qpprice(instance, check.solution, true);
      rec.losses = loss_sets(instance, sel, relaxed.prices);
      rec.curtailment_violations = check.curtailment.size();
      cuts.push_back(no_good_cut(instance, sel));
    }
    rec.cuts.push_back(cuts.back().describe(instance));
    result.log.push_back(std::move(rec));
  }
}

ClearingResult clear(const Instance& instance, ClearingMode mode, const ClearingOptions& options) {
  switch (mode) {
    case ClearingMode::heuristic: return clear_heuristic(instance, options);
    case ClearingMode::exact: return clear_exact(instance, options);
    case ClearingMode::oracle: return oracle_clear(instance).result;
  }
  throw Error(ErrorCode::ValidationError, "unknown clearing mode");
}

}  // namespace dam
