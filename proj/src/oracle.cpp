#include <algorithm>
#include <cmath>

#include "dam/driver.hpp"
#include "dam/error.hpp"
#include "dam/relaxation.hpp"
#include "dam/verify.hpp"
#include "dam/welfare.hpp"

namespace dam {

namespace {

// Calls `visit` for every link-consistent selection, blocks varying slowest.
template <class Visit>
void enumerate(const Instance& instance, Visit&& visit) {
  const std::size_t B = instance.blocks().size();
  const std::size_t F = instance.flex_bids().size();
  const std::size_t T = instance.hour_count();
  BidSelection sel = BidSelection::none(instance);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << B); ++mask) {
    for (std::size_t b = 0; b < B; ++b) sel.blocks[b] = (mask >> (B - 1 - b)) & 1u;
    if (!sel.links_satisfied(instance)) continue;
    // Flex choice per bid: none, hour 0, ..., hour T-1 (odometer).
    std::vector<std::size_t> digit(F, 0);
    while (true) {
      for (std::size_t f = 0; f < F; ++f)
        sel.flex_hours[f] = digit[f] == 0 ? std::nullopt : std::optional<std::size_t>(digit[f] - 1);
      visit(sel);
      std::size_t f = 0;
      for (; f < F; ++f) {
        if (++digit[F - 1 - f] <= T) break;
        digit[F - 1 - f] = 0;
      }
      if (f == F) break;
    }
  }
}

}  // namespace

OracleResult oracle_clear(const Instance& instance, const OracleOptions& options) {
  if (instance.binary_count() > options.max_binaries)
    throw Error(ErrorCode::TooLarge, std::to_string(instance.binary_count()) + " binary decisions exceed the cap of " +
                                         std::to_string(options.max_binaries));
  OracleResult out;
  struct Candidate {
    FrontierEntry entry;
    RelaxationOutcome relax;
  };
  std::vector<Candidate> candidates;
  enumerate(instance, [&](const BidSelection& sel) {
    ++out.selections;
    auto relax = try_solve_relaxation(instance, sel);
    if (!relax) return;
    candidates.push_back({{sel, relax->objective, FrontierStatus::unchecked}, std::move(*relax)});
  });
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.entry.welfare != b.entry.welfare) return a.entry.welfare > b.entry.welfare;
    return a.entry.selection < b.entry.selection;
  });

  std::optional<std::size_t> chosen;
  std::optional<SelectionCheck> chosen_check;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& c = candidates[i];
    if (chosen && c.entry.welfare < candidates[*chosen].entry.welfare - 1e-9) break;
    auto check = check_selection(instance, c.relax.solution(c.entry.selection));
    c.entry.status = !check.pricing            ? FrontierStatus::price_infeasible
                     : !check.curtailment.empty() ? FrontierStatus::curtailment
                                                  : FrontierStatus::feasible;
    if (c.entry.status != FrontierStatus::feasible) continue;
    if (!chosen || c.entry.selection < candidates[*chosen].entry.selection) {
      chosen = i;
      chosen_check = std::move(check);
    }
  }
  if (!chosen) throw Error(ErrorCode::Infeasible, "no price-feasible selection found");

  for (auto& c : candidates) out.frontier.push_back(std::move(c.entry));
  auto& r = out.result;
  r.mode = ClearingMode::oracle;
  r.status = ClearingStatus::optimal;
  r.solution = chosen_check->solution;
  auto clamped = clamp_prices(chosen_check->pricing->prices, instance);
  r.prices = clamped.prices;
  r.warnings = clamped.warnings;
  r.duals = chosen_check->pricing->duals;
  r.welfare = welfare(instance, r.solution);
  r.dual_bound = r.welfare;
  r.relative_gap = 0.0;
  r.prbs = list_prbs(instance, r.solution.selection, r.prices);
  return out;
}

}  // namespace dam
