#include "dam/master.hpp"

#include <chrono>
#include <cmath>
#include <queue>

#include "clearing_model.hpp"
#include "dam/error.hpp"
#include "dam/presolve.hpp"
#include "dam/relaxation.hpp"

namespace dam {

namespace {

struct Node {
  std::size_t id = 0;
  double bound = 0.0;
  std::vector<signed char> fixed;  // -1 free, 0 or 1 fixed
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

}  // namespace

MasterResult solve_master(const Instance& instance, const CutPool& cuts, const MasterOptions& options) {
  validate_cuts(instance, cuts);
  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    if (!options.time_limit) return false;
    std::chrono::duration<double> used = std::chrono::steady_clock::now() - start;
    return used.count() > *options.time_limit;
  };

  auto model = detail::build_clearing_model(instance, nullptr);
  auto& base = model.problem;
  const std::size_t T = instance.hour_count();

  // Binary order: blocks, then flex bids hour by hour.
  std::vector<BinaryVar> binaries;
  std::vector<std::size_t> binary_col;
  for (std::size_t b = 0; b < instance.blocks().size(); ++b) {
    binaries.push_back(BinaryVar::block_var(b));
    binary_col.push_back(model.block_var[b]);
  }
  for (std::size_t f = 0; f < instance.flex_bids().size(); ++f) {
    for (std::size_t t = 0; t < T; ++t) {
      binaries.push_back(BinaryVar::flex_var(f, t));
      binary_col.push_back(model.flex_var(f, t));
    }
  }
  auto column_of = [&](const BinaryVar& v) {
    return v.kind == BinaryVar::Kind::block ? model.block_var[v.bid] : model.flex_var(v.bid, v.hour);
  };
  for (const auto& cut : cuts) {
    std::vector<qp::Term> row;
    const double sign = cut.sense == CutSense::less_equal ? 1.0 : -1.0;
    for (const auto& t : cut.terms) row.push_back({column_of(t.var), sign * t.coefficient});
    base.add_inequality(std::move(row), sign * cut.rhs);
  }

  std::vector<signed char> root_fixed(binaries.size(), -1);
  if (options.presolve) {
    auto fix = presolve_fixings(instance, presolve_price_bounds(instance));
    for (std::size_t i = 0; i < binaries.size(); ++i) {
      const auto& v = binaries[i];
      const bool excluded = v.kind == BinaryVar::Kind::block ? fix.block_excluded[v.bid] != 0
                                                             : fix.flex_excluded(v.bid, v.hour) != 0;
      if (excluded) root_fixed[i] = 0;
    }
  }

  MasterResult result;
  std::optional<double> incumbent_value;
  auto consider_selection = [&](const BidSelection& sel) {
    for (const auto& cut : cuts)
      if (!cut.satisfied_by(sel, 1e-9)) return;
    for (std::size_t i = 0; i < binaries.size(); ++i)
      if (root_fixed[i] == 0 && binaries[i].value(sel) > 0.5) return;
    auto relax = try_solve_relaxation(instance, sel);
    if (!relax) return;
    if (!incumbent_value || relax->objective > *incumbent_value + options.abs_gap) {
      incumbent_value = relax->objective;
      result.solution = relax->solution(sel);
    }
  };
  if (options.incumbent && options.incumbent->links_satisfied(instance)) consider_selection(*options.incumbent);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t next_id = 0;
  open.push({next_id++, qp::kInfinity, root_fixed});
  double pruned_bound = -qp::kInfinity;
  bool limited = false;

  while (!open.empty()) {
    if (out_of_time()) {
      limited = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (incumbent_value && node.bound <= *incumbent_value + options.abs_gap) {
      pruned_bound = std::max(pruned_bound, node.bound);
      continue;
    }
    ++result.nodes;
    qp::QpProblem qp = base;
    for (std::size_t i = 0; i < binaries.size(); ++i) {
      if (node.fixed[i] < 0) continue;
      qp.lower[binary_col[i]] = qp.upper[binary_col[i]] = node.fixed[i];
    }
    auto sol = qp::solve_qp(qp);
    if (sol.status == qp::QpStatus::infeasible) continue;
    if (sol.status != qp::QpStatus::optimal)
      throw Error(ErrorCode::IterationLimit, "node relaxation ended with status " + qp::to_string(sol.status));
    const double value = sol.objective;
    if (incumbent_value && value <= *incumbent_value + options.abs_gap) {
      pruned_bound = std::max(pruned_bound, value);
      continue;
    }

    std::size_t branch = npos;
    double best_frac = options.integrality_tol;
    for (std::size_t i = 0; i < binaries.size(); ++i) {
      const double x = sol.x[binary_col[i]];
      const double frac = std::min(x, 1.0 - x);
      if (frac > best_frac) {
        best_frac = frac;
        branch = i;
      }
    }
    if (branch == npos) {
      BidSelection sel = BidSelection::none(instance);
      for (std::size_t i = 0; i < binaries.size(); ++i) {
        if (sol.x[binary_col[i]] < 0.5) continue;
        const auto& v = binaries[i];
        if (v.kind == BinaryVar::Kind::block)
          sel.blocks[v.bid] = 1;
        else
          sel.flex_hours[v.bid] = v.hour;
      }
      const auto before = incumbent_value;
      consider_selection(sel);
      if (incumbent_value == before) pruned_bound = std::max(pruned_bound, value);
      continue;
    }
    for (signed char side : {0, 1}) {
      Node child{next_id++, value, node.fixed};
      child.fixed[branch] = side;
      open.push(std::move(child));
    }
  }

  if (!incumbent_value) {
    if (limited) throw Error(ErrorCode::TimeLimit, "time limit reached before a selection was found");
    throw Error(ErrorCode::Infeasible, "cuts exclude every bid selection");
  }
  result.objective = *incumbent_value;
  double bound = std::max(result.objective, pruned_bound);
  while (!open.empty()) {
    bound = std::max(bound, open.top().bound);
    open.pop();
  }
  result.dual_bound = bound;
  result.status = limited ? MasterStatus::limit : MasterStatus::optimal;
  return result;
}

}  // namespace dam
