#pragma once

#include <string>
#include <vector>

#include "dam/instance.hpp"

namespace dam {

// A binary decision: beta_b, or phi_{f,t}.
struct BinaryVar {
  enum class Kind { block, flex };
  Kind kind = Kind::block;
  std::size_t bid = 0;
  std::size_t hour = 0;  // flex only

  static BinaryVar block_var(std::size_t b) { return {Kind::block, b, 0}; }
  static BinaryVar flex_var(std::size_t f, std::size_t t) { return {Kind::flex, f, t}; }
  double value(const BidSelection& selection) const;
  bool operator==(const BinaryVar&) const = default;
};

struct CutTerm {
  BinaryVar var;
  double coefficient = 0.0;
};

enum class CutSense { less_equal, greater_equal };
enum class CutKind { bid_cut, no_good, curtailment };

std::string to_string(CutKind kind);

struct Cut {
  std::vector<CutTerm> terms;
  CutSense sense = CutSense::less_equal;
  double rhs = 0.0;
  CutKind kind = CutKind::bid_cut;

  double activity(const BidSelection& selection) const;
  bool satisfied_by(const BidSelection& selection, double tol = 1e-9) const;
  std::string describe(const Instance& instance) const;
};

using CutPool = std::vector<Cut>;

// Throws UnknownId if a cut references a bid or hour outside the instance.
void validate_cuts(const Instance& instance, const CutPool& cuts);

struct LossSets {
  std::vector<std::size_t> blocks;
  std::vector<std::pair<std::size_t, std::size_t>> flex;  // (flex, hour)
  bool empty() const { return blocks.empty() && flex.empty(); }
};

LossSets loss_sets(const Instance& instance, const BidSelection& selection, const PriceVector& prices,
                   double tol = 1e-9);

// sum_{b in B_loss} beta_b + sum_{(f,t) in F_loss} phi_{f,t} <= |B_loss| + |F_loss| - 1
Cut bid_cut(const LossSets& losses, CutKind kind = CutKind::bid_cut);

// Excludes exactly `selection` among all 0/1 selections of `instance`.
Cut no_good_cut(const Instance& instance, const BidSelection& selection, CutKind kind = CutKind::no_good);

struct CurtailmentViolation {
  std::size_t area = 0;
  std::size_t hour = 0;
  std::size_t segment = 0;  // global segment id
  bool demand_side = true;
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> flex;
};

std::vector<CurtailmentViolation> curtailment_violations(const Instance& instance, const PrimalSolution& solution,
                                                         double tol = 1e-9);

// Bid-cut form over all bids in the violations.
Cut curtailment_cut(const Instance& instance, const BidSelection& selection,
                    const std::vector<CurtailmentViolation>& violations);

}  // namespace dam
