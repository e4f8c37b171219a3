#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dam::qp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Term {
  std::size_t index = 0;
  double coefficient = 0.0;
};

struct LinearRow {
  std::vector<Term> terms;
  double rhs = 0.0;
  double activity(std::span<const double> x) const;
};

// maximize  constant + sum_j linear_j x_j + 1/2 sum_j quadratic_j x_j^2
// s.t.      equality rows == rhs, inequality rows <= rhs, lower <= x <= upper.
struct QpProblem {
  std::vector<double> linear;
  std::vector<double> quadratic;  // each <= 0
  std::vector<LinearRow> equalities;
  std::vector<LinearRow> inequalities;
  std::vector<double> lower;
  std::vector<double> upper;
  double constant = 0.0;

  std::size_t variable_count() const { return linear.size(); }
  std::size_t add_variable(double lo, double hi, double lin = 0.0, double quad = 0.0);
  std::size_t add_equality(std::vector<Term> terms, double rhs);
  std::size_t add_inequality(std::vector<Term> terms, double rhs);
  double objective(std::span<const double> x) const;
  // Throws std::invalid_argument on inconsistent dimensions or convexity.
  void validate() const;
};

enum class QpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(QpStatus status);

// Multiplier convention: gradient = A_eq' y + A_in' z + bound_upper - bound_lower,
// with z, bound_upper, bound_lower >= 0.
struct QpSolution {
  QpStatus status = QpStatus::optimal;
  std::vector<double> x;
  std::vector<double> equality_multipliers;
  std::vector<double> inequality_multipliers;
  std::vector<double> bound_lower_multipliers;
  std::vector<double> bound_upper_multipliers;
  double objective = 0.0;
  std::size_t iterations = 0;
  // infeasible: constraint indices in the global order (equalities, then
  // inequalities, then bounds as 2j for lower and 2j+1 for upper).
  std::vector<std::size_t> certificate;
  std::vector<double> ray;  // unbounded: improving feasible direction
};

struct QpOptions {
  double tol = 1e-8;
  std::size_t max_iterations = 0;  // 0: automatic
};

QpSolution solve_qp(const QpProblem& problem, const QpOptions& options = {});

struct KktReport {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  bool pass = false;
};

KktReport check_kkt(const QpProblem& problem, const QpSolution& candidate, double tol = 1e-8);

}  // namespace dam::qp
