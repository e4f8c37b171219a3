#include "dam/qp_engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dam::qp {

double LinearRow::activity(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coefficient * x[t.index];
  return s;
}

std::size_t QpProblem::add_variable(double lo, double hi, double lin, double quad) {
  linear.push_back(lin);
  quadratic.push_back(quad);
  lower.push_back(lo);
  upper.push_back(hi);
  return linear.size() - 1;
}

std::size_t QpProblem::add_equality(std::vector<Term> terms, double rhs) {
  equalities.push_back({std::move(terms), rhs});
  return equalities.size() - 1;
}

std::size_t QpProblem::add_inequality(std::vector<Term> terms, double rhs) {
  inequalities.push_back({std::move(terms), rhs});
  return inequalities.size() - 1;
}

double QpProblem::objective(std::span<const double> x) const {
  double v = constant;
  for (std::size_t j = 0; j < linear.size(); ++j) v += linear[j] * x[j] + 0.5 * quadratic[j] * x[j] * x[j];
  return v;
}

void QpProblem::validate() const {
  const std::size_t n = linear.size();
  if (quadratic.size() != n || lower.size() != n || upper.size() != n)
    throw std::invalid_argument("qp: coefficient vectors differ in length");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(quadratic[j] <= 0.0)) throw std::invalid_argument("qp: quadratic coefficient must be <= 0");
    if (!std::isfinite(linear[j])) throw std::invalid_argument("qp: non-finite linear coefficient");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] || lower[j] == kInfinity ||
        upper[j] == -kInfinity)
      throw std::invalid_argument("qp: invalid variable bounds");
  }
  auto check_rows = [n](const std::vector<LinearRow>& rows) {
    for (const auto& r : rows) {
      if (!std::isfinite(r.rhs)) throw std::invalid_argument("qp: non-finite right-hand side");
      for (const auto& t : r.terms)
        if (t.index >= n || !std::isfinite(t.coefficient)) throw std::invalid_argument("qp: bad row term");
    }
  };
  check_rows(equalities);
  check_rows(inequalities);
}

std::string to_string(QpStatus status) {
  switch (status) {
    case QpStatus::optimal: return "optimal";
    case QpStatus::infeasible: return "infeasible";
    case QpStatus::unbounded: return "unbounded";
    case QpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Bound : unsigned char { free, lower, upper };

struct Dense {
  std::size_t n = 0;
  std::size_t me = 0;
  std::size_t m = 0;
  MatrixXd A;
  VectorXd b, c, d, lo, hi;
  VectorXd row_norm;
};

struct ActiveResult {
  QpStatus status = QpStatus::optimal;
  VectorXd x;
  std::vector<std::size_t> W;
  std::vector<Bound> state;
  VectorXd row_mult;
  VectorXd reduced;  // g_j - (A_W' lambda)_j on bound-active variables
  VectorXd ray;
  std::size_t iterations = 0;
};

Dense make_dense(const QpProblem& p) {
  Dense D;
  D.n = p.variable_count();
  D.me = p.equalities.size();
  D.m = D.me + p.inequalities.size();
  D.A = MatrixXd::Zero(D.m, D.n);
  D.b.resize(D.m);
  for (std::size_t i = 0; i < D.m; ++i) {
    const auto& row = i < D.me ? p.equalities[i] : p.inequalities[i - D.me];
    for (const auto& t : row.terms) D.A(i, t.index) += t.coefficient;
    D.b(i) = row.rhs;
  }
  D.c = Eigen::Map<const VectorXd>(p.linear.data(), D.n);
  D.d = Eigen::Map<const VectorXd>(p.quadratic.data(), D.n);
  D.lo = Eigen::Map<const VectorXd>(p.lower.data(), D.n);
  D.hi = Eigen::Map<const VectorXd>(p.upper.data(), D.n);
  D.row_norm.resize(D.m);
  for (std::size_t i = 0; i < D.m; ++i) D.row_norm(i) = D.m ? D.A.row(i).lpNorm<Eigen::Infinity>() : 0.0;
  return D;
}

// Primal active-set method from a feasible point. Rows in W stay active; a
// variable that is not free sits on the bound named by its state.
ActiveResult active_set(const Dense& P, VectorXd x, std::vector<std::size_t> W, std::vector<Bound> state,
                        std::size_t max_iter) {
  ActiveResult out;
  const std::size_t n = P.n;
  std::vector<char> in_w(P.m, 0);
  for (auto i : W) in_w[i] = 1;
  const double dmax = P.d.size() ? (-P.d).maxCoeff() : 0.0;

  std::vector<std::size_t> F;
  F.reserve(n);
  for (std::size_t it = 0;; ++it) {
    if (it >= max_iter) {
      out.status = QpStatus::iteration_limit;
      break;
    }
    out.iterations = it + 1;
    F.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (state[j] == Bound::free) F.push_back(j);
    const std::size_t nf = F.size();
    const std::size_t k = W.size();

    VectorXd g = P.c + P.d.cwiseProduct(x);
    VectorXd gF(nf);
    for (std::size_t a = 0; a < nf; ++a) gF(a) = g(F[a]);
    const double gscale = std::max(1.0, g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0);
    const double gtol = 1e-11 * gscale;
    const double dtol = 1e-10 * gscale;

    MatrixXd AwfT(nf, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t a = 0; a < nf; ++a) AwfT(a, i) = P.A(W[i], F[a]);
    Eigen::HouseholderQR<MatrixXd> qr;
    MatrixXd Z;
    const std::size_t nz = nf > k ? nf - k : 0;
    if (k > 0) {
      qr.compute(AwfT);
      if (nz > 0) {
        MatrixXd Q = qr.householderQ();
        Z = Q.rightCols(nz);
      }
    } else {
      Z = MatrixXd::Identity(nf, nf);
    }

    VectorXd pF;
    bool ray = false;
    bool stationary = true;
    if (nz > 0) {
      VectorXd rg = Z.transpose() * gF;
      if (rg.lpNorm<Eigen::Infinity>() > gtol) {
        stationary = false;
        VectorXd dz(nf);
        bool any_curved = false;
        bool all_curved = true;
        for (std::size_t a = 0; a < nf; ++a) {
          dz(a) = -P.d(F[a]);
          if (dz(a) > 0.0)
            any_curved = true;
          else
            all_curved = false;
        }
        VectorXd pz;
        if (!any_curved) {
          pz = rg;
          ray = true;
        } else if (all_curved && k == 0) {
          pz = rg.cwiseQuotient(dz);
        } else {
          MatrixXd M = Z.transpose() * dz.asDiagonal() * Z;
          Eigen::SelfAdjointEigenSolver<MatrixXd> eig(M);
          const VectorXd& ev = eig.eigenvalues();
          const MatrixXd& V = eig.eigenvectors();
          VectorXd w = V.transpose() * rg;
          const double thr = 1e-10 * dmax;
          VectorXd null_part = VectorXd::Zero(nz);
          bool has_null = false;
          for (std::size_t i = 0; i < nz; ++i) {
            if (ev(i) <= thr && std::abs(w(i)) > gtol) {
              has_null = true;
              null_part += w(i) * V.col(i);
            }
          }
          if (has_null) {
            pz = null_part;
            ray = true;
          } else {
            pz = VectorXd::Zero(nz);
            for (std::size_t i = 0; i < nz; ++i)
              if (ev(i) > thr) pz += (w(i) / ev(i)) * V.col(i);
          }
        }
        pF = Z * pz;
        if (pF.lpNorm<Eigen::Infinity>() == 0.0) stationary = true;
      }
    }

    if (stationary) {
      VectorXd lam = k > 0 ? VectorXd(qr.solve(gF)) : VectorXd();
      std::size_t release = static_cast<std::size_t>(-1);
      for (std::size_t i = 0; i < k; ++i)
        if (W[i] >= P.me && lam(i) < -dtol) release = std::min(release, W[i]);
      VectorXd reduced = VectorXd::Zero(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (state[j] == Bound::free) continue;
        double r = g(j);
        for (std::size_t i = 0; i < k; ++i) r -= lam(i) * P.A(W[i], j);
        reduced(j) = r;
        if (P.lo(j) == P.hi(j)) continue;
        if (state[j] == Bound::lower && r > dtol) release = std::min(release, P.m + 2 * j);
        if (state[j] == Bound::upper && r < -dtol) release = std::min(release, P.m + 2 * j + 1);
      }
      if (release == static_cast<std::size_t>(-1)) {
        out.status = QpStatus::optimal;
        out.row_mult = VectorXd::Zero(P.m);
        for (std::size_t i = 0; i < k; ++i) out.row_mult(W[i]) = lam(i);
        out.reduced = reduced;
        break;
      }
      if (release < P.m) {
        W.erase(std::find(W.begin(), W.end(), release));
        in_w[release] = 0;
      } else {
        state[(release - P.m) / 2] = Bound::free;
      }
      continue;
    }

    // Ratio test; ties go to the lowest global constraint index.
    const double pnorm = pF.lpNorm<Eigen::Infinity>();
    double best = ray ? kInfinity : 1.0;
    std::size_t block = static_cast<std::size_t>(-1);
    auto consider = [&](double a, std::size_t id) {
      if (a < best - 1e-15 * std::max(1.0, a)) {
        best = a;
        block = id;
      }
    };
    for (std::size_t i = P.me; i < P.m; ++i) {
      if (in_w[i]) continue;
      double s = 0.0;
      for (std::size_t a = 0; a < nf; ++a) s += P.A(i, F[a]) * pF(a);
      if (s <= 1e-12 * P.row_norm(i) * pnorm) continue;
      double slack = std::max(0.0, P.b(i) - P.A.row(i).dot(x));
      consider(slack / s, i);
    }
    for (std::size_t a = 0; a < nf; ++a) {
      const std::size_t j = F[a];
      const double pj = pF(a);
      if (pj < -1e-13 * pnorm && std::isfinite(P.lo(j)))
        consider(std::max(0.0, x(j) - P.lo(j)) / -pj, P.m + 2 * j);
      else if (pj > 1e-13 * pnorm && std::isfinite(P.hi(j)))
        consider(std::max(0.0, P.hi(j) - x(j)) / pj, P.m + 2 * j + 1);
    }

    if (block == static_cast<std::size_t>(-1) && ray) {
      out.status = QpStatus::unbounded;
      out.ray = VectorXd::Zero(n);
      for (std::size_t a = 0; a < nf; ++a) out.ray(F[a]) = pF(a);
      break;
    }
    for (std::size_t a = 0; a < nf; ++a) {
      const std::size_t j = F[a];
      x(j) = std::clamp(x(j) + best * pF(a), P.lo(j), P.hi(j));
    }
    if (block == static_cast<std::size_t>(-1)) continue;
    if (block < P.m) {
      W.push_back(block);
      in_w[block] = 1;
    } else {
      const std::size_t j = (block - P.m) / 2;
      const bool upper = (block - P.m) % 2 == 1;
      state[j] = upper ? Bound::upper : Bound::lower;
      x(j) = upper ? P.hi(j) : P.lo(j);
    }
  }
  out.x = std::move(x);
  out.W = std::move(W);
  out.state = std::move(state);
  return out;
}

// Incremental orthonormal basis used to pick independent active constraints.
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t n) : n_(n) {}
  bool add(const VectorXd& v) {
    const double norm = v.norm();
    if (norm == 0.0 || basis_.size() >= n_) return false;
    VectorXd r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis_) r -= q.dot(r) * q;
    if (r.norm() <= 1e-9 * norm) return false;
    basis_.push_back(r / r.norm());
    return true;
  }

 private:
  std::size_t n_;
  std::vector<VectorXd> basis_;
};

void fill_solution(const QpProblem& problem, const Dense& D, const ActiveResult& r, QpSolution& sol) {
  sol.x.assign(r.x.data(), r.x.data() + D.n);
  sol.equality_multipliers.assign(D.me, 0.0);
  sol.inequality_multipliers.assign(D.m - D.me, 0.0);
  sol.bound_lower_multipliers.assign(D.n, 0.0);
  sol.bound_upper_multipliers.assign(D.n, 0.0);
  if (r.status == QpStatus::optimal) {
    for (std::size_t i = 0; i < D.m; ++i) {
      if (i < D.me)
        sol.equality_multipliers[i] = r.row_mult(i);
      else
        sol.inequality_multipliers[i - D.me] = r.row_mult(i);
    }
    for (std::size_t j = 0; j < D.n; ++j) {
      const double v = r.reduced(j);
      if (r.state[j] == Bound::free) continue;
      if (v >= 0.0)
        sol.bound_upper_multipliers[j] = v;
      else
        sol.bound_lower_multipliers[j] = -v;
    }
  }
  sol.objective = problem.objective(sol.x);
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem, const QpOptions& options) {
  problem.validate();
  const Dense D = make_dense(problem);
  const std::size_t n = D.n;
  const std::size_t max_iter = options.max_iterations ? options.max_iterations : 50 * (n + D.m) + 200;

  QpSolution sol;
  VectorXd x0(n);
  for (std::size_t j = 0; j < n; ++j) x0(j) = std::clamp(0.0, D.lo(j), D.hi(j));

  double scale = 1.0;
  for (std::size_t i = 0; i < D.m; ++i) scale = std::max(scale, std::abs(D.b(i)));
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(D.lo(j))) scale = std::max(scale, std::abs(D.lo(j)));
    if (std::isfinite(D.hi(j))) scale = std::max(scale, std::abs(D.hi(j)));
  }
  const double feas_tol = 1e-9 * scale;

  VectorXd Ax0 = D.m ? VectorXd(D.A * x0) : VectorXd(0);
  std::vector<std::size_t> violated;
  for (std::size_t i = D.me; i < D.m; ++i)
    if (Ax0(i) - D.b(i) > 0.0) violated.push_back(i);

  VectorXd x = x0;
  std::vector<std::size_t> W;
  std::vector<Bound> state(n, Bound::free);
  std::size_t iterations = 0;

  if (D.me > 0 || !violated.empty()) {
    // Phase 1: one artificial per equality row and per violated inequality.
    Dense P1;
    const std::size_t na = D.me + violated.size();
    P1.n = n + na;
    P1.me = D.me;
    P1.m = D.m;
    P1.A = MatrixXd::Zero(D.m, P1.n);
    P1.A.leftCols(n) = D.A;
    P1.b = D.b;
    P1.c = VectorXd::Zero(P1.n);
    P1.d = VectorXd::Zero(P1.n);
    P1.lo = VectorXd::Zero(P1.n);
    P1.hi = VectorXd::Constant(P1.n, kInfinity);
    P1.lo.head(n) = D.lo;
    P1.hi.head(n) = D.hi;
    VectorXd x1(P1.n);
    x1.head(n) = x0;
    for (std::size_t i = 0; i < D.me; ++i) {
      const double r = D.b(i) - Ax0(i);
      P1.A(i, n + i) = r >= 0.0 ? 1.0 : -1.0;
      x1(n + i) = std::abs(r);
      P1.c(n + i) = -1.0;
    }
    for (std::size_t a = 0; a < violated.size(); ++a) {
      const std::size_t i = violated[a];
      P1.A(i, n + D.me + a) = -1.0;
      x1(n + D.me + a) = Ax0(i) - D.b(i);
      P1.c(n + D.me + a) = -1.0;
    }
    P1.row_norm.resize(P1.m);
    for (std::size_t i = 0; i < P1.m; ++i) P1.row_norm(i) = P1.A.row(i).lpNorm<Eigen::Infinity>();
    std::vector<std::size_t> W1(D.me);
    for (std::size_t i = 0; i < D.me; ++i) W1[i] = i;
    auto r1 = active_set(P1, x1, W1, std::vector<Bound>(P1.n, Bound::free), max_iter);
    iterations += r1.iterations;
    if (r1.status != QpStatus::optimal) {
      sol.status = QpStatus::iteration_limit;
      sol.iterations = iterations;
      sol.x.assign(r1.x.data(), r1.x.data() + n);
      sol.objective = problem.objective(sol.x);
      return sol;
    }
    const double infeasibility = r1.x.tail(na).sum();
    if (infeasibility > feas_tol) {
      sol.status = QpStatus::infeasible;
      sol.iterations = iterations;
      sol.x.assign(r1.x.data(), r1.x.data() + n);
      sol.objective = problem.objective(sol.x);
      for (std::size_t i = 0; i < D.m; ++i)
        if (std::abs(r1.row_mult(i)) > 1e-9) sol.certificate.push_back(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (r1.state[j] == Bound::free || std::abs(r1.reduced(j)) <= 1e-9) continue;
        sol.certificate.push_back(D.m + 2 * j + (r1.reduced(j) > 0.0 ? 1 : 0));
      }
      return sol;
    }
    x = r1.x.head(n);

    // Phase 2 start: independent equalities, then phase-1 active bounds and rows.
    SpanBasis basis(n);
    for (std::size_t i = 0; i < D.me; ++i)
      if (basis.add(D.A.row(i).transpose())) W.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (r1.state[j] == Bound::free) continue;
      VectorXd e = VectorXd::Zero(n);
      e(j) = 1.0;
      if (basis.add(e)) {
        state[j] = r1.state[j];
        x(j) = state[j] == Bound::upper ? D.hi(j) : D.lo(j);
      }
    }
    for (auto i : r1.W)
      if (i >= D.me && basis.add(D.A.row(i).transpose())) W.push_back(i);
  }

  auto r2 = active_set(D, x, W, state, max_iter);
  iterations += r2.iterations;
  sol.status = r2.status;
  sol.iterations = iterations;
  fill_solution(problem, D, r2, sol);
  if (r2.status == QpStatus::unbounded) sol.ray.assign(r2.ray.data(), r2.ray.data() + n);
  return sol;
}

KktReport check_kkt(const QpProblem& problem, const QpSolution& s, double tol) {
  KktReport rep;
  const std::size_t n = problem.variable_count();
  if (s.x.size() != n || s.equality_multipliers.size() != problem.equalities.size() ||
      s.inequality_multipliers.size() != problem.inequalities.size() || s.bound_lower_multipliers.size() != n ||
      s.bound_upper_multipliers.size() != n) {
    rep.stationarity = rep.primal = rep.dual = rep.complementarity = kInfinity;
    return rep;
  }
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j)
    r[j] = problem.linear[j] + problem.quadratic[j] * s.x[j] - s.bound_upper_multipliers[j] +
           s.bound_lower_multipliers[j];
  for (std::size_t i = 0; i < problem.equalities.size(); ++i) {
    const auto& row = problem.equalities[i];
    for (const auto& t : row.terms) r[t.index] -= s.equality_multipliers[i] * t.coefficient;
    rep.primal = std::max(rep.primal, std::abs(row.activity(s.x) - row.rhs));
  }
  for (std::size_t i = 0; i < problem.inequalities.size(); ++i) {
    const auto& row = problem.inequalities[i];
    const double z = s.inequality_multipliers[i];
    for (const auto& t : row.terms) r[t.index] -= z * t.coefficient;
    const double slack = row.rhs - row.activity(s.x);
    rep.primal = std::max(rep.primal, -slack);
    rep.dual = std::max(rep.dual, -z);
    rep.complementarity = std::max(rep.complementarity, std::abs(z * slack));
  }
  for (std::size_t j = 0; j < n; ++j) {
    rep.stationarity = std::max(rep.stationarity, std::abs(r[j]));
    const double wl = s.bound_lower_multipliers[j];
    const double wu = s.bound_upper_multipliers[j];
    rep.dual = std::max({rep.dual, -wl, -wu});
    rep.primal = std::max({rep.primal, problem.lower[j] - s.x[j], s.x[j] - problem.upper[j]});
    const double gl = std::isfinite(problem.lower[j]) ? std::abs(wl * (s.x[j] - problem.lower[j])) : std::abs(wl);
    const double gu = std::isfinite(problem.upper[j]) ? std::abs(wu * (problem.upper[j] - s.x[j])) : std::abs(wu);
    rep.complementarity = std::max({rep.complementarity, gl, gu});
  }
  rep.pass = rep.stationarity <= tol && rep.primal <= tol && rep.dual <= tol && rep.complementarity <= tol;
  return rep;
}

}  // namespace dam::qp
