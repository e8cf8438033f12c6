#include "czest/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace czest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lower_bound_of(int j, int n) { return j < n ? -1.0 : 0.0; }
double upper_bound_of(int j, int n) { return j < n ? 1.0 : kInf; }

}  // namespace

LpSolver::Core LpSolver::setup(const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b) {
  if (A.rows() != b.size()) throw ShapeError("lp: A rows != b size");
  if (!A.allFinite() || !b.allFinite())
    throw InputError("lp: non-finite constraint data");

  const int n = static_cast<int>(A.cols());
  Core core;
  core.n = n;
  core.row_scale.assign(static_cast<size_t>(A.rows()), 0.0);

  // Equilibrate rows and drop trivial 0 = 0 rows up front. The sign flip
  // below makes the initial artificial values nonnegative.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double s = std::abs(b[i]);
    for (Eigen::Index j = 0; j < A.cols(); ++j) s = std::max(s, std::abs(A(i, j)));
    if (s == 0.0) continue;
    keep.push_back(i);
    core.row_scale[static_cast<size_t>(i)] = 1.0 / s;
  }

  const int m = static_cast<int>(keep.size());
  core.a0.resize(m, n);
  core.b0.resize(m);
  core.row_origin.resize(static_cast<size_t>(m));
  core.xval.assign(static_cast<size_t>(n + m), -1.0);
  core.state.assign(static_cast<size_t>(n + m), VarState::Lower);

  for (int i = 0; i < m; ++i) {
    const Eigen::Index src = keep[static_cast<size_t>(i)];
    double scale = core.row_scale[static_cast<size_t>(src)];
    double resid = b[src] * scale;
    for (int j = 0; j < n; ++j) resid -= A(src, j) * scale * core.xval[static_cast<size_t>(j)];
    if (resid < 0.0) scale = -scale;
    core.row_scale[static_cast<size_t>(src)] = scale;
    core.a0.row(i) = A.row(src) * scale;
    core.b0[i] = b[src] * scale;
    core.row_origin[static_cast<size_t>(i)] = static_cast<int>(src);
  }

  core.tableau.resize(m, n + m);
  core.tableau.leftCols(n) = core.a0;
  core.tableau.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
  core.beta.resize(m);
  core.basis.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    core.basis[static_cast<size_t>(i)] = n + i;
    core.state[static_cast<size_t>(n + i)] = VarState::Basic;
    core.xval[static_cast<size_t>(n + i)] = 0.0;
    double v = core.b0[i];
    for (int j = 0; j < n; ++j) v -= core.a0(i, j) * core.xval[static_cast<size_t>(j)];
    core.beta[i] = v;  // >= 0 by the sign flip
  }
  return core;
}

void LpSolver::simplex_loop(Core& core, const Eigen::VectorXd& full_cost,
                            bool allow_artificial_entering) {
  const int n = core.n;
  const int m = static_cast<int>(core.tableau.rows());
  const int total = n + m;
  const long max_iters = 10000 + 200L * total;

  Eigen::VectorXd cb(m);
  Eigen::VectorXd d(total);

  for (long iter = 0; iter < max_iters; ++iter) {
    for (int i = 0; i < m; ++i) cb[i] = full_cost[core.basis[static_cast<size_t>(i)]];
    d = full_cost - core.tableau.transpose() * cb;

    // Bland: smallest improving index.
    int q = -1;
    int dir = 0;
    for (int j = 0; j < total; ++j) {
      if (core.state[static_cast<size_t>(j)] == VarState::Basic) continue;
      if (j >= n && !allow_artificial_entering) continue;
      if (core.state[static_cast<size_t>(j)] == VarState::Lower &&
          d[j] < -kReducedCostTol) {
        q = j;
        dir = 1;
        break;
      }
      if (core.state[static_cast<size_t>(j)] == VarState::Upper &&
          d[j] > kReducedCostTol) {
        q = j;
        dir = -1;
        break;
      }
    }
    if (q < 0) return;  // phase optimal

    const Eigen::VectorXd v = dir * core.tableau.col(q);
    const double range_q = upper_bound_of(q, n) - lower_bound_of(q, n);

    double t_best = range_q;
    int leave_row = -1;
    for (int i = 0; i < m; ++i) {
      const int k = core.basis[static_cast<size_t>(i)];
      double t_i = kInf;
      if (v[i] > kPivotTol) {
        t_i = (core.beta[i] - lower_bound_of(k, n)) / v[i];
      } else if (v[i] < -kPivotTol) {
        const double ub = upper_bound_of(k, n);
        t_i = ub == kInf ? kInf : (ub - core.beta[i]) / (-v[i]);
      }
      if (t_i < -0.0) t_i = 0.0;
      if (t_i < t_best - 1e-15 ||
          (leave_row >= 0 && t_i <= t_best + 1e-15 &&
           k < core.basis[static_cast<size_t>(leave_row)])) {
        t_best = std::max(t_i, 0.0);
        leave_row = i;
      }
    }

    if (leave_row < 0) {
      // bound-to-bound flip of the entering variable
      if (!std::isfinite(t_best))
        throw std::logic_error("lp: unbounded direction in box simplex");
      core.beta -= v * t_best;
      core.state[static_cast<size_t>(q)] =
          dir > 0 ? VarState::Upper : VarState::Lower;
      core.xval[static_cast<size_t>(q)] =
          dir > 0 ? upper_bound_of(q, n) : lower_bound_of(q, n);
      continue;
    }

    // pivot: q enters on leave_row, the old basic leaves at the bound it hit
    const int leaving = core.basis[static_cast<size_t>(leave_row)];
    const double x_q_new = core.xval[static_cast<size_t>(q)] + dir * t_best;
    core.beta -= v * t_best;

    const bool hit_lower = v[leave_row] > 0.0;
    core.state[static_cast<size_t>(leaving)] =
        hit_lower ? VarState::Lower : VarState::Upper;
    core.xval[static_cast<size_t>(leaving)] =
        hit_lower ? lower_bound_of(leaving, n) : upper_bound_of(leaving, n);

    const double piv = core.tableau(leave_row, q);
    core.tableau.row(leave_row) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave_row) continue;
      const double factor = core.tableau(i, q);
      if (factor != 0.0) core.tableau.row(i) -= factor * core.tableau.row(leave_row);
    }

    core.basis[static_cast<size_t>(leave_row)] = q;
    core.state[static_cast<size_t>(q)] = VarState::Basic;
    core.beta[leave_row] = x_q_new;
  }
  throw std::logic_error("lp: simplex iteration limit exceeded");
}

bool LpSolver::run_phase1(Core& core) {
  const int n = core.n;
  const int m = static_cast<int>(core.tableau.rows());
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
  cost.tail(m).setOnes();
  simplex_loop(core, cost, false);

  double infeas = 0.0;
  for (int i = 0; i < m; ++i)
    if (core.basis[static_cast<size_t>(i)] >= n) infeas += std::max(core.beta[i], 0.0);
  core.feasible = infeas <= kFeasTol * (1.0 + static_cast<double>(m));
  return core.feasible;
}

void LpSolver::run_phase2(Core& core, const Eigen::VectorXd& cost) {
  const int n = core.n;
  int m = static_cast<int>(core.tableau.rows());

  // Drive leftover artificials out of the basis; rows that offer no
  // structural pivot are redundant and get dropped.
  std::vector<int> drop;
  for (int i = 0; i < m; ++i) {
    if (core.basis[static_cast<size_t>(i)] < n) continue;
    int pivot_col = -1;
    double best = 1e-9;
    for (int j = 0; j < n; ++j) {
      if (core.state[static_cast<size_t>(j)] == VarState::Basic) continue;
      if (std::abs(core.tableau(i, j)) > best) {
        best = std::abs(core.tableau(i, j));
        pivot_col = j;
      }
    }
    if (pivot_col < 0) {
      drop.push_back(i);
      continue;
    }
    const int leaving = core.basis[static_cast<size_t>(i)];
    const double piv = core.tableau(i, pivot_col);
    core.tableau.row(i) /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == i) continue;
      const double factor = core.tableau(r, pivot_col);
      if (factor != 0.0) core.tableau.row(r) -= factor * core.tableau.row(i);
    }
    core.basis[static_cast<size_t>(i)] = pivot_col;
    core.beta[i] = core.xval[static_cast<size_t>(pivot_col)];
    core.state[static_cast<size_t>(pivot_col)] = VarState::Basic;
    core.state[static_cast<size_t>(leaving)] = VarState::Lower;
    core.xval[static_cast<size_t>(leaving)] = 0.0;
  }

  if (!drop.empty()) {
    const int m_new = m - static_cast<int>(drop.size());
    Eigen::MatrixXd tab(m_new, core.tableau.cols());
    Eigen::MatrixXd a0(m_new, n);
    Eigen::VectorXd b0(m_new), beta(m_new);
    std::vector<int> basis, origin;
    int w = 0;
    size_t next_drop = 0;
    for (int i = 0; i < m; ++i) {
      if (next_drop < drop.size() && drop[next_drop] == i) {
        ++next_drop;
        continue;
      }
      tab.row(w) = core.tableau.row(i);
      a0.row(w) = core.a0.row(i);
      b0[w] = core.b0[i];
      beta[w] = core.beta[i];
      basis.push_back(core.basis[static_cast<size_t>(i)]);
      origin.push_back(core.row_origin[static_cast<size_t>(i)]);
      ++w;
    }
    core.tableau = std::move(tab);
    core.a0 = std::move(a0);
    core.b0 = std::move(b0);
    core.beta = std::move(beta);
    core.basis = std::move(basis);
    core.row_origin = std::move(origin);
    m = m_new;
  }

  Eigen::VectorXd full_cost = Eigen::VectorXd::Zero(n + m);
  full_cost.head(n) = cost;
  simplex_loop(core, full_cost, false);
}

LpSolution LpSolver::solve(const BoxEqualityLp& problem) {
  if (problem.cost.size() != problem.A.cols() && problem.A.rows() > 0)
    throw ShapeError("lp: cost size != variable count");
  if (problem.A.rows() == 0 && problem.cost.size() == 0 && problem.b.size() > 0)
    throw ShapeError("lp: rhs without constraint matrix");
  if (!problem.cost.allFinite()) throw InputError("lp: non-finite cost");

  const int n = static_cast<int>(problem.cost.size());
  Eigen::MatrixXd A = problem.A;
  if (A.cols() != n && A.rows() == 0) A.resize(0, n);

  Core core = setup(A, problem.b);
  LpSolution sol;
  sol.y = Eigen::VectorXd::Zero(problem.b.size());

  if (!run_phase1(core)) {
    sol.status = LpSolution::Status::Infeasible;
    return sol;
  }
  run_phase2(core, problem.cost);

  const int m = static_cast<int>(core.tableau.rows());
  sol.status = LpSolution::Status::Optimal;
  sol.x.resize(n);
  for (int j = 0; j < n; ++j) sol.x[j] = core.xval[static_cast<size_t>(j)];

  if (m > 0) {
    // One refactorization polishes the basic values and yields multipliers.
    Eigen::MatrixXd basis_mat(m, m);
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) {
      const int j = core.basis[static_cast<size_t>(i)];
      basis_mat.col(i) = core.a0.col(j);
      cb[i] = problem.cost[j];
    }
    Eigen::VectorXd resid = core.b0;
    for (int j = 0; j < n; ++j) {
      if (core.state[static_cast<size_t>(j)] == VarState::Basic) continue;
      const double xj = core.xval[static_cast<size_t>(j)];
      if (xj != 0.0) resid -= core.a0.col(j) * xj;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
    if (lu.isInvertible()) {
      const Eigen::VectorXd xb = lu.solve(resid);
      for (int i = 0; i < m; ++i)
        sol.x[core.basis[static_cast<size_t>(i)]] = xb[i];
      const Eigen::VectorXd yhat = basis_mat.transpose().fullPivLu().solve(cb);
      for (int i = 0; i < m; ++i) {
        const int src = core.row_origin[static_cast<size_t>(i)];
        sol.y[src] = yhat[i] * core.row_scale[static_cast<size_t>(src)];
      }
    } else {
      for (int i = 0; i < m; ++i)
        sol.x[core.basis[static_cast<size_t>(i)]] = core.beta[i];
    }
  }

  sol.value = problem.cost.dot(sol.x);
  return sol;
}

bool LpSolver::feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (!A.allFinite() || !b.allFinite())
    throw InputError("lp: non-finite constraint data");
  Core core = setup(A, b);
  return run_phase1(core);
}

}  // namespace czest
