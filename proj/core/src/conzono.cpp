#include "czest/conzono.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace czest {

ConZono ConZono::zonotope(Eigen::MatrixXd G, Eigen::VectorXd c) {
  if (G.rows() != c.size()) throw ShapeError("zonotope: G rows != c size");
  ConZono z;
  z.A.resize(0, G.cols());
  z.b.resize(0);
  z.G = std::move(G);
  z.c = std::move(c);
  return z;
}

ConZono ConZono::point(Eigen::VectorXd c) {
  const Eigen::Index n = c.size();
  return zonotope(Eigen::MatrixXd(n, 0), std::move(c));
}

ConZono ConZono::from_interval(const IntervalVector& box) {
  return zonotope(Eigen::MatrixXd(box.rad().asDiagonal()), box.mid());
}

ConZono cartesian_product(const ConZono& z, const ConZono& w) {
  ConZono out;
  const Eigen::Index n = z.dim() + w.dim();
  const Eigen::Index ng = z.num_gens() + w.num_gens();
  const Eigen::Index nc = z.num_cons() + w.num_cons();
  out.G = Eigen::MatrixXd::Zero(n, ng);
  out.G.topLeftCorner(z.dim(), z.num_gens()) = z.G;
  out.G.bottomRightCorner(w.dim(), w.num_gens()) = w.G;
  out.c.resize(n);
  out.c << z.c, w.c;
  out.A = Eigen::MatrixXd::Zero(nc, ng);
  out.A.topLeftCorner(z.num_cons(), z.num_gens()) = z.A;
  out.A.bottomRightCorner(w.num_cons(), w.num_gens()) = w.A;
  out.b.resize(nc);
  out.b << z.b, w.b;
  return out;
}

ConZono linear_image(const Eigen::MatrixXd& r, const ConZono& z) {
  if (r.cols() != z.dim()) throw ShapeError("linear_image: R cols != dim Z");
  ConZono out;
  out.G = r * z.G;
  out.c = r * z.c;
  out.A = z.A;
  out.b = z.b;
  return out;
}

ConZono minkowski_sum(const ConZono& z, const ConZono& w) {
  if (z.dim() != w.dim()) throw ShapeError("minkowski_sum: dimension mismatch");
  ConZono out;
  out.G.resize(z.dim(), z.num_gens() + w.num_gens());
  out.G << z.G, w.G;
  out.c = z.c + w.c;
  const Eigen::Index nc = z.num_cons() + w.num_cons();
  out.A = Eigen::MatrixXd::Zero(nc, z.num_gens() + w.num_gens());
  out.A.topLeftCorner(z.num_cons(), z.num_gens()) = z.A;
  out.A.bottomRightCorner(w.num_cons(), w.num_gens()) = w.A;
  out.b.resize(nc);
  out.b << z.b, w.b;
  return out;
}

ConZono generalized_intersect(const ConZono& z, const Eigen::MatrixXd& r,
                              const ConZono& y) {
  if (r.cols() != z.dim() || r.rows() != y.dim())
    throw ShapeError("generalized_intersect: R shape mismatch");
  ConZono out;
  out.G = Eigen::MatrixXd::Zero(z.dim(), z.num_gens() + y.num_gens());
  out.G.leftCols(z.num_gens()) = z.G;
  out.c = z.c;
  const Eigen::Index nc = z.num_cons() + y.num_cons() + y.dim();
  out.A = Eigen::MatrixXd::Zero(nc, z.num_gens() + y.num_gens());
  out.A.topLeftCorner(z.num_cons(), z.num_gens()) = z.A;
  out.A.block(z.num_cons(), z.num_gens(), y.num_cons(), y.num_gens()) = y.A;
  out.A.bottomLeftCorner(y.dim(), z.num_gens()) = r * z.G;
  out.A.bottomRightCorner(y.dim(), y.num_gens()) = -y.G;
  out.b.resize(nc);
  out.b << z.b, y.b, y.c - r * z.c;
  return out;
}

ConZono intersect_polytope(const ConZono& z, const HPolytope& p) {
  if (p.dim != z.dim()) throw ShapeError("intersect_polytope: dimension");
  const Eigen::Index nh = p.num_halfspaces();
  const Eigen::Index ncp = p.num_equalities();

  // sigma_i = inf of H_i over the constraint-dropped zonotope; clamping at
  // k keeps the slack generators nonnegative and the intersection exact
  // even when a halfspace excludes the whole set.
  Eigen::VectorXd sigma(nh);
  if (nh > 0) {
    const Eigen::MatrixXd hg = p.H * z.G;
    sigma = p.H * z.c - hg.cwiseAbs().rowwise().sum();
    sigma = sigma.cwiseMin(p.k);
  }

  ConZono out;
  const Eigen::Index ng = z.num_gens();
  out.G = Eigen::MatrixXd::Zero(z.dim(), ng + nh);
  out.G.leftCols(ng) = z.G;
  out.c = z.c;
  const Eigen::Index nc = z.num_cons() + nh + ncp;
  out.A = Eigen::MatrixXd::Zero(nc, ng + nh);
  out.b.resize(nc);
  out.A.topLeftCorner(z.num_cons(), ng) = z.A;
  out.b.head(z.num_cons()) = z.b;
  if (nh > 0) {
    const Eigen::VectorXd gq = 0.5 * (p.k - sigma);
    const Eigen::VectorXd cq = 0.5 * (p.k + sigma);
    out.A.block(z.num_cons(), 0, nh, ng) = p.H * z.G;
    out.A.block(z.num_cons(), ng, nh, nh) =
        Eigen::MatrixXd((-gq).asDiagonal());
    out.b.segment(z.num_cons(), nh) = cq - p.H * z.c;
  }
  if (ncp > 0) {
    out.A.block(z.num_cons() + nh, 0, ncp, ng) = p.A * z.G;
    out.b.tail(ncp) = p.b - p.A * z.c;
  }
  return out;
}

IntervalVector interval_hull(const ConZono& z) {
  LpSolver lp;
  IntervalVector hull(z.dim());
  for (Eigen::Index i = 0; i < z.dim(); ++i) {
    BoxEqualityLp prob;
    prob.A = z.A;
    prob.b = z.b;
    prob.cost = z.G.row(i).transpose();
    const LpSolution lo = lp.solve(prob);
    if (!lo.optimal()) throw EmptySetError("interval_hull: empty set");
    prob.cost = -z.G.row(i).transpose();
    const LpSolution hi = lp.solve(prob);
    const double a = z.c[i] + lo.value;
    const double b = z.c[i] - hi.value;
    hull[i] = Interval(std::min(a, b), std::max(a, b));
  }
  return hull;
}

bool contains_point(const ConZono& z, const Eigen::VectorXd& x) {
  if (x.size() != z.dim()) throw ShapeError("contains_point: dimension");
  Eigen::MatrixXd a(z.num_cons() + z.dim(), z.num_gens());
  a << z.A, z.G;
  Eigen::VectorXd b(z.num_cons() + z.dim());
  b << z.b, x - z.c;
  LpSolver lp;
  return lp.feasible(a, b);
}

bool is_empty(const ConZono& z) {
  LpSolver lp;
  return !lp.feasible(z.A, z.b);
}

IntervalVector factor_bounds(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             int sweeps) {
  const Eigen::Index ng = a.cols();
  const Eigen::Index nc = a.rows();
  IntervalVector r(ng);
  for (Eigen::Index j = 0; j < ng; ++j) r[j] = Interval(-1.0, 1.0);

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < nc; ++i) {
      // running endpoint sums of the row terms a_ij * R_j
      double sum_lo = 0.0, sum_hi = 0.0;
      for (Eigen::Index j = 0; j < ng; ++j) {
        const Interval term = a(i, j) * r[j];
        sum_lo += term.lo();
        sum_hi += term.hi();
      }
      for (Eigen::Index j = 0; j < ng; ++j) {
        const double aij = a(i, j);
        if (std::abs(aij) < 1e-12) continue;
        const Interval term = aij * r[j];
        const Interval rest(sum_lo - term.lo(), sum_hi - term.hi());
        const Interval solved = (1.0 / aij) * (Interval(b[i], b[i]) - rest);
        double lo = std::max(r[j].lo(), solved.lo());
        double hi = std::min(r[j].hi(), solved.hi());
        if (lo > hi) {
          // infeasible system; pin to the nearest consistent point
          const double mid = 0.5 * (lo + hi);
          lo = hi = std::clamp(mid, -1.0, 1.0);
        }
        if (lo > r[j].lo() + 1e-12 || hi < r[j].hi() - 1e-12) changed = true;
        const Interval updated(lo, hi);
        sum_lo += (aij * updated).lo() - term.lo();
        sum_hi += (aij * updated).hi() - term.hi();
        r[j] = updated;
      }
    }
    if (!changed) break;
  }
  return r;
}

namespace {

// One Gauss-elimination step: solve constraint `row` for factor `col` and
// substitute, removing one constraint and one generator. Always encloses.
ConZono eliminate_pair(const ConZono& z, Eigen::Index row, Eigen::Index col) {
  const double piv = z.A(row, col);
  const Eigen::VectorXd lam_g = z.G.col(col) / piv;
  const Eigen::VectorXd lam_a = z.A.col(col) / piv;

  Eigen::MatrixXd g = z.G - lam_g * z.A.row(row);
  Eigen::VectorXd c = z.c + lam_g * z.b[row];
  Eigen::MatrixXd a = z.A - lam_a * z.A.row(row);
  Eigen::VectorXd b = z.b - lam_a * z.b[row];

  ConZono out;
  out.c = std::move(c);
  out.G.resize(g.rows(), g.cols() - 1);
  out.A.resize(a.rows() - 1, a.cols() - 1);
  out.b.resize(b.size() - 1);
  Eigen::Index w = 0;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    if (j == col) continue;
    out.G.col(w) = g.col(j);
    ++w;
  }
  Eigen::Index wr = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (i == row) continue;
    Eigen::Index wc = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j == col) continue;
      out.A(wr, wc) = a(i, j);
      ++wc;
    }
    out.b[wr] = b[i];
    ++wr;
  }
  return out;
}

ConZono drop_null_rows(const ConZono& z) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < z.num_cons(); ++i) {
    if (z.A.row(i).cwiseAbs().maxCoeff() > 1e-12) keep.push_back(i);
  }
  if (static_cast<Eigen::Index>(keep.size()) == z.num_cons()) return z;
  ConZono out;
  out.G = z.G;
  out.c = z.c;
  out.A.resize(static_cast<Eigen::Index>(keep.size()), z.num_gens());
  out.b.resize(static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    out.A.row(static_cast<Eigen::Index>(i)) = z.A.row(keep[i]);
    out.b[static_cast<Eigen::Index>(i)] = z.b[keep[i]];
  }
  return out;
}

ConZono eliminate_one_constraint(const ConZono& z) {
  const IntervalVector r = factor_bounds(z.A, z.b);

  // radius-growth score: how far the solved factor can leave [-1, 1],
  // weighted by the mass of the generator column that absorbs it
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index best_row = -1, best_col = -1;
  for (Eigen::Index i = 0; i < z.num_cons(); ++i) {
    const double row_max = z.A.row(i).cwiseAbs().maxCoeff();
    double sum_lo = 0.0, sum_hi = 0.0;
    for (Eigen::Index j = 0; j < z.num_gens(); ++j) {
      const Interval term = z.A(i, j) * r[j];
      sum_lo += term.lo();
      sum_hi += term.hi();
    }
    for (Eigen::Index j = 0; j < z.num_gens(); ++j) {
      const double aij = z.A(i, j);
      if (std::abs(aij) < 1e-9 * row_max) continue;
      const Interval term = aij * r[j];
      const Interval rest(sum_lo - term.lo(), sum_hi - term.hi());
      const Interval solved = (1.0 / aij) * (Interval(z.b[i], z.b[i]) - rest);
      const double excess = std::max(0.0, solved.hi() - 1.0) +
                            std::max(0.0, -1.0 - solved.lo());
      const double weight =
          z.G.col(j).norm() + 1e-3 * z.A.col(j).norm();
      const double score = excess * weight;
      if (score < best - 1e-15) {
        best = score;
        best_row = i;
        best_col = j;
      }
    }
  }
  if (best_row < 0) {
    // no usable pivot anywhere; every row is numerically null
    ConZono out = z;
    out.A.resize(0, z.num_gens());
    out.b.resize(0);
    return out;
  }
  return eliminate_pair(z, best_row, best_col);
}

ConZono girard_reduce(const ConZono& z, Eigen::Index max_gens) {
  const Eigen::Index n = z.dim();
  const Eigen::Index nc = z.num_cons();
  const Eigen::Index ng = z.num_gens();
  const Eigen::Index keep = max_gens - (n + nc);
  if (keep < 0) {
    try {
      return ConZono::from_interval(interval_hull(z));
    } catch (const EmptySetError&) {
      return z;
    }
  }

  Eigen::MatrixXd lifted(n + nc, ng);
  lifted.topRows(n) = z.G;
  lifted.bottomRows(nc) = z.A;

  std::vector<Eigen::Index> order(static_cast<size_t>(ng));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd score(ng);
  for (Eigen::Index j = 0; j < ng; ++j) {
    score[j] = lifted.col(j).lpNorm<1>() - lifted.col(j).lpNorm<Eigen::Infinity>();
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return score[a] < score[b]; });

  const Eigen::Index merge_count = ng - keep;
  Eigen::VectorXd box = Eigen::VectorXd::Zero(n + nc);
  for (Eigen::Index t = 0; t < merge_count; ++t)
    box += lifted.col(order[static_cast<size_t>(t)]).cwiseAbs();

  std::vector<Eigen::Index> kept(order.begin() + merge_count, order.end());
  std::sort(kept.begin(), kept.end());

  Eigen::Index box_cols = 0;
  for (Eigen::Index i = 0; i < box.size(); ++i)
    if (box[i] > 0.0) ++box_cols;

  ConZono out;
  out.c = z.c;
  out.G.resize(n, keep + box_cols);
  out.A.resize(nc, keep + box_cols);
  out.b = z.b;
  for (Eigen::Index t = 0; t < keep; ++t) {
    out.G.col(t) = z.G.col(kept[static_cast<size_t>(t)]);
    out.A.col(t) = z.A.col(kept[static_cast<size_t>(t)]);
  }
  Eigen::Index w = keep;
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    if (box[i] <= 0.0) continue;
    Eigen::VectorXd col = Eigen::VectorXd::Zero(n + nc);
    col[i] = box[i];
    out.G.col(w) = col.head(n);
    out.A.col(w) = col.tail(nc);
    ++w;
  }
  return out;
}

}  // namespace

ConZono reduce(const ConZono& z, Eigen::Index max_gens, Eigen::Index max_cons) {
  if (max_gens >= 0 && max_gens < z.dim())
    throw InputError("reduce: generator budget below the set dimension");
  ConZono out = drop_null_rows(z);
  if (max_cons >= 0) {
    while (out.num_cons() > max_cons) {
      out = eliminate_one_constraint(out);
      out = drop_null_rows(out);
    }
  }
  if (max_gens >= 0 && out.num_gens() > max_gens) {
    out = girard_reduce(out, max_gens);
  }
  return out;
}

}  // namespace czest
