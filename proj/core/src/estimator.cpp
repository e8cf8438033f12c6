#include "czest/estimator.hpp"

#include <chrono>
#include <cmath>

namespace czest {

namespace {

// Guard band applied to the boxes that feed the lifted relaxation. The
// interval hull endpoints come from an LP whose termination tolerance is
// finite; the band keeps the relaxation valid for points at the hull
// boundary.
IntervalVector guard(const IntervalVector& box) {
  IntervalVector out;
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    const Interval& c = box[i];
    const double eps = 1e-12 * (1.0 + std::max(std::abs(c.lo()), std::abs(c.hi())));
    out.append(c.inflated(eps));
  }
  return out;
}

IntervalVector concat(const IntervalVector& a, const IntervalVector& b) {
  IntervalVector out = a;
  out.append(b);
  return out;
}

// Trailing factor bounds as a zonotope, zero-width generators included so
// the generator count stays exactly n_z - n_inputs.
ConZono trailing_zonotope(const IntervalVector& bounds, int n_inputs) {
  const Eigen::Index count = bounds.size() - n_inputs;
  return ConZono::from_interval(bounds.segment(n_inputs, count));
}

ConZono interval_selection_zonotope(const IntervalVector& bounds,
                                    const std::vector<int>& factors) {
  IntervalVector seg;
  for (int j : factors) seg.append(bounds[j]);
  return ConZono::from_interval(seg);
}

}  // namespace

SystemModel make_system_model(FactorGraph f, FactorGraph g, SystemDims dims) {
  if (f.n_inputs != dims.n_x + dims.n_w)
    throw ShapeError("make_system_model: f inputs != n_x + n_w");
  if (g.n_inputs != dims.n_x + dims.n_v)
    throw ShapeError("make_system_model: g inputs != n_x + n_v");
  if (f.num_outputs() != dims.n_x)
    throw ShapeError("make_system_model: f outputs != n_x");
  if (g.num_outputs() != dims.n_y)
    throw ShapeError("make_system_model: g outputs != n_y");
  if (f.n_params != dims.n_u)
    throw ShapeError("make_system_model: f params != n_u");

  SystemModel model;
  model.dims = dims;
  CompositeGraph composite = compose(f, g, dims.n_x, dims.n_w, dims.n_v);
  model.ell = std::move(composite.graph);
  model.ell_state_rows = std::move(composite.state_rows);
  model.f = std::move(f);
  model.g = std::move(g);

  // Remark-style fast path: an all-affine measurement tape yields
  // g(x, v) = C x + Dv v + offset exactly.
  const auto forms = affine_forms(model.g);
  model.g_linear = true;
  for (int row : model.g.outputs) {
    if (!forms[static_cast<size_t>(row)]) {
      model.g_linear = false;
      break;
    }
  }
  if (model.g_linear) {
    model.C.resize(dims.n_y, dims.n_x);
    model.Dv.resize(dims.n_y, dims.n_v);
    model.g_offset.resize(dims.n_y);
    for (int i = 0; i < dims.n_y; ++i) {
      const AffineForm& form =
          *forms[static_cast<size_t>(model.g.outputs[static_cast<size_t>(i)])];
      model.C.row(i) = form.coeffs.head(dims.n_x).transpose();
      model.Dv.row(i) = form.coeffs.tail(dims.n_v).transpose();
      model.g_offset[i] = form.offset;
    }
  }
  return model;
}

EliminationPlan build_elimination(const FactorGraph& graph,
                                  const LiftedRelaxation& lift,
                                  const HPolytope& p_y,
                                  const Eigen::MatrixXd& selector) {
  const int nz = graph.num_factors();
  if (lift.polytope.dim != nz || (p_y.A.rows() > 0 && p_y.dim != nz))
    throw ShapeError("build_elimination: polytope dimension != factor count");

  EliminationPlan plan;
  std::vector<int> defining_row(static_cast<size_t>(nz), -1);
  for (size_t r = 0; r < lift.eq_row_factor.size(); ++r) {
    const int j = lift.eq_row_factor[r];
    if (j >= 0) defining_row[static_cast<size_t>(j)] = static_cast<int>(r);
  }

  std::vector<int> col_pos(static_cast<size_t>(nz), -1);
  for (int j = 0; j < nz; ++j) {
    if (is_eliminable(graph.nodes[static_cast<size_t>(j)].kind) &&
        defining_row[static_cast<size_t>(j)] >= 0) {
      plan.eliminate.push_back(j);
    } else {
      plan.retain.push_back(j);
    }
  }
  const Eigen::Index ne = static_cast<Eigen::Index>(plan.eliminate.size());
  const Eigen::Index nr = static_cast<Eigen::Index>(plan.retain.size());
  for (Eigen::Index t = 0; t < ne; ++t)
    col_pos[static_cast<size_t>(plan.eliminate[static_cast<size_t>(t)])] =
        static_cast<int>(t);
  for (Eigen::Index t = 0; t < nr; ++t)
    col_pos[static_cast<size_t>(plan.retain[static_cast<size_t>(t)])] =
        static_cast<int>(t);

  auto split_cols = [&](const Eigen::MatrixXd& rows, Eigen::MatrixXd& left,
                        Eigen::MatrixXd& right) {
    left.resize(rows.rows(), ne);
    right.resize(rows.rows(), nr);
    for (int j = 0; j < nz; ++j) {
      const bool elim =
          is_eliminable(graph.nodes[static_cast<size_t>(j)].kind) &&
          defining_row[static_cast<size_t>(j)] >= 0;
      if (elim)
        left.col(col_pos[static_cast<size_t>(j)]) = rows.col(j);
      else
        right.col(col_pos[static_cast<size_t>(j)]) = rows.col(j);
    }
  };

  // rows of [A_ee A_er]: the defining equalities in ascending factor order
  Eigen::MatrixXd def_rows(ne, nz);
  plan.b_e.resize(ne);
  for (Eigen::Index t = 0; t < ne; ++t) {
    const int j = plan.eliminate[static_cast<size_t>(t)];
    const int r = defining_row[static_cast<size_t>(j)];
    def_rows.row(t) = lift.polytope.A.row(r);
    plan.b_e[t] = lift.polytope.b[r];
  }
  split_cols(def_rows, plan.a_ee, plan.a_er);

  // remaining equality rows: non-defining lift rows, then the measurement
  const Eigen::Index n_other =
      lift.polytope.A.rows() - ne + (p_y.A.rows() > 0 ? p_y.A.rows() : 0);
  Eigen::MatrixXd other_rows(n_other, nz);
  plan.b_r.resize(n_other);
  Eigen::Index w = 0;
  for (Eigen::Index r = 0; r < lift.polytope.A.rows(); ++r) {
    if (lift.eq_row_factor[static_cast<size_t>(r)] >= 0) continue;
    other_rows.row(w) = lift.polytope.A.row(r);
    plan.b_r[w] = lift.polytope.b[r];
    ++w;
  }
  for (Eigen::Index r = 0; r < p_y.A.rows(); ++r) {
    other_rows.row(w) = p_y.A.row(r);
    plan.b_r[w] = p_y.b[r];
    ++w;
  }
  split_cols(other_rows, plan.a_re, plan.a_rr);

  split_cols(lift.polytope.H, plan.h_e, plan.h_r);
  split_cols(selector, plan.e_e, plan.e_r);

  // A_ee is unit lower triangular by construction: forward substitution
  plan.minv_aer = plan.a_er;
  plan.minv_be = plan.b_e;
  for (Eigen::Index i = 0; i < ne; ++i) {
    for (Eigen::Index t = 0; t < i; ++t) {
      const double factor = plan.a_ee(i, t);
      if (factor != 0.0) {
        plan.minv_aer.row(i) -= factor * plan.minv_aer.row(t);
        plan.minv_be[i] -= factor * plan.minv_be[t];
      }
    }
  }

  plan.reduced = HPolytope::whole_space(nr);
  plan.reduced.H = plan.h_r - plan.h_e * plan.minv_aer;
  plan.reduced.k = lift.polytope.k - plan.h_e * plan.minv_be;
  plan.reduced.A = plan.a_rr - plan.a_re * plan.minv_aer;
  plan.reduced.b = plan.b_r - plan.a_re * plan.minv_be;

  plan.g_f = plan.e_r - plan.e_e * plan.minv_aer;
  plan.c_f = plan.e_e * plan.minv_be;
  return plan;
}

ConZono update_initial(const SystemModel& model, const ConZono& x0,
                       const ConZono& v, const Eigen::VectorXd& y0) {
  if (y0.size() != model.dims.n_y)
    throw ShapeError("update_initial: y0 size != n_y");
  const IntervalVector box =
      guard(concat(interval_hull(x0), interval_hull(v)));
  const LiftedRelaxation lift = build_lifted(model.g, box);
  const HPolytope p_y = HPolytope::equalities(model.g.selector(), y0);

  const ConZono lifted_set = cartesian_product(
      cartesian_product(x0, v), trailing_zonotope(lift.bounds, model.g.n_inputs));
  const ConZono refined =
      intersect_polytope(lifted_set, intersect(lift.polytope, p_y));

  std::vector<int> x_rows(static_cast<size_t>(model.dims.n_x));
  for (int i = 0; i < model.dims.n_x; ++i) x_rows[static_cast<size_t>(i)] = i;
  return linear_image(selector_matrix(x_rows, model.g.num_factors()), refined);
}

ConZono predict(const SystemModel& model, const ConZono& xprev,
                const IntervalVector& xprev_hull, const ConZono& w,
                const IntervalVector& w_hull, std::span<const double> u,
                StepCounts* counts) {
  const IntervalVector box = guard(concat(xprev_hull, w_hull));
  const LiftedRelaxation lift = build_lifted(model.f, box, u);

  const ConZono lifted_set = cartesian_product(
      cartesian_product(xprev, w), trailing_zonotope(lift.bounds, model.f.n_inputs));
  const ConZono refined = intersect_polytope(lifted_set, lift.polytope);
  ConZono out = linear_image(model.f.selector(), refined);
  if (counts != nullptr) {
    counts->lift_halfspaces = lift.polytope.H.rows();
    counts->lift_equalities = lift.polytope.A.rows();
    counts->pre_gens = out.num_gens();
    counts->pre_cons = out.num_cons();
  }
  return out;
}

ConZono predict_update_full(const SystemModel& model, const ConZono& xprev,
                            const IntervalVector& xprev_hull, const ConZono& w,
                            const IntervalVector& w_hull, const ConZono& v,
                            const IntervalVector& v_hull,
                            std::span<const double> u, const Eigen::VectorXd& y,
                            StepCounts* counts) {
  if (y.size() != model.dims.n_y)
    throw ShapeError("predict_update_full: y size != n_y");
  const IntervalVector box =
      guard(concat(concat(xprev_hull, w_hull), v_hull));
  const LiftedRelaxation lift = build_lifted(model.ell, box, u);
  const HPolytope p_y =
      HPolytope::equalities(model.ell.selector(), y);

  const ConZono lifted_set =
      cartesian_product(cartesian_product(cartesian_product(xprev, w), v),
                        trailing_zonotope(lift.bounds, model.ell.n_inputs));
  const ConZono refined =
      intersect_polytope(lifted_set, intersect(lift.polytope, p_y));
  ConZono out = linear_image(
      selector_matrix(model.ell_state_rows, model.ell.num_factors()), refined);
  if (counts != nullptr) {
    counts->lift_halfspaces = lift.polytope.H.rows();
    counts->lift_equalities = lift.polytope.A.rows() + p_y.A.rows();
    counts->eliminated = 0;
    counts->pre_gens = out.num_gens();
    counts->pre_cons = out.num_cons();
  }
  return out;
}

ConZono predict_update_reduced(const SystemModel& model, const ConZono& xprev,
                               const IntervalVector& xprev_hull,
                               const ConZono& w, const IntervalVector& w_hull,
                               const ConZono& v, const IntervalVector& v_hull,
                               std::span<const double> u,
                               const Eigen::VectorXd& y, StepCounts* counts) {
  if (y.size() != model.dims.n_y)
    throw ShapeError("predict_update_reduced: y size != n_y");
  const IntervalVector box =
      guard(concat(concat(xprev_hull, w_hull), v_hull));
  const LiftedRelaxation lift = build_lifted(model.ell, box, u);
  const HPolytope p_y =
      HPolytope::equalities(model.ell.selector(), y);
  const EliminationPlan plan = build_elimination(
      model.ell, lift, p_y,
      selector_matrix(model.ell_state_rows, model.ell.num_factors()));

  std::vector<int> retained_factors;
  for (int j : plan.retain)
    if (j >= model.ell.n_inputs) retained_factors.push_back(j);

  const ConZono lifted_set =
      cartesian_product(cartesian_product(cartesian_product(xprev, w), v),
                        interval_selection_zonotope(lift.bounds, retained_factors));
  const ConZono refined = intersect_polytope(lifted_set, plan.reduced);
  ConZono out = linear_image(plan.g_f, refined);
  out.c += plan.c_f;
  if (counts != nullptr) {
    counts->lift_halfspaces = lift.polytope.H.rows();
    counts->lift_equalities = lift.polytope.A.rows() + p_y.A.rows();
    counts->eliminated = static_cast<Eigen::Index>(plan.eliminate.size());
    counts->pre_gens = out.num_gens();
    counts->pre_cons = out.num_cons();
  }
  return out;
}

EstimatorState make_initial_state(const SystemModel& model, const ConZono& x0,
                                  const ConZono& v, const Eigen::VectorXd& y0) {
  const auto start = std::chrono::steady_clock::now();
  EstimatorState state;
  state.k = 0;
  state.xhat = update_initial(model, x0, v, y0);
  state.counts.pre_gens = state.xhat.num_gens();
  state.counts.pre_cons = state.xhat.num_cons();
  state.counts.gens = state.xhat.num_gens();
  state.counts.cons = state.xhat.num_cons();
  state.hull = interval_hull(state.xhat);
  state.step_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  return state;
}

EstimatorState estimate_step(const EstimatorState& state,
                             const SystemModel& model, const ConZono& w,
                             const IntervalVector& w_hull, const ConZono& v,
                             const IntervalVector& v_hull,
                             std::span<const double> u, const Eigen::VectorXd& y,
                             StepLimits limits) {
  const auto start = std::chrono::steady_clock::now();
  EstimatorState next;
  next.k = state.k + 1;

  ConZono estimate;
  if (model.g_linear) {
    next.counts.linear_path = true;
    const ConZono xbar =
        predict(model, state.xhat, state.hull, w, w_hull, u, &next.counts);
    ConZono innov = ConZono::point(y - model.g_offset);
    if (model.dims.n_v > 0)
      innov = minkowski_sum(innov, linear_image(-model.Dv, v));
    estimate = generalized_intersect(xbar, model.C, innov);
    next.counts.pre_gens = estimate.num_gens();
    next.counts.pre_cons = estimate.num_cons();
  } else {
    estimate = predict_update_reduced(model, state.xhat, state.hull, w, w_hull,
                                      v, v_hull, u, y, &next.counts);
  }

  next.xhat = reduce(estimate, limits.max_gens, limits.max_cons);
  next.counts.gens = next.xhat.num_gens();
  next.counts.cons = next.xhat.num_cons();
  next.hull = interval_hull(next.xhat);
  next.step_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  return next;
}

}  // namespace czest
