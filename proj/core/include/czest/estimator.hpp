#ifndef CZEST_ESTIMATOR_HPP_
#define CZEST_ESTIMATOR_HPP_

#include <span>
#include <vector>

#include "czest/conzono.hpp"
#include "czest/factor_graph.hpp"
#include "czest/relax.hpp"

namespace czest {

struct SystemDims {
  int n_x = 0, n_w = 0, n_v = 0, n_u = 0, n_y = 0;
};

/**
 * @brief Discrete-time system x+ = f(x, w; u), y = g(x, v) as factor tapes,
 * together with the composite tape ell(x, w, v; u) = g(f(x, w; u), v).
 *
 * When g is affine in (x, v) the measurement update can skip the lifted
 * relaxation entirely; `g_linear` flags that and (C, Dv, g_offset) hold
 * g(x, v) = C x + Dv v + g_offset.
 */
struct SystemModel {
  SystemDims dims;
  FactorGraph f;
  FactorGraph g;
  FactorGraph ell;
  std::vector<int> ell_state_rows;  // rows of E_f inside the composite tape

  bool g_linear = false;
  Eigen::MatrixXd C;   // n_y x n_x
  Eigen::MatrixXd Dv;  // n_y x n_v
  Eigen::VectorXd g_offset;
};

SystemModel make_system_model(FactorGraph f, FactorGraph g, SystemDims dims);

/// Representation budget applied at the end of each step; negative means
/// unlimited.
struct StepLimits {
  Eigen::Index max_gens = -1;
  Eigen::Index max_cons = -1;
};

/// Complexity bookkeeping of one prediction-update assembly.
struct StepCounts {
  Eigen::Index pre_gens = 0, pre_cons = 0;  // before order reduction
  Eigen::Index gens = 0, cons = 0;          // after order reduction
  Eigen::Index lift_halfspaces = 0;         // n_h of the stacked polytope
  Eigen::Index lift_equalities = 0;         // n_cp of the stacked polytope
  Eigen::Index eliminated = 0;              // n_e factors solved out
  bool linear_path = false;
};

struct EstimatorState {
  int k = 0;
  ConZono xhat;
  IntervalVector hull;
  StepCounts counts;
  double step_millis = 0.0;
};

/**
 * @brief Exact removal of the additive/affine factors from the stacked
 * polytope: the partitioned blocks, their triangular solve, and the reduced
 * polytope plus output map.
 */
struct EliminationPlan {
  std::vector<int> eliminate;  // factor indices, ascending
  std::vector<int> retain;     // factor indices, ascending

  Eigen::MatrixXd a_ee, a_er, a_re, a_rr;
  Eigen::VectorXd b_e, b_r;
  Eigen::MatrixXd h_e, h_r;
  Eigen::MatrixXd e_e, e_r;

  Eigen::MatrixXd minv_aer;  // A_ee^{-1} A_er
  Eigen::VectorXd minv_be;   // A_ee^{-1} b_e

  HPolytope reduced;     // over the retained coordinates
  Eigen::MatrixXd g_f;   // E_r - E_e A_ee^{-1} A_er
  Eigen::VectorXd c_f;   // E_e A_ee^{-1} b_e
};

/// Partitions P = lift.polytope ∩ p_y and solves out the eliminable factors.
/// `selector` is the output map E (rows over all factors) to push through.
EliminationPlan build_elimination(const FactorGraph& graph,
                                  const LiftedRelaxation& lift,
                                  const HPolytope& p_y,
                                  const Eigen::MatrixXd& selector);

/// Measurement-consistent initial enclosure from y0 (no dynamics involved).
ConZono update_initial(const SystemModel& model, const ConZono& x0,
                       const ConZono& v, const Eigen::VectorXd& y0);

/// Reachable-set enclosure through f alone.
ConZono predict(const SystemModel& model, const ConZono& xprev,
                const IntervalVector& xprev_hull, const ConZono& w,
                const IntervalVector& w_hull, std::span<const double> u,
                StepCounts* counts = nullptr);

/// One combined prediction-update through the composite tape.
ConZono predict_update_full(const SystemModel& model, const ConZono& xprev,
                            const IntervalVector& xprev_hull, const ConZono& w,
                            const IntervalVector& w_hull, const ConZono& v,
                            const IntervalVector& v_hull,
                            std::span<const double> u, const Eigen::VectorXd& y,
                            StepCounts* counts = nullptr);

/// The same enclosure with the eliminable factors solved out first; exactly
/// `eliminated` fewer generators and constraints than the full form.
ConZono predict_update_reduced(const SystemModel& model, const ConZono& xprev,
                               const IntervalVector& xprev_hull,
                               const ConZono& w, const IntervalVector& w_hull,
                               const ConZono& v, const IntervalVector& v_hull,
                               std::span<const double> u,
                               const Eigen::VectorXd& y,
                               StepCounts* counts = nullptr);

EstimatorState make_initial_state(const SystemModel& model, const ConZono& x0,
                                  const ConZono& v, const Eigen::VectorXd& y0);

/// One full step: reduced prediction-update (or the linear-measurement fast
/// path), order reduction to the limits, fresh interval hull.
EstimatorState estimate_step(const EstimatorState& state,
                             const SystemModel& model, const ConZono& w,
                             const IntervalVector& w_hull, const ConZono& v,
                             const IntervalVector& v_hull,
                             std::span<const double> u, const Eigen::VectorXd& y,
                             StepLimits limits);

}  // namespace czest

#endif
