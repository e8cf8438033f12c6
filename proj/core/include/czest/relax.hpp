#ifndef CZEST_RELAX_HPP_
#define CZEST_RELAX_HPP_

#include <span>
#include <vector>

#include "czest/factor_graph.hpp"
#include "czest/interval.hpp"
#include "czest/polytope.hpp"

namespace czest {

/**
 * @brief Polyhedral enclosure of a tape's space of factors over a box.
 *
 * `polytope` lives in R^{n_z} and contains every factor vector reachable
 * from inputs in the box; `bounds` is the natural interval extension of the
 * factors. `eq_row_factor[i]` names the factor whose defining equality is
 * equality row i (-1 when the row is not a defining row); these are the
 * rows factor elimination is allowed to solve out.
 */
struct LiftedRelaxation {
  HPolytope polytope;
  IntervalVector bounds;
  std::vector<int> eq_row_factor;
};

/// Halfspace enclosure rows for factor j alone, in R^{n_z}. Z must bound
/// every factor the node reads (normally eval_interval output).
HPolytope relax_rows(const FactorGraph& graph, int j, const IntervalVector& z,
                     std::span<const double> params = {});

/// The lifted enclosure: interval bounds plus the intersection of all
/// per-factor halfspace enclosures.
LiftedRelaxation build_lifted(const FactorGraph& graph, const IntervalVector& s,
                              std::span<const double> params = {});

/// Tangency points of the sine underestimator construction: the chord
/// through (bound, sin(bound)) that touches the curve tangentially.
/// s1: solves sin(ub) - sin(t) = (ub - t) cos(t) for t in [3pi/2, 2pi].
/// s2: solves sin(t) - sin(lb) = (t - lb) cos(t) for t in [3pi, 7pi/2].
double sine_tangency_s1(double ub);
double sine_tangency_s2(double lb);

/// Tangency of the odd-power envelope on [lo, hi] with lo < 0 < hi: the
/// point t in [0, hi] where the secant from (lo, lo^q) touches t^q.
double odd_power_tangency(int q, double lo, double hi);

}  // namespace czest

#endif
