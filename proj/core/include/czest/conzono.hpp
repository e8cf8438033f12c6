#ifndef CZEST_CONZONO_HPP_
#define CZEST_CONZONO_HPP_

#include <Eigen/Dense>

#include "czest/interval.hpp"
#include "czest/linprog.hpp"
#include "czest/polytope.hpp"

namespace czest {

/**
 * @brief Constrained zonotope {c + G xi : |xi|_inf <= 1, A xi = b}.
 *
 * A zonotope is the constraint-free case. Values are immutable after
 * construction; every operation allocates a fresh set.
 */
struct ConZono {
  Eigen::MatrixXd G;  // n x n_g
  Eigen::VectorXd c;  // n
  Eigen::MatrixXd A;  // n_c x n_g
  Eigen::VectorXd b;  // n_c

  Eigen::Index dim() const { return c.size(); }
  Eigen::Index num_gens() const { return G.cols(); }
  Eigen::Index num_cons() const { return A.rows(); }

  static ConZono zonotope(Eigen::MatrixXd G, Eigen::VectorXd c);
  static ConZono point(Eigen::VectorXd c);
  static ConZono from_interval(const IntervalVector& box);
};

/// Cartesian product: block-diagonal assembly; orders add.
ConZono cartesian_product(const ConZono& z, const ConZono& w);

/// Linear image R * Z.
ConZono linear_image(const Eigen::MatrixXd& r, const ConZono& z);

/// Minkowski sum.
ConZono minkowski_sum(const ConZono& z, const ConZono& w);

/// Generalized intersection {z in Z : R z in Y}.
ConZono generalized_intersect(const ConZono& z, const Eigen::MatrixXd& r,
                              const ConZono& y);

/// Exact intersection with an H-rep polytope. The halfspace offsets sigma
/// come from the interval hull of H * Z0 with Z0 the constraint-dropped
/// zonotope of Z, so no linear programs are needed.
ConZono intersect_polytope(const ConZono& z, const HPolytope& p);

/// Componentwise exact interval hull via 2n LPs. Throws EmptySetError.
IntervalVector interval_hull(const ConZono& z);

/// True iff x is a member (an LP feasibility query).
bool contains_point(const ConZono& z, const Eigen::VectorXd& x);

/// True iff the set is empty (B_inf(A, b) infeasible).
bool is_empty(const ConZono& z);

/**
 * @brief Enclosing set with at most `max_gens` generators and `max_cons`
 * constraints.
 *
 * Constraints are removed one at a time by solving one constraint for one
 * factor and substituting (Gauss elimination with interval estimates of the
 * factors); the (constraint, factor) pair is chosen to minimize a
 * radius-growth score, lowest index winning ties. Generators are then
 * reduced on the lifted matrix [G; A] by merging the smallest columns into a
 * box. Falls back to the interval hull when the budget cannot be met.
 * Negative limits mean unlimited.
 */
ConZono reduce(const ConZono& z, Eigen::Index max_gens, Eigen::Index max_cons);

/// Interval estimates of the factors xi over B_inf(A, b), from iterated
/// constraint propagation starting at [-1, 1].
IntervalVector factor_bounds(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             int sweeps = 10);

}  // namespace czest

#endif
