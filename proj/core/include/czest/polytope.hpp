#ifndef CZEST_POLYTOPE_HPP_
#define CZEST_POLYTOPE_HPP_

#include <Eigen/Dense>

#include "czest/errors.hpp"

namespace czest {

/**
 * @brief Convex polytope {x : H x <= k, A x = b} with the equality block
 * stored separately from the inequalities.
 *
 * Any block may be empty. `dim` is the ambient dimension; a polytope with no
 * rows is the whole space.
 */
struct HPolytope {
  Eigen::Index dim = 0;
  Eigen::MatrixXd H;  // n_h x dim
  Eigen::VectorXd k;
  Eigen::MatrixXd A;  // n_cp x dim
  Eigen::VectorXd b;

  static HPolytope whole_space(Eigen::Index dim);
  static HPolytope equalities(Eigen::MatrixXd A, Eigen::VectorXd b);
  static HPolytope inequalities(Eigen::MatrixXd H, Eigen::VectorXd k);

  Eigen::Index num_halfspaces() const { return H.rows(); }
  Eigen::Index num_equalities() const { return A.rows(); }
};

/// Row stacking of both blocks; the exact intersection.
HPolytope intersect(const HPolytope& p, const HPolytope& q);

/// True iff H x <= k + tol and |A x - b| <= tol componentwise.
bool contains(const HPolytope& p, const Eigen::VectorXd& x, double tol);

}  // namespace czest

#endif
