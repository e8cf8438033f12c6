#ifndef CZEST_LINPROG_HPP_
#define CZEST_LINPROG_HPP_

#include <Eigen/Dense>

#include "czest/errors.hpp"

namespace czest {

/// min cost'x subject to A x = b, -1 <= x <= 1.
struct BoxEqualityLp {
  Eigen::VectorXd cost;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

struct LpSolution {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;  // argmin over the structural variables
  Eigen::VectorXd y;  // equality multipliers, one per row of A

  bool optimal() const { return status == Status::Optimal; }
};

/**
 * @brief Dense bounded-variable primal simplex for the fixed LP form used by
 * constrained-zonotope queries.
 *
 * Two-phase method with Bland's anti-cycling rule throughout. Rows are
 * max-norm equilibrated; the final basis is refactorized once to polish the
 * primal solution and recover the equality multipliers.
 *
 * One instance per thread: the solver keeps mutable workspace between calls.
 */
class LpSolver {
 public:
  static constexpr double kFeasTol = 1e-9;
  static constexpr double kPivotTol = 1e-11;
  static constexpr double kReducedCostTol = 1e-9;

  LpSolution solve(const BoxEqualityLp& problem);

  /// True iff {x : A x = b, |x|_inf <= 1} is nonempty (to kFeasTol).
  bool feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

 private:
  enum class VarState : uint8_t { Lower, Upper, Basic };

  struct Core {
    Eigen::MatrixXd tableau;  // m_act x (n + m_act), current B^{-1}[A | I]
    Eigen::MatrixXd a0;       // scaled, sign-flipped copy of A (active rows)
    Eigen::VectorXd b0;       // scaled, sign-flipped rhs
    Eigen::VectorXd beta;     // values of basic variables
    std::vector<int> basis;
    std::vector<VarState> state;
    std::vector<double> xval;  // bound values of nonbasic variables
    std::vector<int> row_origin;
    std::vector<double> row_scale;  // combined flip/scale per original row
    int n = 0;                      // structural count
    bool feasible = false;
  };

  bool run_phase1(Core& core);
  void run_phase2(Core& core, const Eigen::VectorXd& cost);
  void simplex_loop(Core& core, const Eigen::VectorXd& full_cost,
                    bool allow_artificial_entering);
  Core setup(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
};

}  // namespace czest

#endif
