#ifndef CZEST_SYSTEMS_HPP_
#define CZEST_SYSTEMS_HPP_

#include <functional>
#include <string>
#include <vector>

#include "czest/estimator.hpp"

namespace czest {

/**
 * @brief A registered benchmark: the system model plus its bound sets,
 * simulation seed state, horizon, and representation limits.
 */
struct BenchmarkSystem {
  std::string name;
  SystemModel model;

  ConZono x0_set;            // initial enclosure X0
  ConZono w_set;             // process-noise set W
  ConZono v_set;             // measurement-noise set V
  IntervalVector w_bounds;   // box of W (the benchmark sets are boxes)
  IntervalVector v_bounds;   // box of V

  Eigen::VectorXd x0_true;   // simulation initial state
  int default_steps = 0;
  Eigen::Index default_gen_limit = 0;
  Eigen::Index default_con_limit = 0;
  double ts = 0.0;

  // known input u_k; empty vector for autonomous systems
  std::function<Eigen::VectorXd(int)> input_fn;
};

/// Two-state system with rational dynamics and a trigonometric measurement.
BenchmarkSystem make_example1();

/// Four-state stirred-tank reactor with bilinear dynamics and linear
/// measurements (takes the linear-update fast path).
BenchmarkSystem make_example2();

/// Planar two-link arm with trigonometric dynamics and end-effector
/// position measurements. `ts` is the Euler discretization step.
BenchmarkSystem make_example3(double ts = 0.01);

const std::vector<std::string>& system_names();

/// Factory by name; `ts` overrides the discretization step where the system
/// has one (0 keeps the default). Throws ConfigError for unknown names.
BenchmarkSystem make_system(const std::string& name, double ts = 0.0);

}  // namespace czest

#endif
