#include "czest/simulate.hpp"

namespace czest {

Eigen::VectorXd sample_box(const IntervalVector& box, Rng& rng, NoiseMode mode) {
  Eigen::VectorXd out(box.size());
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    const Interval& c = box[i];
    out[i] = mode == NoiseMode::kUniform ? rng.uniform(c.lo(), c.hi())
                                         : (rng.coin() ? c.hi() : c.lo());
  }
  return out;
}

Trajectory simulate_truth(const BenchmarkSystem& sys, uint64_t seed, int steps,
                          NoiseMode mode) {
  Rng rng(seed);
  Trajectory traj;
  traj.states.reserve(static_cast<size_t>(steps) + 1);
  traj.measurements.reserve(static_cast<size_t>(steps) + 1);

  const SystemModel& model = sys.model;
  Eigen::VectorXd x = sys.x0_true;

  auto measure = [&](const Eigen::VectorXd& state) {
    const Eigen::VectorXd v = sample_box(sys.v_bounds, rng, mode);
    Eigen::VectorXd gs(model.dims.n_x + model.dims.n_v);
    gs << state, v;
    return eval_real(model.g, gs).outputs;
  };

  traj.states.push_back(x);
  traj.measurements.push_back(measure(x));

  for (int k = 1; k <= steps; ++k) {
    const Eigen::VectorXd w = sample_box(sys.w_bounds, rng, mode);
    const Eigen::VectorXd u = sys.input_fn(k - 1);
    Eigen::VectorXd fs(model.dims.n_x + model.dims.n_w);
    fs << x, w;
    x = eval_real(model.f, fs, std::span<const double>(u.data(), u.size()))
            .outputs;
    traj.states.push_back(x);
    traj.measurements.push_back(measure(x));
  }
  return traj;
}

}  // namespace czest
