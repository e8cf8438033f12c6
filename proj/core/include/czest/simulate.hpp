#ifndef CZEST_SIMULATE_HPP_
#define CZEST_SIMULATE_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "czest/systems.hpp"

namespace czest {

/// Deterministic uniform sampling, identical across platforms for a fixed
/// seed (doubles are built from the raw 64-bit stream directly).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool coin() { return (engine_() & 1u) != 0; }

 private:
  std::mt19937_64 engine_;
};

enum class NoiseMode { kUniform, kExtreme };

/// Seeded ground truth: states x_0..x_N, measurements y_0..y_N, and the
/// sampled noise always inside the declared bounds. Extreme mode draws
/// box vertices instead of uniform interior points.
struct Trajectory {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> measurements;
};

Trajectory simulate_truth(const BenchmarkSystem& sys, uint64_t seed, int steps,
                          NoiseMode mode);

/// One sample from a box, per the noise mode.
Eigen::VectorXd sample_box(const IntervalVector& box, Rng& rng, NoiseMode mode);

}  // namespace czest

#endif
