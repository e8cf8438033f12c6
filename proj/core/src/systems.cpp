#include "czest/systems.hpp"

#include <cmath>

namespace czest {

namespace {

IntervalVector centered_box(const std::vector<double>& radii) {
  IntervalVector box;
  for (double r : radii) box.append(Interval(-r, r));
  return box;
}

}  // namespace

BenchmarkSystem make_example1() {
  BenchmarkSystem sys;
  sys.name = "example1";

  FactorGraph f = record(4, 0, [](Tape& t) {
    const Var x1 = t.input(0), x2 = t.input(1);
    const Var w1 = t.input(2), w2 = t.input(3);
    const Var frac = (x1 * x2) / (x1 + 4.0);
    const Var f1 = 3.0 * x1 - pow(x1, 2) / 7.0 - 4.0 * frac + w1;
    const Var f2 = -2.0 * x2 + 3.0 * frac + w2;
    return std::vector<Var>{f1, f2};
  });
  FactorGraph g = record(4, 0, [](Tape& t) {
    const Var x1 = t.input(0), x2 = t.input(1);
    const Var v1 = t.input(2), v2 = t.input(3);
    const Var y1 = x1 - sin(0.5 * x2) + v1;
    const Var y2 = x2 - x1 * x2 + v2;
    return std::vector<Var>{y1, y2};
  });
  sys.model = make_system_model(std::move(f), std::move(g),
                                SystemDims{.n_x = 2, .n_w = 2, .n_v = 2,
                                           .n_u = 0, .n_y = 2});

  Eigen::MatrixXd g0(2, 3);
  g0 << 0.5, 1.0, -0.5, 0.5, 0.5, 0.0;
  sys.x0_set = ConZono::zonotope(g0, Eigen::Vector2d(5.0, 0.5));
  sys.w_bounds = centered_box({0.8, 0.8});
  sys.v_bounds = centered_box({0.4, 0.4});
  sys.w_set = ConZono::from_interval(sys.w_bounds);
  sys.v_set = ConZono::from_interval(sys.v_bounds);
  sys.x0_true = Eigen::Vector2d(5.2, 0.65);
  sys.default_steps = 100;
  sys.default_gen_limit = 20;
  sys.default_con_limit = 8;
  sys.input_fn = [](int) { return Eigen::VectorXd(0); };
  return sys;
}

BenchmarkSystem make_example2() {
  BenchmarkSystem sys;
  sys.name = "example2";
  const double ts = 0.015;
  const double kappa1 = 0.05;
  const double kappa2 = 0.4;
  sys.ts = ts;

  FactorGraph f = record(7, 0, [&](Tape& t) {
    const Var x1 = t.input(0), x2 = t.input(1), x3 = t.input(2),
              x4 = t.input(3);
    const Var w1 = t.input(4), w2 = t.input(5), w3 = t.input(6);
    const Var a = w3 * (x1 * x2);
    const Var b = kappa2 * (x1 * x3);
    const Var f1 = x1 + ts * (kappa1 * (w1 - 2.0 * x1) - a - b);
    const Var f2 = x2 + ts * (kappa1 * (w2 - 2.0 * x2) - a);
    const Var f3 = x3 + ts * (a - b - (2.0 * kappa1) * x3);
    const Var f4 = x4 + ts * (b - (2.0 * kappa1) * x4);
    return std::vector<Var>{f1, f2, f3, f4};
  });
  FactorGraph g = record(7, 0, [](Tape& t) {
    const Var x1 = t.input(0), x2 = t.input(1), x3 = t.input(2),
              x4 = t.input(3);
    const Var v1 = t.input(4), v2 = t.input(5), v3 = t.input(6);
    const Var y1 = x1 + x2 + x3 + v1;
    const Var y2 = x2 + x3 + x4 + v2;
    const Var y3 = x1 + x4 + v3;
    return std::vector<Var>{y1, y2, y3};
  });
  sys.model = make_system_model(std::move(f), std::move(g),
                                SystemDims{.n_x = 4, .n_w = 3, .n_v = 3,
                                           .n_u = 0, .n_y = 3});

  sys.x0_true.resize(4);
  sys.x0_true << 0.036, 0.038, 0.36, 0.052;
  sys.x0_set = ConZono::zonotope(0.01 * Eigen::MatrixXd::Identity(4, 4),
                                 sys.x0_true);
  sys.w_bounds = IntervalVector{Interval(0.9, 1.1), Interval(0.8, 1.0),
                                Interval(10.0, 50.0)};
  sys.v_bounds = centered_box({0.01, 0.01, 0.001});
  sys.w_set = ConZono::from_interval(sys.w_bounds);
  sys.v_set = ConZono::from_interval(sys.v_bounds);
  sys.default_steps = 600;
  sys.default_gen_limit = 60;
  sys.default_con_limit = 20;
  sys.input_fn = [](int) { return Eigen::VectorXd(0); };
  return sys;
}

BenchmarkSystem make_example3(double ts) {
  BenchmarkSystem sys;
  sys.name = "example3";
  sys.ts = ts;

  // link lengths/masses and joint coefficients
  const double l1 = 3.0, l2 = 2.0, m1 = 2.0, m2 = 1.0;
  const double c1 = 10.0, c2 = 1.0, k1 = 7.0, k2 = 5.0;
  const double m11 = m1 * l1 * l1 / 3.0 + m2 * l1 * l1;  // 15
  const double m22 = m2 * l2 * l2 / 3.0;                 // 4/3
  const double coupling = 0.5 * m2 * l1 * l2;            // 3

  FactorGraph f = record(4, 1, [&](Tape& t) {
    const Var x1 = t.input(0), x2 = t.input(1), x3 = t.input(2),
              x4 = t.input(3);
    const Var u = t.param(0);

    const Var d = x1 - x2;
    const Var s = sin(d);
    const Var m12 = coupling * cos(d);
    const Var det = m11 * m22 - pow(m12, 2);

    const Var gamma1 = coupling * (s * pow(x4, 2)) + (k1 + k2) * x1 -
                       k2 * x2 + (c1 + c2) * x3 - c2 * x4;
    const Var gamma2 = -coupling * (s * pow(x3, 2)) - k2 * x1 + k2 * x2 -
                       c2 * x3 + c2 * x4;

    const Var rhs1 = u - gamma1;
    const Var rhs2 = -gamma2;
    const Var acc1 = (m22 * rhs1 - m12 * rhs2) / det;
    const Var acc2 = (m11 * rhs2 - m12 * rhs1) / det;

    const Var f1 = x1 + ts * x3;
    const Var f2 = x2 + ts * x4;
    const Var f3 = x3 + ts * acc1;
    const Var f4 = x4 + ts * acc2;
    return std::vector<Var>{f1, f2, f3, f4};
  });
  FactorGraph g = record(6, 0, [&](Tape& t) {
    const Var x1 = t.input(0), x2 = t.input(1);
    const Var v1 = t.input(4), v2 = t.input(5);
    const Var y1 = l1 * cos(x1) + l2 * cos(x2) + v1;
    const Var y2 = l1 * sin(x1) + l2 * sin(x2) + v2;
    return std::vector<Var>{y1, y2};
  });
  sys.model = make_system_model(std::move(f), std::move(g),
                                SystemDims{.n_x = 4, .n_w = 0, .n_v = 2,
                                           .n_u = 1, .n_y = 2});

  Eigen::VectorXd radii(4);
  radii << 0.1745, 0.1745, 0.0873, 0.0873;
  sys.x0_set = ConZono::zonotope(Eigen::MatrixXd(radii.asDiagonal()),
                                 Eigen::VectorXd::Zero(4));
  sys.w_bounds = IntervalVector();
  sys.v_bounds = centered_box({0.01, 0.01});
  sys.w_set = ConZono::point(Eigen::VectorXd(0));
  sys.v_set = ConZono::from_interval(sys.v_bounds);
  sys.x0_true = Eigen::VectorXd::Zero(4);
  sys.default_steps = 450;
  sys.default_gen_limit = 60;
  sys.default_con_limit = 20;
  sys.input_fn = [ts](int k) {
    Eigen::VectorXd u(1);
    u[0] = 20.0 * std::sin(k * ts);
    return u;
  };
  return sys;
}

const std::vector<std::string>& system_names() {
  static const std::vector<std::string> names = {"example1", "example2",
                                                 "example3"};
  return names;
}

BenchmarkSystem make_system(const std::string& name, double ts) {
  if (name == "example1") return make_example1();
  if (name == "example2") return make_example2();
  if (name == "example3") return make_example3(ts > 0.0 ? ts : 0.01);
  throw ConfigError("unknown system: " + name);
}

}  // namespace czest
