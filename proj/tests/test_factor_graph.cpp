#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "czest/factor_graph.hpp"
#include "czest/simulate.hpp"
#include "czest/systems.hpp"
#include "doctest.h"

using namespace czest;

TEST_CASE("recording identity keeps only the inputs") {
  const FactorGraph g = record(3, 0, [](Tape& t) {
    return std::vector<Var>{t.input(0), t.input(1), t.input(2)};
  });
  CHECK(g.num_factors() == 3);
  CHECK(g.n_inputs == 3);
  CHECK(g.outputs == std::vector<int>{0, 1, 2});
}

TEST_CASE("recording (s1+s2, s1*s2) yields four factors") {
  const FactorGraph g = record(2, 0, [](Tape& t) {
    return std::vector<Var>{t.input(0) + t.input(1), t.input(0) * t.input(1)};
  });
  CHECK(g.num_factors() == 4);
  CHECK(g.outputs == std::vector<int>{2, 3});
}

TEST_CASE("cube roots are outside the library") {
  // s1 / (s2*s3*cbrt((s2+s3)/3)) needs a cube root, which recording rejects
  CHECK_THROWS_AS(record(3, 0,
                         [](Tape& t) {
                           const Var s1 = t.input(0), s2 = t.input(1),
                                     s3 = t.input(2);
                           const Var root = cbrt((s2 + s3) / 3.0);
                           return std::vector<Var>{s1 / (s2 * s3 * root)};
                         }),
                  UnsupportedOpError);
  CHECK_THROWS_AS(record(1, 0,
                         [](Tape& t) {
                           return std::vector<Var>{pow(t.input(0), -2)};
                         }),
                  UnsupportedOpError);
}

TEST_CASE("replaying a tape reproduces the function bit-exactly") {
  const BenchmarkSystem sys = make_example1();
  // mirrors the recorded factor sequence: division by a constant records as
  // multiplication by its reciprocal
  const auto direct = [](const Eigen::VectorXd& s) {
    const double x1 = s[0], x2 = s[1], w1 = s[2], w2 = s[3];
    const double frac = (x1 * x2) / (x1 + 4.0);
    Eigen::Vector2d out;
    out[0] = 3.0 * x1 - std::pow(x1, 2) * (1.0 / 7.0) - 4.0 * frac + w1;
    out[1] = -2.0 * x2 + 3.0 * frac + w2;
    return out;
  };

  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd s(4);
    for (int i = 0; i < 4; ++i) s[i] = rng.uniform(-4, 6);
    if (std::abs(s[0] + 4.0) < 0.5) s[0] += 1.0;
    const RealEval eval = eval_real(sys.model.f, s);
    const Eigen::Vector2d expected = direct(s);
    CHECK(eval.outputs[0] == expected[0]);  // same operation order, bit exact
    CHECK(eval.outputs[1] == expected[1]);
  }
}

TEST_CASE("benchmark dynamics at the documented point") {
  const BenchmarkSystem sys = make_example1();
  Eigen::VectorXd s(4);
  s << 5.2, 0.65, 0.0, 0.0;
  const RealEval eval = eval_real(sys.model.f, s);
  CHECK(eval.outputs[0] == doctest::Approx(10.2675).epsilon(1e-4));
  CHECK(eval.outputs[1] == doctest::Approx(-0.1978).epsilon(1e-3));
}

TEST_CASE("outputs are the selector image of the factors") {
  const FactorGraph g = record(2, 0, [](Tape& t) {
    const Var sum = t.input(0) + t.input(1);
    return std::vector<Var>{sum, t.input(0)};
  });
  const Eigen::MatrixXd e = g.selector();
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd s(2);
    s << rng.uniform(-5, 5), rng.uniform(-5, 5);
    const RealEval eval = eval_real(g, s);
    CHECK((eval.outputs - e * eval.factors).norm() == 0.0);
  }
}

TEST_CASE("domain violations raise DomainError") {
  const FactorGraph g = record(2, 0, [](Tape& t) {
    return std::vector<Var>{t.input(0) / t.input(1), log(t.input(0))};
  });
  Eigen::VectorXd s(2);
  s << 1.0, 0.0;
  CHECK_THROWS_AS(eval_real(g, s), DomainError);
  s << -1.0, 2.0;
  CHECK_THROWS_AS(eval_real(g, s), DomainError);
}

TEST_CASE("interval evaluation on small graphs") {
  const FactorGraph sum = record(2, 0, [](Tape& t) {
    return std::vector<Var>{t.input(0) + t.input(1)};
  });
  const IntervalVector z =
      eval_interval(sum, IntervalVector{Interval(0, 1), Interval(0, 1)});
  CHECK(z[2].lo() == doctest::Approx(0.0));
  CHECK(z[2].hi() == doctest::Approx(2.0));

  const FactorGraph prod = record(2, 0, [](Tape& t) {
    return std::vector<Var>{t.input(0) * t.input(1)};
  });
  const IntervalVector zp =
      eval_interval(prod, IntervalVector{Interval(-1, 2), Interval(3, 4)});
  CHECK(zp[2].lo() == doctest::Approx(-4.0));
  CHECK(zp[2].hi() == doctest::Approx(8.0));
}

TEST_CASE("interval evaluation encloses real evaluation") {
  const BenchmarkSystem sys = make_example1();
  const FactorGraph& ell = sys.model.ell;
  IntervalVector box;
  box.append(Interval(4.0, 6.0));
  box.append(Interval(0.0, 1.0));
  box.append(Interval(-0.8, 0.8));
  box.append(Interval(-0.8, 0.8));
  box.append(Interval(-0.4, 0.4));
  box.append(Interval(-0.4, 0.4));
  const IntervalVector z = eval_interval(ell, box);

  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd s(6);
    for (int i = 0; i < 6; ++i) s[i] = rng.uniform(box[i].lo(), box[i].hi());
    const RealEval eval = eval_real(ell, s);
    for (int j = 0; j < ell.num_factors(); ++j) {
      CHECK(z[j].contains(eval.factors[j],
                          1e-12 * (1.0 + std::abs(eval.factors[j]))));
    }
  }
}

TEST_CASE("composite tape structure") {
  SUBCASE("identity dynamics with a sum measurement") {
    const FactorGraph f = record(2, 0, [](Tape& t) {
      return std::vector<Var>{t.input(0), t.input(1)};
    });
    const FactorGraph g = record(2, 0, [](Tape& t) {
      return std::vector<Var>{t.input(0) + t.input(1)};
    });
    const CompositeGraph ell = compose(f, g, 2, 0, 0);
    CHECK(ell.graph.num_factors() == 3);
    CHECK(ell.graph.outputs == std::vector<int>{2});
    CHECK(ell.state_rows == std::vector<int>{0, 1});
  }

  SUBCASE("factor counts add up") {
    // f with 5 factors total, g with 4 non-input factors
    const FactorGraph f = record(2, 0, [](Tape& t) {
      const Var a = t.input(0) + t.input(1);
      const Var b = a * t.input(0);
      const Var c = b + 1.0;
      return std::vector<Var>{c, a};
    });
    REQUIRE(f.num_factors() == 5);
    const FactorGraph g = record(3, 0, [](Tape& t) {
      const Var a = t.input(0) * t.input(1);
      const Var b = a + t.input(2);
      const Var c = exp(b);
      const Var d = c + 2.0;
      return std::vector<Var>{d};
    });
    REQUIRE(g.num_factors() - g.n_inputs == 4);
    const int n_v = 1;
    const CompositeGraph ell = compose(f, g, 2, 0, n_v);
    CHECK(ell.graph.num_factors() == 5 + 4 + n_v);
  }

  SUBCASE("identity measurement reuses the state rows") {
    const FactorGraph f = record(2, 0, [](Tape& t) {
      return std::vector<Var>{t.input(0) * 2.0, t.input(1) + t.input(0)};
    });
    const FactorGraph g = record(2, 0, [](Tape& t) {
      return std::vector<Var>{t.input(0), t.input(1)};
    });
    const CompositeGraph ell = compose(f, g, 2, 0, 0);
    CHECK(ell.graph.outputs == ell.state_rows);
  }
}

TEST_CASE("composite evaluation agrees with nested evaluation") {
  const BenchmarkSystem sys = make_example1();
  const SystemModel& m = sys.model;
  Rng rng(23);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd x(2), w(2), v(2);
    x << rng.uniform(4, 6), rng.uniform(0, 1);
    w << rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8);
    v << rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4);

    Eigen::VectorXd fs(4);
    fs << x, w;
    const Eigen::VectorXd xnext = eval_real(m.f, fs).outputs;
    Eigen::VectorXd gs(4);
    gs << xnext, v;
    const Eigen::VectorXd y = eval_real(m.g, gs).outputs;

    Eigen::VectorXd es(6);
    es << x, w, v;
    const RealEval ell = eval_real(m.ell, es);
    CHECK((ell.outputs - y).norm() == 0.0);

    Eigen::VectorXd state_out(2);
    for (int i = 0; i < 2; ++i)
      state_out[i] = ell.factors[m.ell_state_rows[static_cast<size_t>(i)]];
    CHECK((state_out - xnext).norm() == 0.0);
  }
}

TEST_CASE("parameter slots re-bind between evaluations") {
  const FactorGraph f = record(1, 1, [](Tape& t) {
    return std::vector<Var>{t.input(0) * 2.0 + t.param(0)};
  });
  Eigen::VectorXd s(1);
  s << 3.0;
  const double u1[] = {5.0};
  const double u2[] = {-1.0};
  CHECK(eval_real(f, s, u1).outputs[0] == 11.0);
  CHECK(eval_real(f, s, u2).outputs[0] == 5.0);

  const IntervalVector z =
      eval_interval(f, IntervalVector{Interval(0, 1)}, u1);
  CHECK(z[f.outputs[0]].lo() == doctest::Approx(5.0));
  CHECK(z[f.outputs[0]].hi() == doctest::Approx(7.0));
}

TEST_CASE("affine forms flag linear measurement tapes") {
  const BenchmarkSystem ex2 = make_example2();
  CHECK(ex2.model.g_linear);
  Eigen::MatrixXd c_expected(3, 4);
  c_expected << 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1;
  CHECK((ex2.model.C - c_expected).norm() == doctest::Approx(0.0));
  CHECK((ex2.model.Dv - Eigen::MatrixXd::Identity(3, 3)).norm() ==
        doctest::Approx(0.0));

  const BenchmarkSystem ex1 = make_example1();
  CHECK(!ex1.model.g_linear);
  const BenchmarkSystem ex3 = make_example3();
  CHECK(!ex3.model.g_linear);
}
