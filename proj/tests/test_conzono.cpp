#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "czest/conzono.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace czest;
using czest::test::box_eq_vertices;
using czest::test::random_members;
using czest::test::sample_in_box;

namespace {

ConZono unit_square() {
  return ConZono::from_interval(
      IntervalVector{Interval(0, 1), Interval(0, 1)});
}

// random nonempty CZ with n <= 3, n_g <= 5
ConZono random_cz(Rng& rng, int n, int ng, int nc) {
  ConZono z;
  z.G.resize(n, ng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < ng; ++j) z.G(i, j) = rng.uniform(-1, 1);
  z.c.resize(n);
  for (int i = 0; i < n; ++i) z.c[i] = rng.uniform(-2, 2);
  z.A.resize(nc, ng);
  Eigen::VectorXd xi0(ng);
  for (int j = 0; j < ng; ++j) xi0[j] = rng.uniform(-0.9, 0.9);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < ng; ++j) z.A(i, j) = rng.uniform(-1, 1);
  z.b = z.A * xi0;
  return z;
}

// box guaranteed to enclose the constraint-dropped zonotope
IntervalVector enclosing_box(const ConZono& z, double inflate = 0.3) {
  IntervalVector box;
  for (Eigen::Index i = 0; i < z.dim(); ++i) {
    const double r = z.G.row(i).cwiseAbs().sum() + inflate;
    box.append(Interval(z.c[i] - r, z.c[i] + r));
  }
  return box;
}

}  // namespace

TEST_CASE("interval conversion") {
  const ConZono sq = unit_square();
  CHECK(sq.G.isApprox(0.5 * Eigen::Matrix2d::Identity()));
  CHECK(sq.c.isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK(sq.num_cons() == 0);
}

TEST_CASE("cartesian product") {
  const ConZono a = ConZono::from_interval(IntervalVector{Interval(0, 1)});
  const ConZono b = ConZono::from_interval(IntervalVector{Interval(0, 1)});
  const ConZono sq = cartesian_product(a, b);
  CHECK(sq.dim() == 2);
  CHECK(sq.num_gens() == 2);
  CHECK(sq.G.isApprox(0.5 * Eigen::Matrix2d::Identity()));

  const ConZono with_point =
      cartesian_product(sq, ConZono::point(Eigen::VectorXd::Constant(1, 3.0)));
  CHECK(with_point.dim() == 3);
  CHECK(with_point.num_gens() == 2);
  CHECK(contains_point(with_point, Eigen::Vector3d(0.5, 0.5, 3.0)));
  CHECK(!contains_point(with_point, Eigen::Vector3d(0.5, 0.5, 3.1)));

  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const ConZono z = random_cz(rng, 2, 3, 1);
    const ConZono w = random_cz(rng, 1, 2, 0);
    const ConZono zw = cartesian_product(z, w);
    const IntervalVector box = enclosing_box(zw);
    for (int s = 0; s < 100; ++s) {
      const Eigen::VectorXd p = sample_in_box(box, rng);
      const bool expected = contains_point(z, p.head(2)) &&
                            contains_point(w, p.tail(1));
      CHECK(contains_point(zw, p) == expected);
    }
  }
}

TEST_CASE("linear image") {
  const ConZono sq = unit_square();
  const ConZono same = linear_image(Eigen::Matrix2d::Identity(), sq);
  CHECK(same.G.isApprox(sq.G));
  CHECK(same.c.isApprox(sq.c));

  Eigen::MatrixXd r(1, 2);
  r << 1, 1;
  const IntervalVector hull = interval_hull(linear_image(r, sq));
  CHECK(hull[0].lo() == doctest::Approx(0.0));
  CHECK(hull[0].hi() == doctest::Approx(2.0));

  // independent oracle: extremes of R_i (c + G xi) as LPs over the factors
  Rng rng(43);
  LpSolver lp;
  for (int t = 0; t < 15; ++t) {
    const ConZono z = random_cz(rng, 3, 5, 1);
    Eigen::MatrixXd rr(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) rr(i, j) = rng.uniform(-1, 1);
    const ConZono rz = linear_image(rr, z);
    const IntervalVector h = interval_hull(rz);
    for (int i = 0; i < 2; ++i) {
      BoxEqualityLp prob;
      prob.A = z.A;
      prob.b = z.b;
      prob.cost = (rr.row(i) * z.G).transpose();
      const double lo = rr.row(i).dot(z.c) + lp.solve(prob).value;
      prob.cost = -prob.cost;
      const double hi = rr.row(i).dot(z.c) - lp.solve(prob).value;
      CHECK(h[i].lo() == doctest::Approx(lo).epsilon(1e-9));
      CHECK(h[i].hi() == doctest::Approx(hi).epsilon(1e-9));
    }
  }

  CHECK_THROWS_AS(linear_image(Eigen::MatrixXd::Identity(3, 3), sq), ShapeError);
}

TEST_CASE("minkowski sum") {
  const ConZono a = ConZono::from_interval(IntervalVector{Interval(0, 1)});
  const ConZono zero = ConZono::point(Eigen::VectorXd::Zero(1));
  Rng rng(47);

  const ConZono same = minkowski_sum(a, zero);
  for (int s = 0; s < 50; ++s) {
    Eigen::VectorXd p(1);
    p << rng.uniform(-0.5, 1.5);
    CHECK(contains_point(same, p) == contains_point(a, p));
  }

  const IntervalVector sum_hull = interval_hull(minkowski_sum(a, a));
  CHECK(sum_hull[0].lo() == doctest::Approx(0.0));
  CHECK(sum_hull[0].hi() == doctest::Approx(2.0));

  for (int t = 0; t < 10; ++t) {
    const ConZono z = random_cz(rng, 2, 4, 1);
    const ConZono w = random_cz(rng, 2, 3, 1);
    const ConZono zw = minkowski_sum(z, w);
    // supports add: the hull is the componentwise sum of hulls
    const IntervalVector hz = interval_hull(z);
    const IntervalVector hw = interval_hull(w);
    const IntervalVector hzw = interval_hull(zw);
    for (int i = 0; i < 2; ++i) {
      CHECK(hzw[i].lo() == doctest::Approx(hz[i].lo() + hw[i].lo()).epsilon(1e-9));
      CHECK(hzw[i].hi() == doctest::Approx(hz[i].hi() + hw[i].hi()).epsilon(1e-9));
    }
    auto zm = random_members(z, 40, rng);
    auto wm = random_members(w, 40, rng);
    for (size_t s = 0; s < zm.size(); ++s)
      CHECK(contains_point(zw, zm[s] + wm[s]));
  }
}

TEST_CASE("generalized intersection") {
  Rng rng(53);

  SUBCASE("identity R with an enclosing box keeps the set") {
    const ConZono z = random_cz(rng, 2, 4, 1);
    const ConZono y = ConZono::from_interval(enclosing_box(z));
    const ConZono zi = generalized_intersect(z, Eigen::Matrix2d::Identity(), y);
    const IntervalVector box = enclosing_box(z);
    for (int s = 0; s < 200; ++s) {
      const Eigen::VectorXd p = sample_in_box(box, rng);
      CHECK(contains_point(zi, p) == contains_point(z, p));
    }
  }

  SUBCASE("disjoint Y empties the intersection") {
    const ConZono sq = unit_square();
    Eigen::MatrixXd r(1, 2);
    r << 1, 0;
    const ConZono y =
        ConZono::from_interval(IntervalVector{Interval(5.0, 6.0)});
    CHECK(is_empty(generalized_intersect(sq, r, y)));
  }

  SUBCASE("strip restriction of the unit square") {
    const ConZono sq = unit_square();
    Eigen::MatrixXd r(1, 2);
    r << 1, 0;
    const ConZono y =
        ConZono::from_interval(IntervalVector{Interval(0.25, 0.5)});
    const IntervalVector hull = interval_hull(generalized_intersect(sq, r, y));
    CHECK(hull[0].lo() == doctest::Approx(0.25));
    CHECK(hull[0].hi() == doctest::Approx(0.5));
    CHECK(hull[1].lo() == doctest::Approx(0.0));
    CHECK(hull[1].hi() == doctest::Approx(1.0));
  }

  SUBCASE("membership oracle equivalence") {
    for (int t = 0; t < 10; ++t) {
      const ConZono z = random_cz(rng, 2, 4, 1);
      const ConZono y = random_cz(rng, 1, 2, 0);
      Eigen::MatrixXd r(1, 2);
      r << rng.uniform(-1, 1), rng.uniform(-1, 1);
      const ConZono zi = generalized_intersect(z, r, y);
      const IntervalVector box = enclosing_box(z);
      for (int s = 0; s < 100; ++s) {
        const Eigen::VectorXd p = sample_in_box(box, rng);
        const bool expected =
            contains_point(z, p) && contains_point(y, r * p);
        CHECK(contains_point(zi, p) == expected);
      }
    }
  }
}

TEST_CASE("intersection with an H-rep polytope") {
  Rng rng(59);
  const ConZono sq = unit_square();

  SUBCASE("whole space is the identity") {
    const ConZono zi = intersect_polytope(sq, HPolytope::whole_space(2));
    const IntervalVector box = enclosing_box(sq);
    for (int s = 0; s < 100; ++s) {
      const Eigen::VectorXd p = sample_in_box(box, rng);
      CHECK(contains_point(zi, p) == contains_point(sq, p));
    }
  }

  SUBCASE("halfspace cut excludes the far corner") {
    Eigen::MatrixXd h(1, 2);
    h << 1, 1;
    const ConZono tri =
        intersect_polytope(sq, HPolytope::inequalities(h, Eigen::VectorXd::Ones(1)));
    CHECK(contains_point(tri, Eigen::Vector2d(1.0, 0.0)));
    CHECK(contains_point(tri, Eigen::Vector2d(0.2, 0.3)));
    CHECK(!contains_point(tri, Eigen::Vector2d(1.0, 1.0)));
    CHECK(!contains_point(tri, Eigen::Vector2d(0.8, 0.8)));
  }

  SUBCASE("equality-only polytope pins the diagonal") {
    Eigen::MatrixXd a(1, 2);
    a << 1, -1;
    const ConZono diag =
        intersect_polytope(sq, HPolytope::equalities(a, Eigen::VectorXd::Zero(1)));
    const IntervalVector hull = interval_hull(diag);
    CHECK(hull[0].lo() == doctest::Approx(0.0));
    CHECK(hull[0].hi() == doctest::Approx(1.0));
    for (int s = 0; s < 100; ++s) {
      const double u = rng.unit();
      CHECK(contains_point(diag, Eigen::Vector2d(u, u)));
    }
    CHECK(!contains_point(diag, Eigen::Vector2d(0.2, 0.6)));
  }

  SUBCASE("two-sided membership equivalence on random instances") {
    for (int t = 0; t < 10; ++t) {
      const ConZono z = random_cz(rng, 3, 5, 1);
      Eigen::MatrixXd h(2, 3), a(1, 3);
      for (int j = 0; j < 3; ++j) {
        h(0, j) = rng.uniform(-1, 1);
        h(1, j) = rng.uniform(-1, 1);
        a(0, j) = rng.uniform(-1, 1);
      }
      // make the polytope pass near the center so both sides are exercised
      Eigen::VectorXd k(2);
      k << h.row(0).dot(z.c) + rng.uniform(0, 1), h.row(1).dot(z.c) + rng.uniform(0, 1);
      const Eigen::VectorXd b = a * z.c;
      HPolytope p = HPolytope::inequalities(h, k);
      p.A = a;
      p.b = b;
      const ConZono zi = intersect_polytope(z, p);
      const IntervalVector box = enclosing_box(z);
      for (int s = 0; s < 100; ++s) {
        const Eigen::VectorXd pt = sample_in_box(box, rng);
        const bool expected = contains_point(z, pt) && contains(p, pt, 1e-9);
        CHECK(contains_point(zi, pt) == expected);
      }
    }
  }
}

TEST_CASE("interval hull") {
  SUBCASE("constrained example from the construction") {
    ConZono z;
    z.G = Eigen::Matrix2d::Identity();
    z.c = Eigen::Vector2d::Zero();
    z.A.resize(1, 2);
    z.A << 1, 1;
    z.b = Eigen::VectorXd::Ones(1);
    const IntervalVector hull = interval_hull(z);
    CHECK(hull[0].lo() == doctest::Approx(0.0));
    CHECK(hull[0].hi() == doctest::Approx(1.0));
    CHECK(hull[1].lo() == doctest::Approx(0.0));
    CHECK(hull[1].hi() == doctest::Approx(1.0));
  }

  SUBCASE("zonotope hull is the absolute row sum") {
    Rng rng(61);
    for (int t = 0; t < 20; ++t) {
      const ConZono z = random_cz(rng, 3, 5, 0);
      const IntervalVector hull = interval_hull(z);
      for (int i = 0; i < 3; ++i) {
        const double r = z.G.row(i).cwiseAbs().sum();
        CHECK(hull[i].lo() == doctest::Approx(z.c[i] - r).epsilon(1e-9));
        CHECK(hull[i].hi() == doctest::Approx(z.c[i] + r).epsilon(1e-9));
      }
    }
  }

  SUBCASE("hull matches brute-force vertex enumeration") {
    Rng rng(67);
    for (int t = 0; t < 30; ++t) {
      const int ng = 3 + (t % 4);  // up to 6
      const ConZono z = random_cz(rng, 3, ng, t % 3 == 0 ? 2 : 1);
      const auto vertices = box_eq_vertices(z.A, z.b);
      REQUIRE(!vertices.empty());
      Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, 1e100);
      Eigen::VectorXd hi = Eigen::VectorXd::Constant(3, -1e100);
      for (const auto& v : vertices) {
        const Eigen::VectorXd x = z.c + z.G * v;
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
      }
      const IntervalVector hull = interval_hull(z);
      for (int i = 0; i < 3; ++i) {
        CHECK(hull[i].lo() == doctest::Approx(lo[i]).epsilon(1e-9));
        CHECK(hull[i].hi() == doctest::Approx(hi[i]).epsilon(1e-9));
      }
    }
  }

  SUBCASE("hull contains sampled members and the empty set throws") {
    Rng rng(71);
    const ConZono z = random_cz(rng, 2, 5, 2);
    const IntervalVector hull = interval_hull(z);
    for (const auto& m : random_members(z, 1000, rng))
      CHECK(hull.contains(m, 1e-9));

    ConZono empty = z;
    empty.A.conservativeResize(3, Eigen::NoChange);
    empty.A.row(2) = Eigen::VectorXd::Zero(5).transpose();
    empty.A(2, 0) = 1.0;
    empty.b.conservativeResize(3);
    empty.b[2] = 5.0;  // xi_0 = 5 contradicts the box
    CHECK_THROWS_AS(interval_hull(empty), EmptySetError);
  }
}

TEST_CASE("point membership") {
  Rng rng(73);
  const ConZono z = random_cz(rng, 2, 4, 1);
  CHECK(contains_point(z, z.c + z.G * ((z.A.transpose() * (z.A * z.A.transpose()).inverse()) * z.b)));
  const IntervalVector hull = interval_hull(z);
  Eigen::VectorXd outside(2);
  outside << hull[0].hi() + 1.0, hull[1].hi() + 1.0;
  CHECK(!contains_point(z, outside));

  for (const auto& m : random_members(z, 200, rng)) CHECK(contains_point(z, m));
}

TEST_CASE("order reduction") {
  Rng rng(79);

  SUBCASE("already within limits is a no-op") {
    const ConZono z = random_cz(rng, 2, 4, 1);
    const ConZono r = reduce(z, 10, 5);
    CHECK(r.G.isApprox(z.G));
    CHECK(r.A.isApprox(z.A));
  }

  SUBCASE("constraint elimination encloses the segment") {
    ConZono z;
    z.G = Eigen::Matrix2d::Identity();
    z.c = Eigen::Vector2d::Zero();
    z.A.resize(1, 2);
    z.A << 1, 1;
    z.b = Eigen::VectorXd::Ones(1);
    const ConZono r = reduce(z, 2, 0);
    CHECK(r.num_cons() == 0);
    for (int s = 0; s < 200; ++s) {
      const double u = rng.uniform(0, 1);
      CHECK(contains_point(r, Eigen::Vector2d(u, 1.0 - u)));
    }
  }

  SUBCASE("reduction to a box encloses the set") {
    const ConZono z = random_cz(rng, 2, 6, 2);
    const ConZono r = reduce(z, 2, 0);
    CHECK(r.num_gens() <= 2);
    CHECK(r.num_cons() == 0);
    for (const auto& m : random_members(z, 300, rng)) CHECK(contains_point(r, m));
  }

  SUBCASE("soundness across budgets") {
    for (int t = 0; t < 12; ++t) {
      const ConZono z = random_cz(rng, 3, 8, 3);
      const auto members = random_members(z, 100, rng);
      for (const Eigen::Index max_g : {8, 6, 4, 3}) {
        for (const Eigen::Index max_c : {2, 1, 0}) {
          const ConZono r = reduce(z, max_g, max_c);
          CHECK(r.num_gens() <= max_g);
          CHECK(r.num_cons() <= max_c);
          for (const auto& m : members) CHECK(contains_point(r, m));
        }
      }
    }
  }

  SUBCASE("empty sets propagate") {
    ConZono z;
    z.G = Eigen::Matrix2d::Identity();
    z.c = Eigen::Vector2d::Zero();
    z.A.resize(1, 2);
    z.A << 1, 0;
    z.b = Eigen::VectorXd::Constant(1, 7.0);  // infeasible
    CHECK(is_empty(z));
    CHECK(is_empty(linear_image(Eigen::Matrix2d::Identity(), z)));
    CHECK(is_empty(minkowski_sum(z, unit_square())));
    CHECK(is_empty(cartesian_product(z, unit_square())));
    CHECK(is_empty(intersect_polytope(z, HPolytope::whole_space(2))));
  }
}
