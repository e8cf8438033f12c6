#include "czest/polytope.hpp"

namespace czest {

HPolytope HPolytope::whole_space(Eigen::Index dim) {
  HPolytope p;
  p.dim = dim;
  p.H.resize(0, dim);
  p.k.resize(0);
  p.A.resize(0, dim);
  p.b.resize(0);
  return p;
}

HPolytope HPolytope::equalities(Eigen::MatrixXd A, Eigen::VectorXd b) {
  if (A.rows() != b.size()) throw ShapeError("HPolytope: A rows != b size");
  HPolytope p = whole_space(A.cols());
  p.A = std::move(A);
  p.b = std::move(b);
  return p;
}

HPolytope HPolytope::inequalities(Eigen::MatrixXd H, Eigen::VectorXd k) {
  if (H.rows() != k.size()) throw ShapeError("HPolytope: H rows != k size");
  HPolytope p = whole_space(H.cols());
  p.H = std::move(H);
  p.k = std::move(k);
  return p;
}

HPolytope intersect(const HPolytope& p, const HPolytope& q) {
  if (p.dim != q.dim) throw ShapeError("intersect: ambient dimension mismatch");
  HPolytope out = HPolytope::whole_space(p.dim);
  out.H.resize(p.H.rows() + q.H.rows(), p.dim);
  out.H << p.H, q.H;
  out.k.resize(p.k.size() + q.k.size());
  out.k << p.k, q.k;
  out.A.resize(p.A.rows() + q.A.rows(), p.dim);
  out.A << p.A, q.A;
  out.b.resize(p.b.size() + q.b.size());
  out.b << p.b, q.b;
  return out;
}

bool contains(const HPolytope& p, const Eigen::VectorXd& x, double tol) {
  if (x.size() != p.dim) throw ShapeError("contains: point dimension mismatch");
  if (p.H.rows() > 0 && ((p.H * x - p.k).array() > tol).any()) return false;
  if (p.A.rows() > 0 && ((p.A * x - p.b).array().abs() > tol).any()) return false;
  return true;
}

}  // namespace czest
