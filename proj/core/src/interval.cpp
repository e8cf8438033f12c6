#include "czest/interval.hpp"

#include <algorithm>
#include <cmath>

namespace czest {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kHalfPi = 1.5707963267948966192313216916398;

// Smallest point of the form base + k*2*pi that is >= lo; true if it also
// fits below hi, i.e. the critical point lies inside [lo, hi].
bool critical_inside(double lo, double hi, double base) {
  const double k = std::ceil((lo - base) / kTwoPi);
  return base + k * kTwoPi <= hi;
}
}  // namespace

Interval operator+(const Interval& x, const Interval& w) {
  return Interval(x.lo() + w.lo(), x.hi() + w.hi());
}

Interval operator-(const Interval& x, const Interval& w) {
  return Interval(x.lo() - w.hi(), x.hi() - w.lo());
}

Interval operator*(const Interval& x, const Interval& w) {
  const double p1 = x.lo() * w.lo();
  const double p2 = x.lo() * w.hi();
  const double p3 = x.hi() * w.lo();
  const double p4 = x.hi() * w.hi();
  return Interval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

Interval operator/(const Interval& x, const Interval& w) {
  if (w.lo() <= 0.0 && w.hi() >= 0.0)
    throw DomainError("interval division by interval containing 0");
  return x * Interval(1.0 / w.hi(), 1.0 / w.lo());
}

Interval operator+(const Interval& x, double s) {
  return Interval(x.lo() + s, x.hi() + s);
}

Interval operator*(double s, const Interval& x) {
  return s >= 0.0 ? Interval(s * x.lo(), s * x.hi())
                  : Interval(s * x.hi(), s * x.lo());
}

Interval operator-(const Interval& x) { return Interval(-x.hi(), -x.lo()); }

Interval affine(const Interval& x, double scale, double offset) {
  return (scale * x) + offset;
}

Interval exp(const Interval& x) {
  return Interval(std::exp(x.lo()), std::exp(x.hi()));
}

Interval log(const Interval& x) {
  if (x.lo() <= 0.0) throw DomainError("interval log of non-positive interval");
  return Interval(std::log(x.lo()), std::log(x.hi()));
}

Interval sin(const Interval& x) {
  if (x.width() >= kTwoPi) return Interval(-1.0, 1.0);
  const double slo = std::sin(x.lo());
  const double shi = std::sin(x.hi());
  double lo = std::min(slo, shi);
  double hi = std::max(slo, shi);
  if (critical_inside(x.lo(), x.hi(), kHalfPi)) hi = 1.0;
  if (critical_inside(x.lo(), x.hi(), -kHalfPi)) lo = -1.0;
  return Interval(lo, hi);
}

Interval cos(const Interval& x) { return sin(x + kHalfPi); }

Interval pow(const Interval& x, int q) {
  if (q < 0) throw DomainError("interval pow with negative exponent");
  if (q == 0) return Interval(1.0, 1.0);
  if (q == 1) return x;
  const double plo = std::pow(x.lo(), q);
  const double phi = std::pow(x.hi(), q);
  if (q % 2 == 1) return Interval(plo, phi);  // odd: monotone increasing
  if (x.lo() >= 0.0) return Interval(plo, phi);
  if (x.hi() <= 0.0) return Interval(phi, plo);
  return Interval(0.0, std::max(plo, phi));  // even with 0 interior
}

Interval intersect(const Interval& x, const Interval& w) {
  const double lo = std::max(x.lo(), w.lo());
  const double hi = std::min(x.hi(), w.hi());
  if (lo > hi) throw EmptySetError("interval intersection is empty");
  return Interval(lo, hi);
}

Interval hull(const Interval& x, const Interval& w) {
  return Interval(std::min(x.lo(), w.lo()), std::max(x.hi(), w.hi()));
}

IntervalVector IntervalVector::box(const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw ShapeError("box: endpoint size mismatch");
  IntervalVector out;
  for (Eigen::Index i = 0; i < lo.size(); ++i) out.append(Interval(lo[i], hi[i]));
  return out;
}

Eigen::VectorXd IntervalVector::lower() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = (*this)[i].lo();
  return v;
}

Eigen::VectorXd IntervalVector::upper() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = (*this)[i].hi();
  return v;
}

Eigen::VectorXd IntervalVector::mid() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = (*this)[i].mid();
  return v;
}

Eigen::VectorXd IntervalVector::rad() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = (*this)[i].rad();
  return v;
}

bool IntervalVector::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != size()) throw ShapeError("IntervalVector::contains: size");
  for (Eigen::Index i = 0; i < size(); ++i)
    if (!(*this)[i].contains(x[i], tol)) return false;
  return true;
}

IntervalVector IntervalVector::segment(Eigen::Index from, Eigen::Index count) const {
  IntervalVector out;
  for (Eigen::Index i = 0; i < count; ++i) out.append((*this)[from + i]);
  return out;
}

}  // namespace czest
