#ifndef CZEST_INTERVAL_HPP_
#define CZEST_INTERVAL_HPP_

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

#include "czest/errors.hpp"

namespace czest {

/**
 * @brief Closed interval [lo, hi] with exact-image endpoint arithmetic.
 *
 * All operations return the exact image hull in real arithmetic (no
 * directed rounding); downstream containment checks use tolerances.
 * Values are immutable after construction.
 */
class Interval {
 public:
  Interval() : lo_(0.0), hi_(0.0) {}
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw InputError("Interval: lo > hi or NaN endpoint");
  }
  static Interval point(double v) { return Interval(v, v); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const { return 0.5 * (hi_ + lo_); }
  double rad() const { return 0.5 * (hi_ - lo_); }
  double width() const { return hi_ - lo_; }

  bool contains(double x, double tol = 0.0) const {
    return x >= lo_ - tol && x <= hi_ + tol;
  }
  bool contains(const Interval& other, double tol = 0.0) const {
    return other.lo_ >= lo_ - tol && other.hi_ <= hi_ + tol;
  }

  Interval inflated(double eps) const { return Interval(lo_ - eps, hi_ + eps); }

 private:
  double lo_, hi_;
};

Interval operator+(const Interval& x, const Interval& w);
Interval operator-(const Interval& x, const Interval& w);
Interval operator*(const Interval& x, const Interval& w);
Interval operator/(const Interval& x, const Interval& w);  // requires 0 not in w
Interval operator+(const Interval& x, double s);
Interval operator*(double s, const Interval& x);
Interval operator-(const Interval& x);

/// z = scale * x + offset, exact.
Interval affine(const Interval& x, double scale, double offset);

Interval exp(const Interval& x);
Interval log(const Interval& x);  // requires x.lo() > 0
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval pow(const Interval& x, int q);  // integer q >= 0

Interval intersect(const Interval& x, const Interval& w);  // requires overlap
Interval hull(const Interval& x, const Interval& w);

/// Ordered list of intervals; the box S of the estimation pipeline.
class IntervalVector {
 public:
  IntervalVector() = default;
  explicit IntervalVector(Eigen::Index n) : comps_(static_cast<size_t>(n)) {}
  IntervalVector(std::initializer_list<Interval> comps) : comps_(comps) {}

  static IntervalVector box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

  Eigen::Index size() const { return static_cast<Eigen::Index>(comps_.size()); }
  Interval& operator[](Eigen::Index i) { return comps_[static_cast<size_t>(i)]; }
  const Interval& operator[](Eigen::Index i) const {
    return comps_[static_cast<size_t>(i)];
  }

  Eigen::VectorXd lower() const;
  Eigen::VectorXd upper() const;
  Eigen::VectorXd mid() const;
  Eigen::VectorXd rad() const;

  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;

  void append(const Interval& iv) { comps_.push_back(iv); }
  void append(const IntervalVector& other) {
    comps_.insert(comps_.end(), other.comps_.begin(), other.comps_.end());
  }

  /// Components [from, from+count).
  IntervalVector segment(Eigen::Index from, Eigen::Index count) const;

 private:
  std::vector<Interval> comps_;
};

}  // namespace czest

#endif
