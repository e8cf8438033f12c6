#include "czest/relax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

namespace czest {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHalfPi = 0.5 * kPi;
constexpr double kDegenerateWidth = 1e-12;

/// Accumulates halfspace and equality rows over R^{n_z}.
struct RowBuilder {
  explicit RowBuilder(Eigen::Index nz) : nz(nz) {}

  Eigen::Index nz;
  std::vector<Eigen::VectorXd> h_rows;
  std::vector<double> k;
  std::vector<Eigen::VectorXd> a_rows;
  std::vector<double> b;
  std::vector<int> eq_row_factor;

  Eigen::VectorXd row(std::initializer_list<std::pair<int, double>> coeffs) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nz);
    for (const auto& [idx, val] : coeffs) r[idx] += val;
    return r;
  }

  void le(std::initializer_list<std::pair<int, double>> coeffs, double rhs) {
    h_rows.push_back(row(coeffs));
    k.push_back(rhs);
  }

  void eq(std::initializer_list<std::pair<int, double>> coeffs, double rhs,
          int defining_factor) {
    a_rows.push_back(row(coeffs));
    b.push_back(rhs);
    eq_row_factor.push_back(defining_factor);
  }

  // z_j >= m * z_a + c
  void lower_line(int j, int a, double m, double c) {
    le({{a, m}, {j, -1.0}}, -c);
  }
  // z_j <= m * z_a + c
  void upper_line(int j, int a, double m, double c) {
    le({{a, -m}, {j, 1.0}}, c);
  }

  HPolytope take() {
    HPolytope p = HPolytope::whole_space(nz);
    p.H.resize(static_cast<Eigen::Index>(h_rows.size()), nz);
    p.k.resize(static_cast<Eigen::Index>(k.size()));
    for (size_t i = 0; i < h_rows.size(); ++i) {
      p.H.row(static_cast<Eigen::Index>(i)) = h_rows[i];
      p.k[static_cast<Eigen::Index>(i)] = k[i];
    }
    p.A.resize(static_cast<Eigen::Index>(a_rows.size()), nz);
    p.b.resize(static_cast<Eigen::Index>(b.size()));
    for (size_t i = 0; i < a_rows.size(); ++i) {
      p.A.row(static_cast<Eigen::Index>(i)) = a_rows[i];
      p.b[static_cast<Eigen::Index>(i)] = b[i];
    }
    return p;
  }
};

// An affine bound line y = m*x + c used on either side of a univariate
// function graph.
struct Line {
  double m, c;
};

// The four McCormick inequalities for z_p = z_x * z_y over X x Y.
void mccormick(RowBuilder& rows, int p, int x, int y, const Interval& X,
               const Interval& Y) {
  rows.le({{y, X.lo()}, {x, Y.lo()}, {p, -1.0}}, X.lo() * Y.lo());
  rows.le({{y, X.hi()}, {x, Y.hi()}, {p, -1.0}}, X.hi() * Y.hi());
  rows.le({{y, -X.lo()}, {x, -Y.hi()}, {p, 1.0}}, -X.lo() * Y.hi());
  rows.le({{y, -X.hi()}, {x, -Y.lo()}, {p, 1.0}}, -X.hi() * Y.lo());
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((fmid >= 0.0) == (flo >= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double med3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

// ---------------------------------------------------------------------------
// sine underestimator (the convex side; the concave side is its mirror)

// Lower lines of sin over one window interval [tlo, thi] within
// [3pi/2, 7pi/2], expressed in the window coordinate t. A clipped window
// that degenerated to a point emits nothing; its lines would only be valid
// over the window, not over the whole input interval.
void sine_window_lower_lines(double tlo, double thi, std::vector<Line>& out) {
  if (thi - tlo < 1e-9) return;
  const double s1 = sine_tangency_s1(thi);
  const double s2 = sine_tangency_s2(tlo);
  const double v1 = tlo >= kTwoPi ? kTwoPi : s1;
  const double v2 = thi <= 3.0 * kPi ? 3.0 * kPi : s2;
  const double rho_lo = med3(tlo, thi, v1);
  const double rho_hi = med3(tlo, thi, v2);

  auto tangent = [&](double t) {
    out.push_back({std::cos(t), std::sin(t) - std::cos(t) * t});
  };

  if (rho_hi - rho_lo > kDegenerateWidth) {
    const double m = (std::sin(rho_hi) - std::sin(rho_lo)) / (rho_hi - rho_lo);
    out.push_back({m, std::sin(rho_lo) - m * rho_lo});
  }
  if (rho_lo - tlo > kDegenerateWidth) {
    tangent(tlo);
    tangent(0.5 * (tlo + rho_lo));
    tangent(rho_lo);
  }
  if (thi - rho_hi > kDegenerateWidth) {
    tangent(rho_hi);
    tangent(0.5 * (rho_hi + thi));
    tangent(thi);
  }
}

// Lower lines of the convex underestimator of sin over [lo, hi], in the
// original coordinate. The interval is split into the window of lo, the
// window of hi, and (when they are not adjacent) a middle region where the
// underestimator is the constant -1.
std::vector<Line> sine_lower_lines(double lo, double hi) {
  std::vector<Line> lines;
  if (hi - lo < 1e-9) {
    lines.push_back({0.0, sin(Interval(lo, hi)).lo()});
    return lines;
  }
  const auto varpi = [](double z) { return z / kTwoPi + 0.25; };

  const double w_lo = std::floor(varpi(lo));
  const double vp_hi = varpi(hi);
  const double w_hi =
      vp_hi == std::floor(vp_hi) ? vp_hi - 1.0 : std::floor(vp_hi);

  const double shift1 = 2.0 * (w_lo - 1.0) * kPi;
  const double shift2 = 2.0 * (w_hi - 1.0) * kPi;

  std::vector<Line> window;
  sine_window_lower_lines(lo - shift1, std::min(hi - shift1, 3.5 * kPi), window);
  for (const Line& l : window) lines.push_back({l.m, l.c - l.m * shift1});

  if (w_hi != w_lo) {
    window.clear();
    sine_window_lower_lines(1.5 * kPi, hi - shift2, window);
    for (const Line& l : window) lines.push_back({l.m, l.c - l.m * shift2});
  }

  const bool region3 = hi - shift1 > 3.5 * kPi + kDegenerateWidth ||
                       lo - shift2 < 1.5 * kPi - kDegenerateWidth;
  if (region3 || lines.empty()) lines.push_back({0.0, -1.0});
  return lines;
}

// Upper lines via the odd mirror: an underestimator of sin on [-hi, -lo]
// reflects to an overestimator of sin on [lo, hi].
std::vector<Line> sine_upper_lines(double lo, double hi) {
  std::vector<Line> mirrored = sine_lower_lines(-hi, -lo);
  std::vector<Line> lines;
  lines.reserve(mirrored.size());
  for (const Line& l : mirrored) lines.push_back({l.m, -l.c});
  return lines;
}

void emit_sine_rows(RowBuilder& rows, int j, int a, const Interval& za,
                    double arg_shift) {
  // arg_shift handles cosine factors through sin(z_a + shift)
  const double lo = za.lo() + arg_shift;
  const double hi = za.hi() + arg_shift;
  for (const Line& l : sine_lower_lines(lo, hi))
    rows.lower_line(j, a, l.m, l.c + l.m * arg_shift);
  for (const Line& l : sine_upper_lines(lo, hi))
    rows.upper_line(j, a, l.m, l.c + l.m * arg_shift);
}

// ---------------------------------------------------------------------------
// smooth univariate relaxations: 3 tangent cuts on the function side of the
// envelope, the secant on the other side

struct UnivariateFn {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

Line tangent_line(const UnivariateFn& fn, double t) {
  const double m = fn.df(t);
  return {m, fn.f(t) - m * t};
}

Line secant_line(const UnivariateFn& fn, double lo, double hi) {
  if (hi - lo < kDegenerateWidth) return tangent_line(fn, 0.5 * (lo + hi));
  const double m = (fn.f(hi) - fn.f(lo)) / (hi - lo);
  return {m, fn.f(lo) - m * lo};
}

// convex function: tangents below, secant above
void emit_convex_rows(RowBuilder& rows, int j, int a, const UnivariateFn& fn,
                      double lo, double hi) {
  for (const double t : {lo, 0.5 * (lo + hi), hi}) {
    const Line l = tangent_line(fn, t);
    rows.lower_line(j, a, l.m, l.c);
  }
  const Line s = secant_line(fn, lo, hi);
  rows.upper_line(j, a, s.m, s.c);
}

// concave function: tangents above, secant below
void emit_concave_rows(RowBuilder& rows, int j, int a, const UnivariateFn& fn,
                       double lo, double hi) {
  for (const double t : {lo, 0.5 * (lo + hi), hi}) {
    const Line l = tangent_line(fn, t);
    rows.upper_line(j, a, l.m, l.c);
  }
  const Line s = secant_line(fn, lo, hi);
  rows.lower_line(j, a, s.m, s.c);
}

// Lower lines of the convex envelope of an odd power over lo < 0 < hi:
// the secant from (lo, lo^q) to the tangency point, then tangent cuts on
// the convex tail beyond it.
std::vector<Line> odd_power_lower_lines(int q, double lo, double hi) {
  const UnivariateFn fn{
      [q](double t) { return std::pow(t, q); },
      [q](double t) { return q * std::pow(t, q - 1); },
  };
  std::vector<Line> lines;
  const double tstar = odd_power_tangency(q, lo, hi);
  lines.push_back(secant_line(fn, lo, tstar));
  if (hi - tstar > kDegenerateWidth) {
    lines.push_back(tangent_line(fn, 0.5 * (tstar + hi)));
    lines.push_back(tangent_line(fn, hi));
  }
  return lines;
}

void emit_odd_power_envelope(RowBuilder& rows, int j, int a, int q,
                             const Interval& za) {
  for (const Line& l : odd_power_lower_lines(q, za.lo(), za.hi()))
    rows.lower_line(j, a, l.m, l.c);
  // concave side by odd symmetry: a lower line of t^q on the mirrored
  // interval reflects to an upper line on the original one
  for (const Line& l : odd_power_lower_lines(q, -za.hi(), -za.lo()))
    rows.upper_line(j, a, l.m, -l.c);
}

void emit_univariate(RowBuilder& rows, int j, const ElemOp& op,
                     const IntervalVector& z) {
  const int a = op.a;
  const Interval za = z[a];

  if (za.width() <= 0.0) {
    // point interval: the factor is pinned, two exact equality rows
    rows.eq({{a, 1.0}}, za.mid(), -1);
    rows.eq({{j, 1.0}}, z[j].mid(), -1);
    return;
  }

  const double lo = za.lo();
  const double hi = za.hi();
  switch (op.kind) {
    case ElemOp::Kind::Exp: {
      const UnivariateFn fn{[](double t) { return std::exp(t); },
                            [](double t) { return std::exp(t); }};
      emit_convex_rows(rows, j, a, fn, lo, hi);
      break;
    }
    case ElemOp::Kind::Log: {
      if (lo <= 0.0) throw DomainError("relax: log over non-positive interval");
      const UnivariateFn fn{[](double t) { return std::log(t); },
                            [](double t) { return 1.0 / t; }};
      emit_concave_rows(rows, j, a, fn, lo, hi);
      break;
    }
    case ElemOp::Kind::Pow: {
      const int q = op.power;
      const UnivariateFn fn{
          [q](double t) { return std::pow(t, q); },
          [q](double t) { return q * std::pow(t, q - 1); },
      };
      if (q % 2 == 0) {
        emit_convex_rows(rows, j, a, fn, lo, hi);
      } else if (lo >= 0.0) {
        emit_convex_rows(rows, j, a, fn, lo, hi);
      } else if (hi <= 0.0) {
        emit_concave_rows(rows, j, a, fn, lo, hi);
      } else {
        emit_odd_power_envelope(rows, j, a, q, za);
      }
      break;
    }
    case ElemOp::Kind::Sin:
      emit_sine_rows(rows, j, a, za, 0.0);
      break;
    case ElemOp::Kind::Cos:
      emit_sine_rows(rows, j, a, za, kHalfPi);
      break;
    default:
      throw UnsupportedOpError("relax: not a univariate kind");
  }
}

void append_factor_rows(RowBuilder& rows, const FactorGraph& graph, int j,
                        const IntervalVector& z,
                        std::span<const double> params) {
  const ElemOp& op = graph.nodes[static_cast<size_t>(j)];
  switch (op.kind) {
    case ElemOp::Kind::Input:
      break;
    case ElemOp::Kind::Add:
      rows.eq({{op.a, -1.0}, {op.b, -1.0}, {j, 1.0}}, 0.0, j);
      break;
    case ElemOp::Kind::Sub:
      rows.eq({{op.a, -1.0}, {op.b, 1.0}, {j, 1.0}}, 0.0, j);
      break;
    case ElemOp::Kind::Affine:
      rows.eq({{op.a, -op.scale}, {j, 1.0}}, op.offset, j);
      break;
    case ElemOp::Kind::Const: {
      const double v = op.param_slot >= 0
                           ? params[static_cast<size_t>(op.param_slot)]
                           : op.value;
      rows.eq({{j, 1.0}}, v, j);
      break;
    }
    case ElemOp::Kind::Mul:
      mccormick(rows, j, op.a, op.b, z[op.a], z[op.b]);
      break;
    case ElemOp::Kind::Div:
      if (z[op.b].contains(0.0))
        throw DomainError("relax: division by interval containing 0");
      // z_j = z_a / z_b rewritten as z_a = z_b * z_j
      mccormick(rows, op.a, op.b, j, z[op.b], z[j]);
      break;
    default:
      emit_univariate(rows, j, op, z);
      break;
  }
}

}  // namespace

double sine_tangency_s1(double ub) {
  if (ub <= kTwoPi) return ub;
  const auto f = [ub](double t) {
    return std::sin(ub) - std::sin(t) - (ub - t) * std::cos(t);
  };
  return bisect(f, 1.5 * kPi, kTwoPi);
}

double sine_tangency_s2(double lb) {
  if (lb >= 3.0 * kPi) return lb;
  const auto f = [lb](double t) {
    return std::sin(t) - std::sin(lb) - (t - lb) * std::cos(t);
  };
  return bisect(f, 3.0 * kPi, 3.5 * kPi);
}

double odd_power_tangency(int q, double lo, double hi) {
  if (!(lo < 0.0 && hi > 0.0))
    throw InputError("odd_power_tangency: interval must straddle 0");
  const auto f = [q, lo](double t) {
    return q * std::pow(t, q - 1) * (t - lo) - (std::pow(t, q) - std::pow(lo, q));
  };
  if (f(hi) <= 0.0) return hi;  // tangency beyond the interval: pure secant
  // f(0) = lo^q < 0 <= f(hi): unique crossing of the envelope condition
  const auto neg_f = [&f](double t) { return -f(t); };
  return bisect(neg_f, 0.0, hi);
}

HPolytope relax_rows(const FactorGraph& graph, int j, const IntervalVector& z,
                     std::span<const double> params) {
  if (j < 0 || j >= graph.num_factors())
    throw ShapeError("relax_rows: factor index out of range");
  if (z.size() != graph.num_factors())
    throw ShapeError("relax_rows: bounds size != factor count");
  RowBuilder rows(graph.num_factors());
  append_factor_rows(rows, graph, j, z, params);
  return rows.take();
}

LiftedRelaxation build_lifted(const FactorGraph& graph, const IntervalVector& s,
                              std::span<const double> params) {
  LiftedRelaxation out;
  out.bounds = eval_interval(graph, s, params);
  RowBuilder rows(graph.num_factors());
  for (int j = graph.n_inputs; j < graph.num_factors(); ++j)
    append_factor_rows(rows, graph, j, out.bounds, params);
  out.polytope = rows.take();
  out.eq_row_factor = std::move(rows.eq_row_factor);
  return out;
}

}  // namespace czest
