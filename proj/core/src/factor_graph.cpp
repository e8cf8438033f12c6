#include "czest/factor_graph.hpp"

#include <cmath>

namespace czest {

bool is_eliminable(ElemOp::Kind kind) {
  return kind == ElemOp::Kind::Add || kind == ElemOp::Kind::Sub ||
         kind == ElemOp::Kind::Affine || kind == ElemOp::Kind::Const;
}

Eigen::MatrixXd FactorGraph::selector() const {
  return selector_matrix(outputs, num_factors());
}

Eigen::MatrixXd selector_matrix(const std::vector<int>& rows, int n_factors) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                            n_factors);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= n_factors)
      throw ShapeError("selector_matrix: row index out of range");
    e(static_cast<Eigen::Index>(i), rows[i]) = 1.0;
  }
  return e;
}

Tape::Tape(int n_inputs, int n_params) {
  if (n_inputs < 0 || n_params < 0) throw InputError("Tape: negative counts");
  graph_.n_inputs = n_inputs;
  graph_.n_params = n_params;
  graph_.nodes.reserve(static_cast<size_t>(n_inputs) + 16);
  for (int i = 0; i < n_inputs; ++i) {
    ElemOp op;
    op.kind = ElemOp::Kind::Input;
    graph_.nodes.push_back(op);
  }
}

Var Tape::input(int i) const {
  if (i < 0 || i >= graph_.n_inputs) throw InputError("Tape::input: bad index");
  return Var(const_cast<Tape*>(this), i);
}

Var Tape::param(int slot) {
  if (slot < 0 || slot >= graph_.n_params)
    throw InputError("Tape::param: bad slot");
  ElemOp op;
  op.kind = ElemOp::Kind::Const;
  op.param_slot = slot;
  return wrap(emit(op));
}

Var Tape::constant(double value) {
  ElemOp op;
  op.kind = ElemOp::Kind::Const;
  op.value = value;
  return wrap(emit(op));
}

int Tape::emit(ElemOp op) {
  const int idx = graph_.num_factors();
  if (op.a >= idx || op.b >= idx)
    throw InputError("Tape::emit: operand references a later factor");
  graph_.nodes.push_back(op);
  return idx;
}

FactorGraph Tape::finish(const std::vector<Var>& outputs) && {
  for (const Var& v : outputs) {
    if (v.index() < 0 || v.index() >= graph_.num_factors())
      throw InputError("Tape::finish: output handle not from this tape");
    graph_.outputs.push_back(v.index());
  }
  return std::move(graph_);
}

namespace {

Tape* same_tape(const Var& x, const Var& y, Tape* tx, Tape* ty) {
  if (tx == nullptr || ty == nullptr || tx != ty)
    throw InputError("tracing handles belong to different tapes");
  (void)x;
  (void)y;
  return tx;
}

}  // namespace

Var operator+(Var x, Var y) {
  Tape* t = same_tape(x, y, x.tape_, y.tape_);
  ElemOp op;
  op.kind = ElemOp::Kind::Add;
  op.a = x.idx_;
  op.b = y.idx_;
  return Var(t, t->emit(op));
}

Var operator-(Var x, Var y) {
  Tape* t = same_tape(x, y, x.tape_, y.tape_);
  ElemOp op;
  op.kind = ElemOp::Kind::Sub;
  op.a = x.idx_;
  op.b = y.idx_;
  return Var(t, t->emit(op));
}

Var operator*(Var x, Var y) {
  Tape* t = same_tape(x, y, x.tape_, y.tape_);
  ElemOp op;
  op.kind = ElemOp::Kind::Mul;
  op.a = x.idx_;
  op.b = y.idx_;
  return Var(t, t->emit(op));
}

Var operator/(Var x, Var y) {
  Tape* t = same_tape(x, y, x.tape_, y.tape_);
  ElemOp op;
  op.kind = ElemOp::Kind::Div;
  op.a = x.idx_;
  op.b = y.idx_;
  return Var(t, t->emit(op));
}

Var operator+(Var x, double c) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  ElemOp op;
  op.kind = ElemOp::Kind::Affine;
  op.a = x.idx_;
  op.scale = 1.0;
  op.offset = c;
  return Var(x.tape_, x.tape_->emit(op));
}

Var operator+(double c, Var x) { return x + c; }

Var operator-(Var x, double c) { return x + (-c); }

Var operator-(double c, Var x) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  ElemOp op;
  op.kind = ElemOp::Kind::Affine;
  op.a = x.idx_;
  op.scale = -1.0;
  op.offset = c;
  return Var(x.tape_, x.tape_->emit(op));
}

Var operator-(Var x) { return 0.0 - x; }

Var operator*(Var x, double c) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  ElemOp op;
  op.kind = ElemOp::Kind::Affine;
  op.a = x.idx_;
  op.scale = c;
  op.offset = 0.0;
  return Var(x.tape_, x.tape_->emit(op));
}

Var operator*(double c, Var x) { return x * c; }

Var operator/(Var x, double c) {
  if (c == 0.0) throw DomainError("tracing: division by constant 0");
  return x * (1.0 / c);
}

Var operator/(double c, Var x) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  Var num = x.tape_->constant(c);
  return num / x;
}

Var exp(Var x) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  ElemOp op;
  op.kind = ElemOp::Kind::Exp;
  op.a = x.idx_;
  return Var(x.tape_, x.tape_->emit(op));
}

Var log(Var x) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  ElemOp op;
  op.kind = ElemOp::Kind::Log;
  op.a = x.idx_;
  return Var(x.tape_, x.tape_->emit(op));
}

Var sin(Var x) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  ElemOp op;
  op.kind = ElemOp::Kind::Sin;
  op.a = x.idx_;
  return Var(x.tape_, x.tape_->emit(op));
}

// cos(x) is decomposed at recording time into the shifted sine
// sin(x + pi/2); the tape never holds a raw Cos factor.
Var cos(Var x) {
  constexpr double kHalfPi = 1.5707963267948966192313216916398;
  return sin(x + kHalfPi);
}

Var pow(Var x, int q) {
  if (x.tape_ == nullptr) throw InputError("tracing handle is detached");
  if (q < 0) throw UnsupportedOpError("pow: negative integer exponents");
  if (q == 0) return x.tape_->constant(1.0);
  if (q == 1) return x;
  ElemOp op;
  op.kind = ElemOp::Kind::Pow;
  op.a = x.idx_;
  op.power = q;
  return Var(x.tape_, x.tape_->emit(op));
}

Var cbrt(Var x) {
  (void)x;
  throw UnsupportedOpError("cbrt is not in the operation library");
}

FactorGraph record(int n_inputs, int n_params,
                   const std::function<std::vector<Var>(Tape&)>& build) {
  Tape tape(n_inputs, n_params);
  std::vector<Var> outputs = build(tape);
  return std::move(tape).finish(outputs);
}

CompositeGraph compose(const FactorGraph& f, const FactorGraph& g, int n_x,
                       int n_w, int n_v) {
  if (f.n_inputs != n_x + n_w)
    throw ShapeError("compose: f input count != n_x + n_w");
  const int n_gx = g.n_inputs - n_v;
  if (n_gx != f.num_outputs())
    throw ShapeError("compose: g state-input count != f output count");
  if (g.n_params != 0)
    throw ShapeError("compose: measurement tape must not take parameters");

  CompositeGraph out;
  FactorGraph& ell = out.graph;
  ell.n_inputs = n_x + n_w + n_v;
  ell.n_params = f.n_params;
  for (int i = 0; i < ell.n_inputs; ++i) {
    ElemOp op;
    op.kind = ElemOp::Kind::Input;
    ell.nodes.push_back(op);
  }

  // f factors: x, w inputs keep their indices, non-inputs shift past v.
  auto map_f = [&](int idx) { return idx < f.n_inputs ? idx : idx + n_v; };
  for (int i = f.n_inputs; i < f.num_factors(); ++i) {
    ElemOp op = f.nodes[static_cast<size_t>(i)];
    if (op.a >= 0) op.a = map_f(op.a);
    if (op.b >= 0) op.b = map_f(op.b);
    ell.nodes.push_back(op);
  }

  out.state_rows.reserve(f.outputs.size());
  for (int idx : f.outputs) out.state_rows.push_back(map_f(idx));

  // g factors: state inputs resolve to f's output rows, v inputs to the
  // composite's v block, non-inputs append after f's factors.
  const int g_base = static_cast<int>(ell.nodes.size());
  auto map_g = [&](int idx) {
    if (idx < n_gx) return out.state_rows[static_cast<size_t>(idx)];
    if (idx < g.n_inputs) return n_x + n_w + (idx - n_gx);
    return g_base + (idx - g.n_inputs);
  };
  for (int i = g.n_inputs; i < g.num_factors(); ++i) {
    ElemOp op = g.nodes[static_cast<size_t>(i)];
    if (op.a >= 0) op.a = map_g(op.a);
    if (op.b >= 0) op.b = map_g(op.b);
    ell.nodes.push_back(op);
  }
  for (int idx : g.outputs) ell.outputs.push_back(map_g(idx));

  return out;
}

RealEval eval_real(const FactorGraph& graph, const Eigen::VectorXd& s,
                   std::span<const double> params) {
  if (s.size() != graph.n_inputs)
    throw ShapeError("eval_real: input size != n_inputs");
  if (static_cast<int>(params.size()) != graph.n_params)
    throw ShapeError("eval_real: parameter count mismatch");

  RealEval out;
  out.factors.resize(graph.num_factors());
  for (int j = 0; j < graph.num_factors(); ++j) {
    const ElemOp& op = graph.nodes[static_cast<size_t>(j)];
    double& z = out.factors[j];
    switch (op.kind) {
      case ElemOp::Kind::Input:
        z = s[j];
        break;
      case ElemOp::Kind::Add:
        z = out.factors[op.a] + out.factors[op.b];
        break;
      case ElemOp::Kind::Sub:
        z = out.factors[op.a] - out.factors[op.b];
        break;
      case ElemOp::Kind::Mul:
        z = out.factors[op.a] * out.factors[op.b];
        break;
      case ElemOp::Kind::Div:
        if (out.factors[op.b] == 0.0) throw DomainError("eval_real: divide by 0");
        z = out.factors[op.a] / out.factors[op.b];
        break;
      case ElemOp::Kind::Affine:
        z = op.scale * out.factors[op.a] + op.offset;
        break;
      case ElemOp::Kind::Const:
        z = op.param_slot >= 0 ? params[static_cast<size_t>(op.param_slot)]
                               : op.value;
        break;
      case ElemOp::Kind::Exp:
        z = std::exp(out.factors[op.a]);
        break;
      case ElemOp::Kind::Log:
        if (out.factors[op.a] <= 0.0)
          throw DomainError("eval_real: log of non-positive value");
        z = std::log(out.factors[op.a]);
        break;
      case ElemOp::Kind::Sin:
        z = std::sin(out.factors[op.a]);
        break;
      case ElemOp::Kind::Cos:
        z = std::cos(out.factors[op.a]);
        break;
      case ElemOp::Kind::Pow:
        z = std::pow(out.factors[op.a], op.power);
        break;
    }
  }

  out.outputs.resize(graph.num_outputs());
  for (int i = 0; i < graph.num_outputs(); ++i)
    out.outputs[i] = out.factors[graph.outputs[static_cast<size_t>(i)]];
  return out;
}

IntervalVector eval_interval(const FactorGraph& graph, const IntervalVector& S,
                             std::span<const double> params) {
  if (S.size() != graph.n_inputs)
    throw ShapeError("eval_interval: box size != n_inputs");
  if (static_cast<int>(params.size()) != graph.n_params)
    throw ShapeError("eval_interval: parameter count mismatch");

  IntervalVector z(graph.num_factors());
  for (int j = 0; j < graph.num_factors(); ++j) {
    const ElemOp& op = graph.nodes[static_cast<size_t>(j)];
    switch (op.kind) {
      case ElemOp::Kind::Input:
        z[j] = S[j];
        break;
      case ElemOp::Kind::Add:
        z[j] = z[op.a] + z[op.b];
        break;
      case ElemOp::Kind::Sub:
        z[j] = z[op.a] - z[op.b];
        break;
      case ElemOp::Kind::Mul:
        z[j] = z[op.a] * z[op.b];
        break;
      case ElemOp::Kind::Div:
        z[j] = z[op.a] / z[op.b];
        break;
      case ElemOp::Kind::Affine:
        z[j] = affine(z[op.a], op.scale, op.offset);
        break;
      case ElemOp::Kind::Const: {
        const double v = op.param_slot >= 0
                             ? params[static_cast<size_t>(op.param_slot)]
                             : op.value;
        z[j] = Interval::point(v);
        break;
      }
      case ElemOp::Kind::Exp:
        z[j] = exp(z[op.a]);
        break;
      case ElemOp::Kind::Log:
        z[j] = log(z[op.a]);
        break;
      case ElemOp::Kind::Sin:
        z[j] = sin(z[op.a]);
        break;
      case ElemOp::Kind::Cos:
        z[j] = cos(z[op.a]);
        break;
      case ElemOp::Kind::Pow:
        z[j] = pow(z[op.a], op.power);
        break;
    }
  }
  return z;
}

std::vector<std::optional<AffineForm>> affine_forms(const FactorGraph& graph) {
  std::vector<std::optional<AffineForm>> forms(
      static_cast<size_t>(graph.num_factors()));
  for (int j = 0; j < graph.num_factors(); ++j) {
    const ElemOp& op = graph.nodes[static_cast<size_t>(j)];
    auto& fj = forms[static_cast<size_t>(j)];
    switch (op.kind) {
      case ElemOp::Kind::Input: {
        AffineForm f;
        f.coeffs = Eigen::VectorXd::Zero(graph.n_inputs);
        f.coeffs[j] = 1.0;
        fj = f;
        break;
      }
      case ElemOp::Kind::Add:
      case ElemOp::Kind::Sub: {
        const auto& fa = forms[static_cast<size_t>(op.a)];
        const auto& fb = forms[static_cast<size_t>(op.b)];
        if (fa && fb) {
          AffineForm f;
          const double sgn = op.kind == ElemOp::Kind::Add ? 1.0 : -1.0;
          f.coeffs = fa->coeffs + sgn * fb->coeffs;
          f.offset = fa->offset + sgn * fb->offset;
          fj = f;
        }
        break;
      }
      case ElemOp::Kind::Affine: {
        const auto& fa = forms[static_cast<size_t>(op.a)];
        if (fa) {
          AffineForm f;
          f.coeffs = op.scale * fa->coeffs;
          f.offset = op.scale * fa->offset + op.offset;
          fj = f;
        }
        break;
      }
      case ElemOp::Kind::Const:
        // parameter-bound constants vary between steps, keep them opaque
        if (op.param_slot < 0) {
          AffineForm f;
          f.coeffs = Eigen::VectorXd::Zero(graph.n_inputs);
          f.offset = op.value;
          fj = f;
        }
        break;
      default:
        break;
    }
  }
  return forms;
}

}  // namespace czest
