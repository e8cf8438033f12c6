#ifndef CZEST_FACTOR_GRAPH_HPP_
#define CZEST_FACTOR_GRAPH_HPP_

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "czest/errors.hpp"
#include "czest/interval.hpp"

namespace czest {

/**
 * @brief One entry of a factor tape: an elementary operation applied to
 * earlier factors.
 *
 * Operand indices always reference strictly earlier factors, so the tape is
 * topologically ordered by construction. `Affine` covers every arithmetic
 * operation with one constant operand (q*z + r); `Const` is a factor pinned
 * to a literal value or to a parameter slot re-bound at evaluation time.
 */
struct ElemOp {
  enum class Kind {
    Input,
    Add,
    Sub,
    Mul,
    Div,
    Affine,
    Const,
    Exp,
    Log,
    Sin,
    Cos,
    Pow,
  };

  Kind kind = Kind::Input;
  int a = -1;              // first operand (factor index)
  int b = -1;              // second operand, binary kinds only
  double scale = 1.0;      // Affine: z = scale * z_a + offset
  double offset = 0.0;
  double value = 0.0;      // Const literal
  int param_slot = -1;     // Const bound to a parameter when >= 0
  int power = 0;           // Pow exponent, integer >= 2
};

/// True for the operations that factor elimination may remove exactly:
/// additions, subtractions, and affine/constant factors.
bool is_eliminable(ElemOp::Kind kind);

/**
 * @brief Immutable tape of a factorable function.
 *
 * Factors are 0-indexed. The first `n_inputs` factors are the inputs; every
 * later factor applies its ElemOp to earlier factors. `outputs` lists the
 * factor index of each function output (the rows of the 0/1 selector E).
 */
struct FactorGraph {
  int n_inputs = 0;
  int n_params = 0;
  std::vector<ElemOp> nodes;
  std::vector<int> outputs;

  int num_factors() const { return static_cast<int>(nodes.size()); }
  int num_outputs() const { return static_cast<int>(outputs.size()); }

  /// Selector matrix with a single 1 per row, mapping factors to outputs.
  Eigen::MatrixXd selector() const;
};

/// Selector matrix for an arbitrary list of factor rows.
Eigen::MatrixXd selector_matrix(const std::vector<int>& rows, int n_factors);

class Tape;

/// Tracing handle. Arithmetic on handles appends factors to the owning tape.
class Var {
 public:
  Var() = default;
  int index() const { return idx_; }

 private:
  friend class Tape;
  Var(Tape* tape, int idx) : tape_(tape), idx_(idx) {}
  Tape* tape_ = nullptr;
  int idx_ = -1;

  friend Var operator+(Var x, Var y);
  friend Var operator-(Var x, Var y);
  friend Var operator*(Var x, Var y);
  friend Var operator/(Var x, Var y);
  friend Var operator+(Var x, double c);
  friend Var operator+(double c, Var x);
  friend Var operator-(Var x, double c);
  friend Var operator-(double c, Var x);
  friend Var operator-(Var x);
  friend Var operator*(Var x, double c);
  friend Var operator*(double c, Var x);
  friend Var operator/(Var x, double c);
  friend Var operator/(double c, Var x);
  friend Var exp(Var x);
  friend Var log(Var x);
  friend Var sin(Var x);
  friend Var cos(Var x);
  friend Var pow(Var x, int q);
  friend Var cbrt(Var x);
};

/**
 * @brief Mutable tape builder used while tracing a function.
 *
 * Single-threaded during recording; the finished FactorGraph is immutable.
 */
class Tape {
 public:
  explicit Tape(int n_inputs, int n_params = 0);

  Var input(int i) const;
  Var param(int slot);          // constant factor re-bound per evaluation
  Var constant(double value);   // constant factor with a literal value

  int emit(ElemOp op);
  FactorGraph finish(const std::vector<Var>& outputs) &&;

 private:
  friend class Var;
  FactorGraph graph_;
  Var wrap(int idx) { return Var(this, idx); }
};

/// Records a function of `n_inputs` tracing handles into a tape.
FactorGraph record(int n_inputs, int n_params,
                   const std::function<std::vector<Var>(Tape&)>& build);

/// Composite tape for g(f(x, w, u), v) with inputs ordered (x, w, v).
/// `state_rows` exposes the rows selecting f's outputs inside the composite.
struct CompositeGraph {
  FactorGraph graph;
  std::vector<int> state_rows;
};

CompositeGraph compose(const FactorGraph& f, const FactorGraph& g, int n_x,
                       int n_w, int n_v);

/// Tape replay in real arithmetic.
struct RealEval {
  Eigen::VectorXd factors;
  Eigen::VectorXd outputs;
};
RealEval eval_real(const FactorGraph& graph, const Eigen::VectorXd& s,
                   std::span<const double> params = {});

/// Natural interval extension of every factor over the input box S.
IntervalVector eval_interval(const FactorGraph& graph, const IntervalVector& S,
                             std::span<const double> params = {});

/// Per-factor affine form w0 + w.s when the factor depends on the inputs
/// only through affine operations; nullopt otherwise.
struct AffineForm {
  Eigen::VectorXd coeffs;
  double offset = 0.0;
};
std::vector<std::optional<AffineForm>> affine_forms(const FactorGraph& graph);

}  // namespace czest

#endif
