#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/chain.hpp"
#include "l2approx/groupring.hpp"

namespace l2approx {

enum class OracleMethod { IdentityCoefficient, FiniteGroupClosedForm, TorusSampling };

std::string to_string(OracleMethod method);

/// Exact results carry tolerance 0; sampled results carry the size of the
/// last refinement step as their error bound.
struct OracleResult {
  double value = 0;
  std::optional<Rational> exact;
  OracleMethod method = OracleMethod::IdentityCoefficient;
  double tolerance = 0;
  bool converged = true;
  std::size_t grid = 0;
};

struct TorusOptions {
  std::size_t initial_grid = 8;
  double tolerance = 1e-3;
  /// Refinement stops once N^rank would exceed this many fibers.
  std::size_t max_fibers = std::size_t{1} << 20;
  /// Relative threshold below which a fiber eigenvalue counts as zero.
  double zero_threshold = 1e-9;
};

/// Signature of the complex pushed to the whole finite group, divided by |Gamma|.
/// Uses the characteristic polynomial and Descartes' rule, not congruence reduction.
Rational l2_signature_finite(const SymmetricComplex& s);

/// Average fiber signature over the character torus of Z^m with grid refinement.
OracleResult l2_signature_torus(const SymmetricComplex& s, const TorusOptions& options = {});

/// Average fiber nullity of the degree-p Laplacian over the character torus.
OracleResult l2_betti_torus(const FreeComplex& c, long p, const TorusOptions& options = {});

/// Exact L2-Betti number of a complex over a finite group (kernel dimension / |Gamma|).
Rational l2_betti_finite(const FreeComplex& c, long p);

/// Expression over square group-ring matrices.
class MatrixExpression;
using Expr = std::shared_ptr<const MatrixExpression>;

class MatrixExpression {
 public:
  enum class Kind { Leaf, Sum, Product, Scale };

  static Expr leaf(GroupRingMatrix m);
  static Expr sum(Expr a, Expr b);
  static Expr product(Expr a, Expr b);
  static Expr scale(Rational c, Expr a);
  /// a^n as a left-nested product, n >= 1.
  static Expr power(const Expr& a, std::size_t n);

  Kind kind() const { return kind_; }
  const GroupRingMatrix& matrix() const { return leaf_; }
  const std::vector<Expr>& children() const { return children_; }
  const Rational& factor() const { return factor_; }

 private:
  Kind kind_ = Kind::Leaf;
  GroupRingMatrix leaf_;
  std::vector<Expr> children_;
  Rational factor_ = 1;
};

GroupRingMatrix evaluate(const Expr& e);
QMatrix evaluate_pushed(const Expr& e, const TowerLevel& level);
/// vn_trace of the expression evaluated in the group ring.
Rational vn_trace_expression(const Expr& e);
/// tr_Q of the expression evaluated after pushing each leaf, divided by |G_k|.
Rational normalized_pushed_trace(const Expr& e, const TowerLevel& level);

}  // namespace l2approx
