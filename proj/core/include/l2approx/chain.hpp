#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "l2approx/groupring.hpp"

namespace l2approx {

/**
 * Based free Q[Gamma] chain complex C_N -> ... -> C_0.
 *
 * c(p) is the differential C_p -> C_{p-1}, an r_{p-1} x r_p matrix acting on
 * column vectors. Outside 1..N it is the (possibly empty) zero matrix.
 */
class FreeComplex {
 public:
  FreeComplex() = default;
  /// differentials[p-1] is c_p. Shapes are checked, c^2 = 0 is not (see validate).
  FreeComplex(GroupPtr group, std::vector<std::size_t> ranks, std::vector<GroupRingMatrix> differentials);
  /// Complex with the given ranks and zero differentials.
  static FreeComplex zero(GroupPtr group, std::vector<std::size_t> ranks);

  const GroupPtr& group() const { return group_; }
  std::size_t dim() const { return ranks_.empty() ? 0 : ranks_.size() - 1; }
  const std::vector<std::size_t>& ranks() const { return ranks_; }
  /// r_p, zero outside 0..N.
  std::size_t rank(long p) const;
  GroupRingMatrix c(long p) const;

  /// Groups compare by value.
  friend bool operator==(const FreeComplex& a, const FreeComplex& b);

 private:
  GroupPtr group_;
  std::vector<std::size_t> ranks_;
  std::vector<GroupRingMatrix> differentials_;
};

/// Components f_p : C_p -> D_p, stored as r^D_p x r^C_p matrices.
struct ChainMap {
  FreeComplex source;
  FreeComplex target;
  std::vector<GroupRingMatrix> components;

  GroupRingMatrix f(long p) const;
};

struct Violation {
  std::string check;
  long degree = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// c_{p} c_{p+1} = 0 for all p.
ValidationReport validate(const FreeComplex& c);
/// Shapes and d^D_p f_p = f_{p-1} c^C_p.
ValidationReport validate(const ChainMap& f);

/// Degree p is C_{N-p} with differential (c_{N-p+1})*.
FreeComplex dual(const FreeComplex& c);

/// cone_p = D_p + C_{p-1} with differential [[d_D, f], [0, -d_C]].
/// Throws ValidationError if `f` is not a chain map.
FreeComplex cone(const ChainMap& f);

/// (Sigma C)_p = C_{p-1} with differential -c_{p-1}.
FreeComplex suspension(const FreeComplex& c);

/**
 * Free complex of dimension N with a chain map f : dual(C) -> C given by
 * components f_p of shape r_p x r_{N-p}. The middle-degree pairing is
 * symmetric when N is divisible by 4.
 */
class SymmetricComplex {
 public:
  SymmetricComplex(FreeComplex base, std::vector<GroupRingMatrix> duality);

  const FreeComplex& base() const { return base_; }
  const GroupPtr& group() const { return base_.group(); }
  std::size_t dim() const { return base_.dim(); }
  std::size_t middle() const { return base_.dim() / 2; }
  bool has_signature() const { return base_.dim() % 4 == 0; }
  GroupRingMatrix f(long p) const;
  const std::vector<GroupRingMatrix>& duality() const { return duality_; }
  ChainMap duality_map() const;

 private:
  FreeComplex base_;
  std::vector<GroupRingMatrix> duality_;
};

/// Self-adjoint r x r form over Q[Gamma] placed in the middle of a 4n-dimensional complex.
struct AlgebraicForm {
  GroupRingMatrix matrix;
  std::size_t n = 1;
};

/// Throws ValidationError if the form is not self-adjoint or n == 0.
SymmetricComplex from_form(const AlgebraicForm& form);

/// Differential and chain-map checks, violations tagged by degree.
ValidationReport validate(const SymmetricComplex& s);

}  // namespace l2approx
