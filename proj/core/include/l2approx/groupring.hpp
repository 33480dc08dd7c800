#pragma once

#include <cstddef>
#include <map>
#include <utility>

#include "l2approx/groups.hpp"
#include "l2approx/matrix.hpp"
#include "l2approx/rational.hpp"

namespace l2approx {

/// Finite sum of rational multiples of group elements; zero terms are never stored.
class GroupRingElement {
 public:
  using Terms = std::map<GroupElement, Rational>;

  GroupRingElement() = default;
  static GroupRingElement monomial(const GroupElement& g, const Rational& c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const GroupElement& g) const;
  void add(const GroupElement& g, const Rational& c);

  /// Sum of absolute values of the coefficients.
  Rational l1_norm() const;
  bool is_integral() const;

  GroupRingElement& operator+=(const GroupRingElement& other);
  GroupRingElement& operator-=(const GroupRingElement& other);
  GroupRingElement& operator*=(const Rational& s);
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator*(GroupRingElement a, const Rational& s) { return a *= s; }
  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

 private:
  Terms terms_;
};

GroupRingElement multiply(const Group& group, const GroupRingElement& a, const GroupRingElement& b);
/// sum c_w w  ->  sum c_w w^-1
GroupRingElement involve(const Group& group, const GroupRingElement& x);

/// Matrix over Q[Gamma] with sparse storage of its nonzero entries.
class GroupRingMatrix {
 public:
  using Index = std::pair<std::size_t, std::size_t>;

  GroupRingMatrix() = default;
  GroupRingMatrix(GroupPtr group, std::size_t rows, std::size_t cols);
  static GroupRingMatrix identity(GroupPtr group, std::size_t n);
  /// 1x1 matrix with the given entry.
  static GroupRingMatrix scalar(GroupPtr group, GroupRingElement x);

  const GroupPtr& group() const { return group_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::map<Index, GroupRingElement>& entries() const { return entries_; }

  GroupRingElement at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, GroupRingElement x);
  void add(std::size_t i, std::size_t j, const GroupElement& g, const Rational& c);

  bool is_zero() const { return entries_.empty(); }
  bool is_integral() const;
  bool is_self_adjoint() const { return *this == adjoint(); }
  /// Largest |exponent| over all terms (free abelian groups), 0 otherwise.
  std::int64_t support_width() const;

  /// Transpose with involved entries.
  GroupRingMatrix adjoint() const;
  /// Sum of the identity coefficients of the diagonal entries.
  Rational vn_trace() const;

  /**
   * Rational matrix of size (rows*N) x (cols*N), N = |G_k|. Block (i, j) has
   * entry (x, y) equal to the coefficient sum of A_ij over the coset x^-1 y,
   * i.e. each term c*w becomes c times the regular representation of w.
   */
  QMatrix push(const TowerLevel& level) const;

  /**
   * Uniform operator-norm bound sqrt(R*C) from the Schur test, where R and C
   * are the largest row and column sums of entry l1 norms. Exact when R*C is
   * the square of a rational, otherwise rounded up to an integer.
   */
  Rational norm_bound() const;

  /// Copies `other` with its (0,0) entry at (r0, c0).
  void place(std::size_t r0, std::size_t c0, const GroupRingMatrix& other);

  GroupRingMatrix& operator+=(const GroupRingMatrix& other);
  GroupRingMatrix& operator-=(const GroupRingMatrix& other);
  GroupRingMatrix& operator*=(const Rational& s);
  friend GroupRingMatrix operator+(GroupRingMatrix a, const GroupRingMatrix& b) { return a += b; }
  friend GroupRingMatrix operator-(GroupRingMatrix a, const GroupRingMatrix& b) { return a -= b; }
  friend GroupRingMatrix operator*(GroupRingMatrix a, const Rational& s) { return a *= s; }
  friend GroupRingMatrix operator-(GroupRingMatrix a) { return a *= Rational(-1); }
  friend GroupRingMatrix operator*(const GroupRingMatrix& a, const GroupRingMatrix& b);
  friend bool operator==(const GroupRingMatrix& a, const GroupRingMatrix& b);

 private:
  void check_compatible(const GroupRingMatrix& other) const;

  GroupPtr group_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<Index, GroupRingElement> entries_;
};

}  // namespace l2approx
