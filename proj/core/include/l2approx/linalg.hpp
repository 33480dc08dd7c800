#pragma once

#include <cstddef>
#include <vector>

#include "l2approx/matrix.hpp"

namespace l2approx {

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;

  long long signature() const {
    return static_cast<long long>(positive) - static_cast<long long>(negative);
  }
  std::size_t size() const { return positive + negative + zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/**
 * Exact inertia by symmetric congruence reduction.
 *
 * A nonzero diagonal pivot contributes its sign; if every remaining diagonal
 * entry vanishes but an off-diagonal a_ij does not, the 2x2 block
 * [[0, a], [a, 0]] is split off and contributes one positive and one negative
 * eigenvalue. Remaining empty rows are zero eigenvalues. Pivots are chosen by
 * smallest row length (ties by index), which keeps banded and circulant inputs
 * sparse and the result deterministic.
 *
 * Throws ValidationError if `symmetric` is not exactly symmetric.
 */
Inertia inertia(const QMatrix& symmetric);

std::size_t rank(const QMatrix& a);

/// Columns form a basis of {x : a x = 0}, read off the reduced row echelon form.
QMatrix nullspace(const QMatrix& a);

/// Coefficients c_0..c_n of det(x I - a), so c_n = 1.
std::vector<Rational> characteristic_polynomial(const QMatrix& a);

/// Number of eigenvalues of the symmetric matrix `a` that are <= shift.
std::size_t eigenvalues_at_most(const QMatrix& a, const Rational& shift);

}  // namespace l2approx
