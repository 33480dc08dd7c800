#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "l2approx/rational.hpp"

namespace l2approx {

/**
 * Sparse matrix with exact rational entries, stored as one ordered map per row.
 *
 * Pushed group-ring matrices are block combinations of permutation matrices,
 * so rows stay short and ordered maps keep iteration deterministic.
 */
class QMatrix {
 public:
  using Row = std::map<std::size_t, Rational>;

  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);

  static QMatrix identity(std::size_t n);
  static QMatrix from_dense(const std::vector<std::vector<Rational>>& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& value);
  void add(std::size_t i, std::size_t j, const Rational& value);
  const Row& row(std::size_t i) const { return data_[i]; }

  std::size_t nonzeros() const;
  bool is_zero() const;
  bool is_symmetric() const;
  bool is_integral() const;

  QMatrix transpose() const;
  Rational trace() const;
  std::vector<std::vector<Rational>> to_dense() const;

  /// Rows in [r0, r1) and columns in [c0, c1).
  QMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;
  /// Copies `other` into this matrix with its (0,0) entry at (r0, c0).
  void place(std::size_t r0, std::size_t c0, const QMatrix& other);

  QMatrix& operator+=(const QMatrix& other);
  QMatrix& operator-=(const QMatrix& other);
  QMatrix& operator*=(const Rational& scalar);

  friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
  friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
  friend QMatrix operator*(QMatrix a, const Rational& s) { return a *= s; }
  friend QMatrix operator*(const Rational& s, QMatrix a) { return a *= s; }
  friend QMatrix operator-(QMatrix a) { return a *= Rational(-1); }
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

/// tr(a * b) without forming the product.
Rational trace_of_product(const QMatrix& a, const QMatrix& b);

/// max row l1 sum times max column l1 sum (the Schur test quantity R*C).
Rational schur_product(const QMatrix& a);

}  // namespace l2approx
