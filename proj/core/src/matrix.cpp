#include "l2approx/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace l2approx {

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace(i, 1);
  return m;
}

QMatrix QMatrix::from_dense(const std::vector<std::vector<Rational>>& dense) {
  const std::size_t r = dense.size();
  const std::size_t c = r == 0 ? 0 : dense.front().size();
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (dense[i].size() != c) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t j = 0; j < c; ++j) {
      if (sgn(dense[i][j]) != 0) m.data_[i].emplace(j, dense[i][j]);
    }
  }
  return m;
}

Rational QMatrix::at(std::size_t i, std::size_t j) const {
  const auto it = data_[i].find(j);
  return it == data_[i].end() ? Rational(0) : it->second;
}

void QMatrix::set(std::size_t i, std::size_t j, const Rational& value) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("QMatrix::set");
  if (sgn(value) == 0) {
    data_[i].erase(j);
  } else {
    data_[i][j] = value;
  }
}

void QMatrix::add(std::size_t i, std::size_t j, const Rational& value) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("QMatrix::add");
  if (sgn(value) == 0) return;
  auto [it, inserted] = data_[i].try_emplace(j, value);
  if (!inserted) {
    it->second += value;
    if (sgn(it->second) == 0) data_[i].erase(it);
  }
}

std::size_t QMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : data_) n += row.size();
  return n;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Row& r) { return r.empty(); });
}

bool QMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& [j, v] : data_[i]) {
      if (at(j, i) != v) return false;
    }
  }
  return true;
}

bool QMatrix::is_integral() const {
  for (const auto& row : data_) {
    for (const auto& [j, v] : row) {
      if (!is_integer(v)) return false;
    }
  }
  return true;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& [j, v] : data_[i]) t.data_[j].emplace_hint(t.data_[j].end(), i, v);
  }
  return t;
}

Rational QMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of a non-square matrix");
  Rational sum = 0;
  for (std::size_t i = 0; i < rows_; ++i) sum += at(i, i);
  return sum;
}

std::vector<std::vector<Rational>> QMatrix::to_dense() const {
  std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& [j, v] : data_[i]) d[i][j] = v;
  }
  return d;
}

QMatrix QMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
  QMatrix b(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i) {
    for (auto it = data_[i].lower_bound(c0); it != data_[i].end() && it->first < c1; ++it) {
      b.data_[i - r0].emplace_hint(b.data_[i - r0].end(), it->first - c0, it->second);
    }
  }
  return b;
}

void QMatrix::place(std::size_t r0, std::size_t c0, const QMatrix& other) {
  if (r0 + other.rows_ > rows_ || c0 + other.cols_ > cols_) {
    throw std::out_of_range("QMatrix::place");
  }
  for (std::size_t i = 0; i < other.rows_; ++i) {
    for (const auto& [j, v] : other.data_[i]) set(r0 + i, c0 + j, v);
  }
}

QMatrix& QMatrix::operator+=(const QMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("QMatrix shape mismatch in +");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& [j, v] : other.data_[i]) add(i, j, v);
  }
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("QMatrix shape mismatch in -");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& [j, v] : other.data_[i]) add(i, j, -v);
  }
  return *this;
}

QMatrix& QMatrix::operator*=(const Rational& scalar) {
  if (sgn(scalar) == 0) {
    for (auto& row : data_) row.clear();
    return *this;
  }
  for (auto& row : data_) {
    for (auto& [j, v] : row) v *= scalar;
  }
  return *this;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("QMatrix shape mismatch in *");
  QMatrix c(a.rows_, b.cols_);
  Rational product;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto& out = c.data_[i];
    for (const auto& [k, aik] : a.data_[i]) {
      for (const auto& [j, bkj] : b.data_[k]) {
        product = aik * bkj;
        auto [it, inserted] = out.try_emplace(j, product);
        if (!inserted) it->second += product;
      }
    }
    std::erase_if(out, [](const auto& kv) { return sgn(kv.second) == 0; });
  }
  return c;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Rational trace_of_product(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw std::invalid_argument("trace_of_product shape mismatch");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (const auto& [k, v] : a.row(i)) {
      const auto& brow = b.row(k);
      const auto it = brow.find(i);
      if (it != brow.end()) sum += v * it->second;
    }
  }
  return sum;
}

Rational schur_product(const QMatrix& a) {
  Rational max_row = 0;
  std::vector<Rational> col_sums(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational s = 0;
    for (const auto& [j, v] : a.row(i)) {
      s += abs(v);
      col_sums[j] += abs(v);
    }
    if (s > max_row) max_row = s;
  }
  Rational max_col = 0;
  for (const auto& s : col_sums) {
    if (s > max_col) max_col = s;
  }
  return max_row * max_col;
}

}  // namespace l2approx
