#include "l2approx/groupring.hpp"

#include <algorithm>
#include <vector>

#include "l2approx/errors.hpp"

namespace l2approx {

GroupRingElement GroupRingElement::monomial(const GroupElement& g, const Rational& c) {
  GroupRingElement x;
  x.add(g, c);
  return x;
}

Rational GroupRingElement::coefficient(const GroupElement& g) const {
  const auto it = terms_.find(g);
  return it == terms_.end() ? Rational(0) : it->second;
}

void GroupRingElement::add(const GroupElement& g, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(g, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Rational GroupRingElement::l1_norm() const {
  Rational s = 0;
  for (const auto& [g, c] : terms_) s += abs(c);
  return s;
}

bool GroupRingElement::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return is_integer(t.second); });
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& other) {
  for (const auto& [g, c] : other.terms_) add(g, c);
  return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& other) {
  for (const auto& [g, c] : other.terms_) add(g, -c);
  return *this;
}

GroupRingElement& GroupRingElement::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [g, c] : terms_) c *= s;
  return *this;
}

GroupRingElement multiply(const Group& group, const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement r;
  for (const auto& [g, c] : a.terms()) {
    for (const auto& [h, d] : b.terms()) r.add(group.multiply(g, h), c * d);
  }
  return r;
}

GroupRingElement involve(const Group& group, const GroupRingElement& x) {
  GroupRingElement r;
  for (const auto& [g, c] : x.terms()) r.add(group.inverse(g), c);
  return r;
}

GroupRingMatrix::GroupRingMatrix(GroupPtr group, std::size_t rows, std::size_t cols)
    : group_(std::move(group)), rows_(rows), cols_(cols) {
  if (!group_) throw ValidationError("group-ring matrix without a group");
}

GroupRingMatrix GroupRingMatrix::identity(GroupPtr group, std::size_t n) {
  GroupRingMatrix m(group, n, n);
  for (std::size_t i = 0; i < n; ++i) m.add(i, i, group->identity(), 1);
  return m;
}

GroupRingMatrix GroupRingMatrix::scalar(GroupPtr group, GroupRingElement x) {
  GroupRingMatrix m(std::move(group), 1, 1);
  m.set(0, 0, std::move(x));
  return m;
}

GroupRingElement GroupRingMatrix::at(std::size_t i, std::size_t j) const {
  const auto it = entries_.find({i, j});
  return it == entries_.end() ? GroupRingElement() : it->second;
}

void GroupRingMatrix::set(std::size_t i, std::size_t j, GroupRingElement x) {
  if (i >= rows_ || j >= cols_) throw ValidationError("group-ring matrix index out of range");
  for (const auto& [g, c] : x.terms()) group_->require(g);
  if (x.is_zero()) {
    entries_.erase({i, j});
  } else {
    entries_[{i, j}] = std::move(x);
  }
}

void GroupRingMatrix::add(std::size_t i, std::size_t j, const GroupElement& g, const Rational& c) {
  if (i >= rows_ || j >= cols_) throw ValidationError("group-ring matrix index out of range");
  group_->require(g);
  auto& e = entries_[{i, j}];
  e.add(g, c);
  if (e.is_zero()) entries_.erase({i, j});
}

bool GroupRingMatrix::is_integral() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second.is_integral(); });
}

std::int64_t GroupRingMatrix::support_width() const {
  std::int64_t w = 0;
  if (group_->kind() != GroupKind::FreeAbelian) return 0;
  for (const auto& [ij, x] : entries_) {
    for (const auto& [g, c] : x.terms()) {
      for (std::int64_t e : g.coords) w = std::max(w, e < 0 ? -e : e);
    }
  }
  return w;
}

GroupRingMatrix GroupRingMatrix::adjoint() const {
  GroupRingMatrix r(group_, cols_, rows_);
  for (const auto& [ij, x] : entries_) r.entries_[{ij.second, ij.first}] = involve(*group_, x);
  return r;
}

Rational GroupRingMatrix::vn_trace() const {
  if (!is_square()) throw ValidationError("trace of a non-square matrix");
  const GroupElement e = group_->identity();
  Rational t = 0;
  for (const auto& [ij, x] : entries_) {
    if (ij.first == ij.second) t += x.coefficient(e);
  }
  return t;
}

QMatrix GroupRingMatrix::push(const TowerLevel& level) const {
  if (level.group() != group_ && !(*level.group() == *group_)) {
    throw ValidationError("tower level belongs to a different group");
  }
  const std::size_t n = level.order();
  QMatrix out(rows_ * n, cols_ * n);
  for (const auto& [ij, x] : entries_) {
    for (const auto& [g, c] : x.terms()) {
      const std::size_t h = level.project(g);
      for (std::size_t row = 0; row < n; ++row) {
        out.add(ij.first * n + row, ij.second * n + level.multiply(row, h), c);
      }
    }
  }
  return out;
}

Rational GroupRingMatrix::norm_bound() const {
  std::vector<Rational> row_sum(rows_), col_sum(cols_);
  for (const auto& [ij, x] : entries_) {
    const Rational n = x.l1_norm();
    row_sum[ij.first] += n;
    col_sum[ij.second] += n;
  }
  Rational r = 0, c = 0;
  for (const auto& v : row_sum) r = std::max(r, v);
  for (const auto& v : col_sum) c = std::max(c, v);
  const Rational rc = r * c;
  if (auto root = exact_sqrt(rc)) return *root;
  return Rational(ceil_sqrt(rc));
}

void GroupRingMatrix::place(std::size_t r0, std::size_t c0, const GroupRingMatrix& other) {
  check_compatible(other);
  if (r0 + other.rows_ > rows_ || c0 + other.cols_ > cols_) {
    throw ValidationError("block placement out of range");
  }
  for (const auto& [ij, x] : other.entries_) set(r0 + ij.first, c0 + ij.second, x);
}

void GroupRingMatrix::check_compatible(const GroupRingMatrix& other) const {
  if (group_ != other.group_ && !(*group_ == *other.group_)) {
    throw ValidationError("group-ring matrices over different groups");
  }
}

GroupRingMatrix& GroupRingMatrix::operator+=(const GroupRingMatrix& other) {
  check_compatible(other);
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ValidationError("shape mismatch in sum");
  for (const auto& [ij, x] : other.entries_) {
    auto& e = entries_[ij];
    e += x;
    if (e.is_zero()) entries_.erase(ij);
  }
  return *this;
}

GroupRingMatrix& GroupRingMatrix::operator-=(const GroupRingMatrix& other) {
  check_compatible(other);
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ValidationError("shape mismatch in difference");
  for (const auto& [ij, x] : other.entries_) {
    auto& e = entries_[ij];
    e -= x;
    if (e.is_zero()) entries_.erase(ij);
  }
  return *this;
}

GroupRingMatrix& GroupRingMatrix::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    entries_.clear();
    return *this;
  }
  for (auto& [ij, x] : entries_) x *= s;
  return *this;
}

GroupRingMatrix operator*(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  a.check_compatible(b);
  if (a.cols_ != b.rows_) throw ValidationError("shape mismatch in product");
  GroupRingMatrix r(a.group_, a.rows_, b.cols_);
  std::vector<std::vector<std::pair<std::size_t, const GroupRingElement*>>> b_rows(b.rows_);
  for (const auto& [ij, x] : b.entries_) b_rows[ij.first].emplace_back(ij.second, &x);
  for (const auto& [ij, x] : a.entries_) {
    for (const auto& [col, y] : b_rows[ij.second]) {
      auto& e = r.entries_[{ij.first, col}];
      e += multiply(*a.group_, x, *y);
      if (e.is_zero()) r.entries_.erase({ij.first, col});
    }
  }
  return r;
}

bool operator==(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_ &&
         (a.group_ == b.group_ || (a.group_ && b.group_ && *a.group_ == *b.group_));
}

}  // namespace l2approx
