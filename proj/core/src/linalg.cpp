#include "l2approx/linalg.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

using Row = QMatrix::Row;

// Sparse elimination workspace with a column -> rows index so that a pivot
// column can be cleared without scanning every row.
class EliminationWorkspace {
 public:
  explicit EliminationWorkspace(const QMatrix& a) : rows_(a.rows()), col_rows_(a.cols()) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      rows_[i] = a.row(i);
      for (const auto& [j, v] : rows_[i]) col_rows_[j].insert(i);
    }
  }

  std::vector<Row>& rows() { return rows_; }
  const std::set<std::size_t>& rows_with(std::size_t col) const { return col_rows_[col]; }

  // row[target] -= factor * row[source]
  void subtract(std::size_t target, const Rational& factor, std::size_t source) {
    Row& t = rows_[target];
    Rational delta;
    for (const auto& [j, v] : rows_[source]) {
      delta = factor * v;
      auto [it, inserted] = t.try_emplace(j, -delta);
      if (inserted) {
        col_rows_[j].insert(target);
      } else {
        it->second -= delta;
        if (sgn(it->second) == 0) {
          t.erase(it);
          col_rows_[j].erase(target);
        }
      }
    }
  }

  void scale(std::size_t r, const Rational& factor) {
    for (auto& [j, v] : rows_[r]) v *= factor;
  }

 private:
  std::vector<Row> rows_;
  std::vector<std::set<std::size_t>> col_rows_;
};

struct Echelon {
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> pivot_rows;
  std::vector<Row> rows;
};

// Gauss-Jordan elimination: each pivot column is cleared from every other row,
// so the pivot rows end in reduced row echelon form (up to row order).
// Without back substitution only the rows below are cleared, enough for the rank.
Echelon reduce(const QMatrix& a, bool back_substitute = true) {
  EliminationWorkspace ws(a);
  std::vector<bool> used(a.rows(), false);
  Echelon e;
  for (std::size_t col = 0; col < a.cols(); ++col) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::size_t best_len = std::numeric_limits<std::size_t>::max();
    for (std::size_t r : ws.rows_with(col)) {
      if (!used[r] && ws.rows()[r].size() < best_len) {
        best = r;
        best_len = ws.rows()[r].size();
      }
    }
    if (best == std::numeric_limits<std::size_t>::max()) continue;
    used[best] = true;
    ws.scale(best, 1 / Rational(ws.rows()[best].at(col)));
    const std::vector<std::size_t> targets(ws.rows_with(col).begin(), ws.rows_with(col).end());
    for (std::size_t r : targets) {
      if (r == best || (!back_substitute && used[r])) continue;
      const Rational factor = ws.rows()[r].at(col);
      ws.subtract(r, factor, best);
    }
    e.pivot_cols.push_back(col);
    e.pivot_rows.push_back(best);
  }
  e.rows = std::move(ws.rows());
  return e;
}

}  // namespace

std::size_t rank(const QMatrix& a) { return reduce(a, false).pivot_cols.size(); }

QMatrix nullspace(const QMatrix& a) {
  const Echelon e = reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  QMatrix basis(a.cols(), free_cols.size());
  std::vector<std::size_t> free_index(a.cols(), 0);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    free_index[free_cols[k]] = k;
    basis.set(free_cols[k], k, 1);
  }
  for (std::size_t p = 0; p < e.pivot_cols.size(); ++p) {
    for (const auto& [c, v] : e.rows[e.pivot_rows[p]]) {
      if (c != e.pivot_cols[p]) basis.set(e.pivot_cols[p], free_index[c], -v);
    }
  }
  return basis;
}

Inertia inertia(const QMatrix& symmetric) {
  if (!symmetric.is_symmetric()) {
    throw ValidationError("inertia: matrix is not exactly symmetric");
  }
  const std::size_t n = symmetric.rows();
  std::vector<Row> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = symmetric.row(i);
  std::vector<bool> active(n, true);
  Inertia result;

  auto update = [&rows](std::size_t u, std::size_t v, const Rational& delta) {
    auto [it, inserted] = rows[u].try_emplace(v, -delta);
    if (!inserted) {
      it->second -= delta;
      if (sgn(it->second) == 0) rows[u].erase(it);
    }
  };
  auto detach = [&rows](std::size_t i) {
    for (const auto& [j, v] : rows[i]) {
      if (j != i) rows[j].erase(i);
    }
    rows[i].clear();
  };

  std::size_t remaining = n;
  while (remaining > 0) {
    // Empty rows are zero eigenvalues of the current Schur complement.
    std::size_t diag_pivot = n;
    std::size_t diag_len = std::numeric_limits<std::size_t>::max();
    std::size_t off_pivot = n;
    std::size_t off_len = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (rows[i].empty()) {
        active[i] = false;
        --remaining;
        ++result.zero;
        continue;
      }
      const std::size_t len = rows[i].size();
      if (rows[i].contains(i)) {
        if (len < diag_len) {
          diag_pivot = i;
          diag_len = len;
        }
      } else if (len < off_len) {
        off_pivot = i;
        off_len = len;
      }
    }
    if (remaining == 0) break;

    if (diag_pivot != n) {
      const std::size_t i = diag_pivot;
      const Rational d = rows[i].at(i);
      if (sgn(d) > 0) {
        ++result.positive;
      } else {
        ++result.negative;
      }
      std::vector<std::pair<std::size_t, Rational>> nbrs;
      for (const auto& [j, v] : rows[i]) {
        if (j != i) nbrs.emplace_back(j, v);
      }
      detach(i);
      active[i] = false;
      --remaining;
      for (const auto& [u, au] : nbrs) {
        const Rational scaled = au / d;
        for (const auto& [v, av] : nbrs) update(u, v, scaled * av);
      }
      continue;
    }

    // Hyperbolic step: all active diagonals vanish.
    const std::size_t i = off_pivot;
    std::size_t j = n;
    std::size_t j_len = std::numeric_limits<std::size_t>::max();
    for (const auto& [c, v] : rows[i]) {
      if (rows[c].size() < j_len) {
        j = c;
        j_len = rows[c].size();
      }
    }
    const Rational a = rows[i].at(j);
    ++result.positive;
    ++result.negative;
    Row ri = rows[i];
    Row rj = rows[j];
    ri.erase(j);
    rj.erase(i);
    detach(i);
    detach(j);
    active[i] = active[j] = false;
    remaining -= 2;
    std::set<std::size_t> touched;
    for (const auto& [u, v] : ri) touched.insert(u);
    for (const auto& [u, v] : rj) touched.insert(u);
    auto coeff = [](const Row& r, std::size_t k) {
      const auto it = r.find(k);
      return it == r.end() ? Rational(0) : it->second;
    };
    for (std::size_t u : touched) {
      const Rational aui = coeff(ri, u);
      const Rational auj = coeff(rj, u);
      for (std::size_t v : touched) {
        const Rational delta = (aui * coeff(rj, v) + auj * coeff(ri, v)) / a;
        if (sgn(delta) != 0) update(u, v, delta);
      }
    }
  }
  return result;
}

std::vector<Rational> characteristic_polynomial(const QMatrix& a) {
  if (!a.is_square()) throw ValidationError("characteristic polynomial of a non-square matrix");
  const std::size_t n = a.rows();
  auto h = a.to_dense();

  // Similarity reduction to upper Hessenberg form.
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t piv = n;
    for (std::size_t i = m; i < n; ++i) {
      if (sgn(h[i][m - 1]) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == n) continue;
    if (piv != m) {
      std::swap(h[piv], h[m]);
      for (auto& row : h) std::swap(row[piv], row[m]);
    }
    for (std::size_t i = m + 1; i < n; ++i) {
      if (sgn(h[i][m - 1]) == 0) continue;
      const Rational u = h[i][m - 1] / h[m][m - 1];
      for (std::size_t j = 0; j < n; ++j) h[i][j] -= u * h[m][j];
      for (std::size_t j = 0; j < n; ++j) h[j][m] += u * h[j][i];
    }
  }

  // p_m(x) = (x - h_mm) p_{m-1}(x) - sum_{i<m} h_im (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}(x)
  std::vector<std::vector<Rational>> p(n + 1);
  p[0] = {Rational(1)};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<Rational> next(m + 1);
    const auto& prev = p[m - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      next[d + 1] += prev[d];
      next[d] -= h[m - 1][m - 1] * prev[d];
    }
    Rational sub = 1;
    for (std::size_t i = m - 1; i-- > 0;) {
      sub *= h[i + 1][i];
      if (sgn(sub) == 0) break;
      const Rational coeff = h[i][m - 1] * sub;
      if (sgn(coeff) == 0) continue;
      for (std::size_t d = 0; d < p[i].size(); ++d) next[d] -= coeff * p[i][d];
    }
    p[m] = std::move(next);
  }
  return p[n];
}

std::size_t eigenvalues_at_most(const QMatrix& a, const Rational& shift) {
  QMatrix shifted = a;
  for (std::size_t i = 0; i < a.rows(); ++i) shifted.add(i, i, -shift);
  const Inertia in = inertia(shifted);
  return in.negative + in.zero;
}

}  // namespace l2approx
