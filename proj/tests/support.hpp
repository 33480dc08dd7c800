#pragma once

// Shared fixtures and independent reference computations for the test suites.

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "l2approx/groupring.hpp"
#include "l2approx/io.hpp"
#include "l2approx/linalg.hpp"

namespace l2t {

using namespace l2approx;

/// Canonical n/d; the two-argument mpq constructor does not reduce.
inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline GroupPtr z(std::size_t rank = 1) { return std::make_shared<const Group>(Group::free_abelian(rank)); }

inline GroupPtr trivial() { return std::make_shared<const Group>(Group::trivial()); }

inline GroupPtr cyclic(std::size_t n) {
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return std::make_shared<const Group>(Group::finite(t, std::vector<std::size_t>{n > 1 ? 1u : 0u}));
}

/// S_3 as permutations of {0,1,2}, ids in lexicographic order of the images.
inline GroupPtr s3() {
  std::vector<std::vector<int>> perms{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto id = [&](const std::vector<int>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i) {
      if (perms[i] == p) return i;
    }
    return perms.size();
  };
  std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(6));
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      std::vector<int> c(3);
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = id(c);
    }
  }
  return std::make_shared<const Group>(Group::finite(t));
}

inline GroupElement g1(std::int64_t a) { return GroupElement({a}); }
inline GroupElement g2(std::int64_t a, std::int64_t b) { return GroupElement({a, b}); }
inline GroupElement fid(std::int64_t id) { return GroupElement({id}); }

/// Laurent polynomial in one variable from exponent -> coefficient.
inline GroupRingElement laurent(const std::map<std::int64_t, long>& terms) {
  GroupRingElement x;
  for (const auto& [e, c] : terms) x.add(g1(e), Rational(c));
  return x;
}

inline GroupRingMatrix scalar_matrix(const GroupPtr& g, const GroupRingElement& x) { return GroupRingMatrix::scalar(g, x); }

inline std::string data_path(const std::string& rel) { return std::string(L2APPROX_DATA_DIR) + "/" + rel; }

inline InputDocument load(const std::string& rel) { return parse_input(read_text(data_path(rel))); }

inline std::vector<std::string> shipped_files(const std::string& dir) {
  static const std::map<std::string, std::vector<std::string>> files{
      {"complexes",
       {"circle.json", "circle_trivial.json", "form_balanced.json", "form_diagonal.json", "form_positive.json",
        "form_z3.json", "plane.json", "points_z3.json"}},
      {"equivariant",
       {"line.json", "plane.json", "strip.json", "triangle_z3.json", "tetrahedron_boundary.json", "torus7.json"}},
      {"operators", {"positive.json", "balanced.json"}}};
  std::vector<std::string> out;
  for (const auto& f : files.at(dir)) out.push_back(dir + "/" + f);
  return out;
}

/// Random matrix over Q[Z^rank]: up to `max_terms` terms per entry, exponents in [-deg, deg].
inline GroupRingMatrix random_matrix(const GroupPtr& group, std::size_t rows, std::size_t cols, int max_terms,
                                     int deg, std::mt19937_64& rng, bool integral = false) {
  std::uniform_int_distribution<int> terms(0, max_terms), ex(-deg, deg), num(-5, 5), den(1, 4);
  GroupRingMatrix m(group, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const int count = terms(rng);
      for (int t = 0; t < count; ++t) {
        std::vector<std::int64_t> e(group->rank());
        for (auto& x : e) x = ex(rng);
        m.add(i, j, GroupElement(e), integral ? Rational(num(rng)) : q(num(rng), den(rng)));
      }
    }
  }
  return m;
}

inline QMatrix random_qmatrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int density = 50) {
  std::uniform_int_distribution<int> pct(0, 99), num(-6, 6), den(1, 3);
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (pct(rng) < density) m.set(i, j, q(num(rng), den(rng)));
    }
  }
  return m;
}

inline QMatrix random_symmetric(std::size_t n, std::mt19937_64& rng, int density = 50) {
  const QMatrix a = random_qmatrix(n, n, rng, density);
  return a + a.transpose();
}

// ---- reference computations, written independently of the library routines ----

using Dense = std::vector<std::vector<Rational>>;

/// Rank by plain dense Gaussian elimination.
inline std::size_t dense_rank(Dense a) {
  std::size_t r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

/// Characteristic polynomial det(xI - a) by the Faddeev-LeVerrier recursion.
inline std::vector<Rational> faddeev_leverrier(const Dense& a) {
  const std::size_t n = a.size();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  Dense m(n, std::vector<Rational>(n));
  for (std::size_t k = 1; k <= n; ++k) {
    // m = a * m_prev + c_{n-k+1} I
    Dense next(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
        next[i][j] = s;
      }
      next[i][i] += c[n - k + 1];
    }
    m = std::move(next);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    }
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

/// Inertia of a symmetric matrix from sign changes of its characteristic polynomial.
inline Inertia descartes_inertia(const Dense& a) {
  const std::vector<Rational> c = faddeev_leverrier(a);
  auto changes = [&](bool negate) {
    std::size_t count = 0;
    int last = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      int s = sgn(c[i]);
      if (negate && i % 2 == 1) s = -s;
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  };
  std::size_t zero = 0;
  while (zero < c.size() && c[zero] == 0) ++zero;
  return Inertia{changes(false), changes(true), zero};
}

}  // namespace l2t
