#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "l2approx/errors.hpp"
#include "l2approx/linalg.hpp"
#include "support.hpp"

using namespace l2approx;

namespace {

QMatrix tridiagonal(std::size_t n, long diag, long off) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (diag != 0) m.set(i, i, diag);
    if (i + 1 < n) {
      m.set(i, i + 1, off);
      m.set(i + 1, i, off);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("inertia of small fixed forms") {
  CHECK(inertia(QMatrix::from_dense({{1, 0}, {0, -1}})) == Inertia{1, 1, 0});
  CHECK(inertia(QMatrix::from_dense({{0, 1}, {1, 0}})) == Inertia{1, 1, 0});
  CHECK(inertia(QMatrix::from_dense({{2, 2}, {2, 2}})) == Inertia{1, 0, 1});
  CHECK(inertia(QMatrix(3, 3)) == Inertia{0, 0, 3});
  CHECK(inertia(QMatrix()) == Inertia{0, 0, 0});
  CHECK_THROWS_AS(inertia(QMatrix::from_dense({{1, 2}, {0, 1}})), ValidationError);
}

TEST_CASE("inertia of tridiagonal matrices matches their cosine spectra") {
  // eigenvalues of the path matrix are d + 2 o cos(j pi / (n+1)), j = 1..n
  for (std::size_t n = 1; n <= 25; ++n) {
    for (auto [d, o] : {std::pair{2L, 1L}, std::pair{0L, 1L}, std::pair{1L, 1L}, std::pair{-1L, 2L}}) {
      Inertia expected;
      for (std::size_t j = 1; j <= n; ++j) {
        const double lambda = static_cast<double>(d) + 2.0 * static_cast<double>(o) *
                                                           std::cos(static_cast<double>(j) * std::numbers::pi / (n + 1.0));
        if (std::fabs(lambda) < 1e-9) {
          ++expected.zero;
        } else if (lambda > 0) {
          ++expected.positive;
        } else {
          ++expected.negative;
        }
      }
      CHECK(inertia(tridiagonal(n, d, o)) == expected);
    }
  }
}

TEST_CASE("inertia agrees with the characteristic-polynomial reference on random symmetric matrices") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + trial % 9;
    const QMatrix a = l2t::random_symmetric(n, rng, 20 + trial % 60);
    CHECK(inertia(a) == l2t::descartes_inertia(a.to_dense()));
  }
}

TEST_CASE("Sylvester: inertia is invariant under congruence") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const QMatrix a = l2t::random_symmetric(n, rng);
    QMatrix p = l2t::random_qmatrix(n, n, rng);
    if (l2t::dense_rank(p.to_dense()) < n) p += QMatrix::identity(n) * Rational(17);
    if (l2t::dense_rank(p.to_dense()) < n) continue;
    CHECK(inertia(p.transpose() * a * p) == inertia(a));
  }
}

TEST_CASE("rank and nullspace") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = 1 + trial % 6, c = 1 + (trial * 7) % 8;
    QMatrix a = l2t::random_qmatrix(r, c, rng, 40);
    if (trial % 3 == 0 && r > 1) {
      // duplicate a row to force a dependency
      for (const auto& [j, v] : a.row(0)) a.set(r - 1, j, v * 2);
    }
    const std::size_t rk = rank(a);
    CHECK(rk == l2t::dense_rank(a.to_dense()));
    const QMatrix n = nullspace(a);
    CHECK(n.rows() == c);
    CHECK(n.cols() == c - rk);
    CHECK((a * n).is_zero());
    CHECK(rank(n) == n.cols());
  }
}

TEST_CASE("characteristic polynomial matches Faddeev-LeVerrier") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const QMatrix a = l2t::random_qmatrix(n, n, rng, 60);
    CHECK(characteristic_polynomial(a) == l2t::faddeev_leverrier(a.to_dense()));
  }
  CHECK(characteristic_polynomial(QMatrix::from_dense({{2, 1}, {1, 2}})) == std::vector<Rational>{3, -4, 1});
}

TEST_CASE("eigenvalue counting below a shift") {
  const QMatrix a = QMatrix::from_dense({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
  CHECK(eigenvalues_at_most(a, 0) == 0);
  CHECK(eigenvalues_at_most(a, 2) == 2);
  CHECK(eigenvalues_at_most(a, Rational(5, 2)) == 2);
  CHECK(eigenvalues_at_most(a, 3) == 3);
}
