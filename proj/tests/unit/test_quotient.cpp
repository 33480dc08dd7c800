#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "l2approx/errors.hpp"
#include "l2approx/oracle.hpp"
#include "l2approx/quotient.hpp"
#include "support.hpp"

using namespace l2approx;
using l2t::laurent;

namespace {

SymmetricComplex form(const GroupRingElement& x) { return from_form({l2t::scalar_matrix(l2t::z(), x), 1}); }

/// Inertia of the m x m circulant of a symmetric Laurent polynomial from its
/// eigenvalues sum_e c_e cos(2 pi j e / m).
Inertia circulant_inertia(const std::map<std::int64_t, long>& coeffs, std::int64_t m) {
  Inertia out;
  for (std::int64_t j = 0; j < m; ++j) {
    double lambda = 0;
    for (const auto& [e, c] : coeffs) {
      lambda += static_cast<double>(c) * std::cos(2 * std::numbers::pi * static_cast<double>(j * e) / static_cast<double>(m));
    }
    if (std::fabs(lambda) < 1e-9) {
      ++out.zero;
    } else if (lambda > 0) {
      ++out.positive;
    } else {
      ++out.negative;
    }
  }
  return out;
}

FreeComplex circle() {
  const GroupPtr z = l2t::z();
  return FreeComplex(z, {1, 1}, {l2t::scalar_matrix(z, laurent({{1, 1}, {0, -1}}))});
}

}  // namespace

TEST_CASE("snapshot of 2 + t + t^-1 at m = 2") {
  const QuotientSnapshot s = snapshot(form(laurent({{0, 2}, {1, 1}, {-1, 1}})), TowerLevel(l2t::z(), 1, 2));
  // t and t^-1 coincide mod 2, so the pushed form is [[2,2],[2,2]] with eigenvalues 4 and 0
  CHECK(s.pairing == QMatrix::from_dense({{2, 2}, {2, 2}}));
  CHECK(s.harmonic_basis.cols() == 2);
  CHECK(s.inertia == Inertia{1, 0, 1});
  CHECK(s.signature() == 1);
  CHECK(s.sign_norm() == Rational(1, 2));
}

TEST_CASE("snapshot of 2 + t + t^-1 at m = 3 and t + t^-1 at m = 4") {
  const QuotientSnapshot a = snapshot(form(laurent({{0, 2}, {1, 1}, {-1, 1}})), TowerLevel(l2t::z(), 1, 3));
  CHECK(a.inertia == Inertia{3, 0, 0});
  CHECK(a.sign_norm() == 1);
  const QuotientSnapshot b = snapshot(form(laurent({{1, 1}, {-1, 1}})), TowerLevel(l2t::z(), 2, 4));
  CHECK(b.inertia == Inertia{1, 1, 2});
  CHECK(b.sign_norm() == 0);
  const QuotientSnapshot c = snapshot(form(laurent({{1, 1}, {-1, 1}})), TowerLevel(l2t::z(), 1, 3));
  CHECK(c.inertia == Inertia{1, 2, 0});
}

TEST_CASE("unit form over the trivial group") {
  const GroupPtr t = l2t::trivial();
  GroupRingMatrix one(t, 1, 1);
  one.add(0, 0, GroupElement(), 1);
  const QuotientSnapshot s = snapshot(from_form({one, 1}), TowerLevel(t, 1, 0));
  CHECK(s.sign_norm() == 1);
}

TEST_CASE("snapshots agree with circulant eigenvalues") {
  const std::vector<std::map<std::int64_t, long>> polys{
      {{0, 2}, {1, 1}, {-1, 1}}, {{1, 1}, {-1, 1}}, {{0, 1}, {2, -1}, {-2, -1}}, {{0, -3}, {1, 2}, {-1, 2}, {3, 1}, {-3, 1}}};
  for (const auto& p : polys) {
    for (std::int64_t m = 1; m <= 24; ++m) {
      const QuotientSnapshot s = snapshot(form(laurent(p)), TowerLevel(l2t::z(), 1, m));
      CHECK(s.inertia == circulant_inertia(p, m));
    }
  }
}

TEST_CASE("the pairing lives on harmonic chains only") {
  // C_3 -> C_2 by t - 1, form 2 + t + t^-1 on C_2: harmonic C_2 chains are the constants,
  // where the form takes the value 4m > 0
  const GroupPtr z = l2t::z();
  std::vector<GroupRingMatrix> d{GroupRingMatrix(z, 0, 0), GroupRingMatrix(z, 0, 1),
                                 l2t::scalar_matrix(z, laurent({{1, 1}, {0, -1}})), GroupRingMatrix(z, 1, 0)};
  const FreeComplex base(z, {0, 0, 1, 1, 0}, d);
  std::vector<GroupRingMatrix> f{GroupRingMatrix(z, 0, 0), GroupRingMatrix(z, 0, 1),
                                 l2t::scalar_matrix(z, laurent({{0, 2}, {1, 1}, {-1, 1}})), GroupRingMatrix(z, 1, 0),
                                 GroupRingMatrix(z, 0, 0)};
  const SymmetricComplex s(base, f);
  REQUIRE(validate(s).ok());
  for (std::int64_t m = 1; m <= 12; ++m) {
    const QuotientSnapshot snap = snapshot(s, TowerLevel(z, 1, m));
    CHECK(snap.harmonic_basis.cols() == 1);
    CHECK(snap.inertia == Inertia{1, 0, 0});
    CHECK(snap.sign_norm() == Rational(1, static_cast<long>(m)));
  }
}

TEST_CASE("an asymmetric pairing is an invariant violation") {
  const GroupPtr z = l2t::z();
  GroupRingMatrix a(z, 2, 2);
  a.add(0, 1, l2t::g1(1), 1);
  a.add(1, 0, l2t::g1(0), 1);
  std::vector<GroupRingMatrix> f;
  std::vector<std::size_t> ranks{0, 0, 2, 0, 0};
  for (std::size_t p = 0; p <= 4; ++p) f.emplace_back(z, ranks[p], ranks[4 - p]);
  f[2] = a;
  const SymmetricComplex s(FreeComplex::zero(z, ranks), f);
  CHECK_THROWS_AS(snapshot(s, TowerLevel(z, 1, 3)), InvariantViolation);
}

TEST_CASE("Laplacian formula") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const QMatrix c1 = l2t::random_qmatrix(3, 4, rng);
    const QMatrix c2 = l2t::random_qmatrix(4, 2, rng);
    CHECK(laplacian(c1, c2) == c2 * c2.transpose() + c1.transpose() * c1);
  }
}

TEST_CASE("Betti numbers along towers") {
  for (std::int64_t m = 1; m <= 40; ++m) {
    CHECK(betti_k(circle(), 0, TowerLevel(l2t::z(), 1, m)) == Rational(1, static_cast<long>(m)));
    CHECK(betti_k(circle(), 1, TowerLevel(l2t::z(), 1, m)) == Rational(1, static_cast<long>(m)));
  }
  const FreeComplex zero = FreeComplex::zero(l2t::z(), {3, 2});
  CHECK(betti_k(zero, 0, TowerLevel(l2t::z(), 1, 5)) == 3);
  CHECK(betti_k(zero, 1, TowerLevel(l2t::z(), 1, 5)) == 2);
  // the trivial group gives ordinary Betti numbers: the circle as one vertex and one loop
  const GroupPtr t = l2t::trivial();
  const FreeComplex loop(t, {1, 1}, {GroupRingMatrix(t, 1, 1)});
  CHECK(betti_k(loop, 0, TowerLevel(t, 1, 0)) == 1);
  CHECK(betti_k(loop, 1, TowerLevel(t, 1, 0)) == 1);
  CHECK_THROWS_AS(betti_k(loop, 3, TowerLevel(t, 1, 0)), ValidationError);
}

TEST_CASE("chain dimensions equal ranks at every level") {
  const FreeComplex c = FreeComplex::zero(l2t::z(2), {5, 0, 2});
  for (std::int64_t m : {1, 2, 4, 8}) {
    const TowerLevel l(l2t::z(2), 1, m);
    CHECK(dim_k_chains(c, 0, l) == 5);
    CHECK(dim_k_chains(c, 1, l) == 0);
    CHECK(dim_k_chains(c, 2, l) == 2);
  }
  CHECK(dim_k_chains(FreeComplex::zero(l2t::trivial(), {4}), 0, TowerLevel(l2t::trivial(), 1, 0)) == 4);
}

TEST_CASE("spectral counts") {
  const QMatrix c = l2t::scalar_matrix(l2t::z(), laurent({{0, 2}, {1, -1}, {-1, -1}})).push(TowerLevel(l2t::z(), 1, 4));
  CHECK(spectral_count(c, 0, 2) == 2);
  CHECK(spectral_count(c, 0, Rational(1, 2)) == 0);
  CHECK(spectral_count(c, -1, 4) == 4);
  CHECK(spectral_count(QMatrix::identity(3), 0, 1) == 3);
  CHECK_THROWS_AS(spectral_count(c, 1, 0), ValidationError);
}

TEST_CASE("run_tower on the linear schedule") {
  const GroupTower t = make_tower(l2t::z(), linear_schedule(2, 6), false);
  const TowerRun run = run_tower(form(laurent({{0, 2}, {1, 1}, {-1, 1}})), t);
  REQUIRE(run.rows.size() == 5);
  for (const auto& r : run.rows) {
    const long k = static_cast<long>(r.k);
    CHECK(r.sign == (k % 2 == 0 ? l2t::q(k - 1, k) : Rational(1)));
    CHECK(r.dim_k == 1);
  }
  CHECK(run.summary.differences.size() == 4);
  CHECK(run.summary.last == Rational(5, 6));
}

TEST_CASE("run_tower on powers of two for t + t^-1") {
  const TowerRun run = run_tower(form(laurent({{1, 1}, {-1, 1}})), make_tower(l2t::z(), power_schedule(6)));
  for (const auto& r : run.rows) CHECK(r.sign == 0);
}

TEST_CASE("conservation and symmetry at every level") {
  std::mt19937_64 rng(5);
  const GroupPtr z = l2t::z();
  for (int trial = 0; trial < 8; ++trial) {
    GroupRingMatrix a = l2t::random_matrix(z, 2, 2, 3, 2, rng);
    a = a + a.adjoint();
    const SymmetricComplex s = from_form({a, 1});
    for (std::int64_t m : {1, 2, 3, 4, 6}) {
      const QuotientSnapshot snap = snapshot(s, TowerLevel(z, 1, m));
      CHECK(snap.pairing.is_symmetric());
      CHECK(snap.inertia.size() == snap.kernel_dims[2]);
      CHECK(snap.normalized(snap.inertia.positive) + snap.normalized(snap.inertia.negative) +
                snap.normalized(snap.inertia.zero) ==
            snap.normalized(snap.kernel_dims[2]));
    }
  }
}

TEST_CASE("finite groups: the tower equals the closed form at every level") {
  const GroupPtr g = l2t::s3();
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> id(0, 5), c(-2, 2);
  for (int trial = 0; trial < 6; ++trial) {
    GroupRingMatrix a(g, 2, 2);
    for (int t = 0; t < 5; ++t) a.add(static_cast<std::size_t>(t % 2), static_cast<std::size_t>((t / 2) % 2), l2t::fid(id(rng)), c(rng));
    a = a + a.adjoint();
    const SymmetricComplex s = from_form({a, 1});
    const Rational expected = l2_signature_finite(s);
    for (const auto& r : run_tower(s, make_tower(g, power_schedule(3))).rows) CHECK(r.sign == expected);
  }
}

TEST_CASE("parallel levels give identical rows") {
  const SymmetricComplex s = form(laurent({{0, 1}, {1, 1}, {-1, 1}, {2, -1}, {-2, -1}}));
  const GroupTower t = make_tower(l2t::z(), linear_schedule(1, 30), false);
  TowerOptions serial, parallel;
  parallel.jobs = 8;
  const TowerRun a = run_tower(s, t, serial), b = run_tower(s, t, parallel);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].sign == b.rows[i].sign);
    CHECK(a.rows[i].b_zero == b.rows[i].b_zero);
  }
}

TEST_CASE("tower and complex must share a group") {
  CHECK_THROWS_AS(run_tower(form(laurent({{0, 1}})), make_tower(l2t::z(2), {2})), ValidationError);
}
