#include <random>

#include "doctest.h"
#include "l2approx/errors.hpp"
#include "l2approx/linalg.hpp"
#include "l2approx/simplicial.hpp"
#include "support.hpp"

using namespace l2approx;

namespace {

SimplicialComplex tetra_boundary() { return SimplicialComplex({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}); }

/// Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
SimplicialComplex torus7() {
  std::vector<Simplex> t;
  for (std::size_t i = 0; i < 7; ++i) {
    t.push_back(make_simplex({i, (i + 1) % 7, (i + 3) % 7}));
    t.push_back(make_simplex({i, (i + 2) % 7, (i + 3) % 7}));
  }
  return SimplicialComplex(t);
}

long euler(const SimplicialComplex& k) {
  long chi = 0;
  for (long p = 0; p <= k.dim(); ++p) chi += (p % 2 == 0 ? 1 : -1) * static_cast<long>(k.simplices(p).size());
  return chi;
}

SimplicialComplex random_subcomplex(const SimplicialComplex& k, std::mt19937_64& rng) {
  const std::vector<Simplex> all(k.simplices().begin(), k.simplices().end());
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1), count(1, 3);
  std::vector<Simplex> gens;
  for (std::size_t i = count(rng); i > 0; --i) gens.push_back(all[pick(rng)]);
  return SimplicialComplex(gens);
}

}  // namespace

TEST_CASE("face closure and counts") {
  const SimplicialComplex t({{2, 0, 1}});
  CHECK(t.size() == 7);
  CHECK(t.dim() == 2);
  CHECK(t.contains({0, 2}));
  CHECK(t.facets() == std::vector<Simplex>{{0, 1, 2}});
  CHECK(SimplicialComplex().dim() == -1);
  CHECK(tetra_boundary().size() == 14);
  CHECK(euler(tetra_boundary()) == 2);
  CHECK(euler(torus7()) == 0);
  CHECK(torus7().simplices(1).size() == 21);
}

TEST_CASE("faces helper") {
  CHECK(faces({0, 1}).size() == 3);
  CHECK(faces({0, 1}, true).size() == 4);
  CHECK(meets({0, 1}, {1, 2}));
  CHECK_FALSE(meets({0, 1}, {2, 3}));
}

TEST_CASE("boundary squares to zero and ranks match a dense reference") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<std::size_t> v(0, 6);
    std::vector<Simplex> gens;
    for (int i = 0; i < 6; ++i) gens.push_back(make_simplex({v(rng), v(rng), v(rng), v(rng)}));
    const SimplicialComplex k(gens);
    for (long p = 1; p <= k.dim(); ++p) {
      const QMatrix d = k.boundary(p);
      CHECK(rank(d) == l2t::dense_rank(d.to_dense()));
      if (p >= 2) CHECK((k.boundary(p - 1) * d).is_zero());
    }
    // Euler characteristic from reduced Betti numbers
    const std::vector<std::size_t> b = reduced_betti(k);
    long reduced_chi = 0;
    for (std::size_t i = 0; i < b.size(); ++i) reduced_chi += (i % 2 == 1 ? 1 : -1) * static_cast<long>(b[i]);
    CHECK(reduced_chi == euler(k) - 1);
  }
}

TEST_CASE("reduced betti numbers") {
  CHECK(reduced_betti(SimplicialComplex()) == std::vector<std::size_t>{1});
  CHECK(reduced_betti(SimplicialComplex(std::vector<Simplex>{{0}})) == std::vector<std::size_t>{0, 0});
  CHECK(reduced_betti(SimplicialComplex(std::vector<Simplex>{{0}, {1}})) == std::vector<std::size_t>{0, 1});
  CHECK(reduced_betti(SimplicialComplex({{0, 1}, {1, 2}, {0, 2}})) == std::vector<std::size_t>{0, 0, 1});
  CHECK(reduced_betti(tetra_boundary()) == std::vector<std::size_t>{0, 0, 0, 1});
  CHECK(reduced_betti(torus7()) == std::vector<std::size_t>{0, 0, 2, 1});
  CHECK(is_homology_sphere(reduced_betti(SimplicialComplex()), -1));
  CHECK(is_homology_sphere(reduced_betti(tetra_boundary()), 2));
  CHECK_FALSE(is_homology_sphere(reduced_betti(torus7()), 2));
  CHECK(is_acyclic(reduced_betti(SimplicialComplex({{0, 1, 2}}))));
}

TEST_CASE("links and stars") {
  const SimplicialComplex t({{0, 1, 2}});
  CHECK(link(t, {0}) == SimplicialComplex({{1, 2}}));
  CHECK(link(t, {0, 1, 2}).empty());
  CHECK(link(tetra_boundary(), {0}) == SimplicialComplex({{1, 2}, {1, 3}, {2, 3}}));
  CHECK(closed_star(tetra_boundary(), {0}).size() == 13);

  CHECK(star(t, SimplicialComplex(std::vector<Simplex>{{0}})) == t);
  CHECK(star(t, SimplicialComplex()).empty());
  CHECK_THROWS_AS(star(t, SimplicialComplex(std::vector<Simplex>{{5}})), ValidationError);
  CHECK(full_subcomplex(tetra_boundary(), {0, 1, 2}) == SimplicialComplex({{0, 1, 2}}));
}

TEST_CASE("barycentric subdivision of the tetrahedron boundary") {
  const Subdivision s = barycentric(tetra_boundary());
  CHECK(s.complex.simplices(0).size() == 14);
  CHECK(s.complex.simplices(1).size() == 36);
  CHECK(s.complex.simplices(2).size() == 24);
  CHECK(s.carrier.size() == 14);
  CHECK(s.barycenter.at({0, 1}) < 14);
  CHECK(s.subdivide(SimplicialComplex({{0, 1}})).simplices(1).size() == 2);
  CHECK(reduced_betti(s.complex) == reduced_betti(tetra_boundary()));
}

TEST_CASE("star of the subdivision equals the double star") {
  // Star(X)_b = Star(Star(X_b))
  std::mt19937_64 rng(2);
  for (const SimplicialComplex& k : {tetra_boundary(), torus7()}) {
    const Subdivision s = barycentric(k);
    std::vector<SimplicialComplex> xs{SimplicialComplex(std::vector<Simplex>{{0}})};
    for (int i = 0; i < 8; ++i) xs.push_back(random_subcomplex(k, rng));
    for (const SimplicialComplex& x : xs) {
      const SimplicialComplex lhs = s.subdivide(star(k, x));
      const SimplicialComplex xb = s.subdivide(x);
      const SimplicialComplex rhs = star(s.complex, star(s.complex, xb));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("homology manifold validation") {
  const ManifoldReport closed = validate_homology_manifold(tetra_boundary(), SimplicialComplex());
  CHECK(closed.ok);
  CHECK(closed.dim == 2);
  CHECK(closed.boundary.empty());
  CHECK(validate_homology_manifold(torus7(), SimplicialComplex()).ok);

  const SimplicialComplex tri({{0, 1, 2}});
  const ManifoldReport disk = classify_homology_manifold(tri);
  CHECK(disk.ok);
  CHECK(disk.boundary == SimplicialComplex({{0, 1}, {1, 2}, {0, 2}}));
  CHECK(disk.interior.size() == 1);
  CHECK(validate_homology_manifold(tri, SimplicialComplex({{0, 1}, {1, 2}, {0, 2}})).ok);
  CHECK_FALSE(validate_homology_manifold(tri, SimplicialComplex()).ok);

  const SimplicialComplex wedge({{0, 1, 2}, {0, 3, 4}});
  const ManifoldReport w = classify_homology_manifold(wedge);
  CHECK_FALSE(w.ok);
  REQUIRE_FALSE(w.failures.empty());
  CHECK(w.failures.front().find("[0]") != std::string::npos);
}

TEST_CASE("thickening examples") {
  const SimplicialComplex k = tetra_boundary();
  const Thickening v = thicken(k, SimplicialComplex(), SimplicialComplex(std::vector<Simplex>{{0}}));
  CHECK(v.report.ok);
  // closed-star disk: the six small triangles around vertex 0
  CHECK(v.x.simplices(2).size() == 6);
  CHECK(is_acyclic(reduced_betti(v.x)));
  CHECK(is_homology_sphere(reduced_betti(v.y), 1));
  CHECK(v.y.simplices(1).size() == 6);

  const Thickening all = thicken(k, SimplicialComplex(), k);
  CHECK(all.x == all.subdivision.complex);
  CHECK(all.y.empty());

  const Thickening none = thicken(k, SimplicialComplex(), SimplicialComplex());
  CHECK(none.x.empty());

  CHECK_THROWS_AS(thicken(SimplicialComplex({{0, 1, 2}, {0, 3, 4}}), SimplicialComplex(), SimplicialComplex(std::vector<Simplex>{{0}})),
                  ValidationError);
  CHECK_THROWS_AS(thicken(k, SimplicialComplex(), SimplicialComplex(std::vector<Simplex>{{9}})), ValidationError);
}

TEST_CASE("random thickenings are manifolds between X' and Star(X')") {
  std::mt19937_64 rng(21);
  for (const SimplicialComplex& k : {tetra_boundary(), torus7()}) {
    for (int trial = 0; trial < 10; ++trial) {
      const SimplicialComplex xp = random_subcomplex(k, rng);
      const Thickening t = thicken(k, SimplicialComplex(), xp);
      CHECK(t.report.ok);
      CHECK(t.subdivision.subdivide(xp).is_subcomplex_of(t.x));
      CHECK(t.x.is_subcomplex_of(t.subdivision.subdivide(star(k, xp))));
      CHECK(validate_homology_manifold(t.x, t.y).ok);
    }
  }
}
