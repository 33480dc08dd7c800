#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "l2approx/matrix.hpp"

namespace l2approx {

/// Sorted vertex list.
using Simplex = std::vector<std::size_t>;

/// Finite abstract simplicial complex, always closed under faces.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  /// Face closure of the given simplices (each is sorted and deduplicated first).
  explicit SimplicialComplex(const std::vector<Simplex>& generators);

  void insert(Simplex s);
  bool contains(const Simplex& s) const { return simplices_.contains(s); }
  bool empty() const { return simplices_.empty(); }
  /// Number of simplices of every dimension.
  std::size_t size() const { return simplices_.size(); }
  /// -1 for the empty complex.
  long dim() const;
  const std::set<Simplex>& simplices() const { return simplices_; }
  std::vector<Simplex> simplices(long p) const;
  std::vector<std::size_t> vertices() const;
  /// Simplices not contained in any larger simplex.
  std::vector<Simplex> facets() const;
  bool is_subcomplex_of(const SimplicialComplex& other) const;

  /// Oriented boundary C_p -> C_{p-1} in the bases simplices(p), simplices(p-1).
  QMatrix boundary(long p) const;

  friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

 private:
  std::set<Simplex> simplices_;
};

Simplex make_simplex(std::vector<std::size_t> vertices);
/// Proper and improper faces, including the empty face when `with_empty`.
std::vector<Simplex> faces(const Simplex& s, bool with_empty = false);
bool meets(const Simplex& a, const Simplex& b);

SimplicialComplex link(const SimplicialComplex& k, const Simplex& s);
/// Closed star of a simplex: every face of a simplex containing s.
SimplicialComplex closed_star(const SimplicialComplex& k, const Simplex& s);
/// Union of the closed stars of the vertices of x. Throws ValidationError if x is not a subcomplex of k.
SimplicialComplex star(const SimplicialComplex& k, const SimplicialComplex& x);
/// Full subcomplex on the given vertex set.
SimplicialComplex full_subcomplex(const SimplicialComplex& k, const std::set<std::size_t>& vertices);

/// Reduced rational Betti numbers indexed from degree -1 (the empty complex has b_-1 = 1).
std::vector<std::size_t> reduced_betti(const SimplicialComplex& k);
/// Reduced homology of S^d (d >= -1).
bool is_homology_sphere(const std::vector<std::size_t>& reduced, long d);
bool is_acyclic(const std::vector<std::size_t>& reduced);

/// Barycentric subdivision with vertex i the barycenter of `carrier[i]`.
struct Subdivision {
  SimplicialComplex complex;
  std::vector<Simplex> carrier;
  std::map<Simplex, std::size_t> barycenter;

  /// Image of a subcomplex of the original complex.
  SimplicialComplex subdivide(const SimplicialComplex& sub) const;
};

Subdivision barycentric(const SimplicialComplex& k);

struct ManifoldReport {
  long dim = -1;
  bool ok = true;
  std::vector<Simplex> interior;
  std::vector<Simplex> boundary_simplices;
  SimplicialComplex boundary;
  std::vector<std::string> failures;
};

/**
 * Checks every link against a homology sphere S^{n-1-dim s} (interior) or an
 * acyclic complex (boundary), then compares the derived boundary with `declared`.
 */
ManifoldReport validate_homology_manifold(const SimplicialComplex& k, const SimplicialComplex& declared);
/// Same checks; the derived boundary is reported but not compared.
ManifoldReport classify_homology_manifold(const SimplicialComplex& k);

struct Thickening {
  Subdivision subdivision;
  SimplicialComplex x;
  SimplicialComplex y;
  ManifoldReport report;
};

/**
 * Full subcomplex of the barycentric subdivision on barycenters of simplices
 * meeting x_prime. Throws ValidationError if (k, boundary) fails validation
 * or x_prime is not a subcomplex of k.
 */
Thickening thicken(const SimplicialComplex& k, const SimplicialComplex& boundary, const SimplicialComplex& x_prime);

}  // namespace l2approx
