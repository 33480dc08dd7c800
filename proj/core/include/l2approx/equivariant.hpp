#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "l2approx/chain.hpp"
#include "l2approx/groupring.hpp"
#include "l2approx/simplicial.hpp"

namespace l2approx {

/// Vertex g * v~ of the cover, v an orbit index.
struct CoverVertex {
  std::size_t orbit = 0;
  GroupElement shift;
  friend auto operator<=>(const CoverVertex&, const CoverVertex&) = default;
  friend bool operator==(const CoverVertex&, const CoverVertex&) = default;
};

/// Ordered vertex list; the order is the local vertex ordering of the simplex.
using VertexTuple = std::vector<CoverVertex>;

/// Simplex shift * lift(orbit) of dimension dim.
struct CoverSimplex {
  long dim = 0;
  std::size_t orbit = 0;
  GroupElement shift;
  friend auto operator<=>(const CoverSimplex&, const CoverSimplex&) = default;
  friend bool operator==(const CoverSimplex&, const CoverSimplex&) = default;
};

using Region = std::set<CoverSimplex>;

/// A tuple identified as sign * shift * lift(orbit).
struct OrbitMatch {
  std::size_t orbit = 0;
  GroupElement shift;
  int sign = 1;
};

/// Finite subcomplex of the cover as a plain simplicial complex.
struct Materialized {
  SimplicialComplex complex;
  std::vector<CoverVertex> vertex;
  std::map<CoverSimplex, Simplex> simplex;
  std::map<Simplex, CoverSimplex> cover;
};

/**
 * Free cocompact Gamma-complex given by one lifted vertex tuple per orbit of
 * simplices (a Delta-complex quotient). Faces of every lift are identified
 * with translates of lifts; the lifts themselves form the fundamental domain.
 */
class EquivariantComplex {
 public:
  /**
   * `simplices[p-1]` lists the lifts of p-simplex orbits (p >= 1). Vertex
   * orbits have the lift (v, e). `fundamental_class` gives a sign per top
   * orbit (may be empty); `boundary` lists (dim, orbit) pairs whose face
   * closure is L. Throws ValidationError on malformed data.
   */
  EquivariantComplex(GroupPtr group, std::size_t vertex_orbits, std::vector<std::vector<VertexTuple>> simplices,
                     std::vector<int> fundamental_class = {},
                     std::vector<std::pair<long, std::size_t>> boundary = {});

  const GroupPtr& group() const { return group_; }
  long dim() const { return static_cast<long>(lifts_.size()) - 1; }
  std::size_t orbit_count(long p) const;
  /// Total number of orbit simplices |X|.
  std::size_t size() const;
  const VertexTuple& lift(long p, std::size_t orbit) const { return lifts_[static_cast<std::size_t>(p)][orbit]; }
  const std::vector<int>& fundamental_class() const { return fundamental_; }
  bool in_boundary(long p, std::size_t orbit) const;
  bool has_boundary() const;
  /// All face identifications preserve the local ordering.
  bool ordered() const { return ordered_; }

  std::optional<OrbitMatch> identify(const VertexTuple& tuple) const;
  VertexTuple vertices(const CoverSimplex& s) const;
  /// faces(s)[i] is the face opposite vertex i, with its identification sign.
  std::vector<std::pair<CoverSimplex, int>> faces(const CoverSimplex& s) const;
  std::vector<CoverSimplex> cofaces(const CoverSimplex& s) const;
  /// Face table entry for a lift: face i of lift(p, orbit).
  const OrbitMatch& face_of_lift(long p, std::size_t orbit, std::size_t i) const;

  /// Closure under faces.
  Region close(const Region& region) const;
  Materialized materialize(const Region& region) const;

  /// Orbit chain complex: c_p has entries sum_i (-1)^i sign_i gamma_i^-1.
  FreeComplex chain_complex() const;

  /// Fundamental class signs present and sum eps_s ds vanishes off L.
  ValidationReport fundamental_cycle_report() const;

  /**
   * Cap product with the fundamental class as a map from p-cochains to
   * (n-p)-chains: every top lift contributes eps * delta_L(front) at
   * gamma_front^-1 gamma_back, front and back being the Alexander-Whitney
   * faces under the local ordering. Throws ValidationError without a valid
   * fundamental class or with unordered face identifications.
   */
  GroupRingMatrix cap_operator(long p) const;

  /// Orbit chain complex with duality f_q = (-1)^(q(q+1)/2) cap_{n-q}; needs an empty boundary.
  SymmetricComplex symmetric_complex() const;

 private:
  GroupPtr group_;
  std::vector<std::vector<VertexTuple>> lifts_;
  std::vector<std::vector<std::vector<OrbitMatch>>> face_table_;
  std::vector<std::vector<std::vector<std::pair<std::size_t, OrbitMatch>>>> coface_table_;
  std::map<std::vector<std::size_t>, std::vector<std::pair<long, std::size_t>>> by_orbits_;
  std::vector<int> fundamental_;
  std::vector<std::set<std::size_t>> boundary_;
  bool ordered_ = true;
};

/// Barycentric subdivision of an equivariant complex, itself equivariant.
struct EquivariantSubdivision {
  EquivariantComplex complex;
  /// Vertex orbit i of the subdivision is the barycenter of (dim, orbit).
  std::vector<std::pair<long, std::size_t>> vertex_carrier;
  /// Carrier simplex (dim, orbit) of every subdivision orbit, per dimension.
  std::vector<std::vector<std::pair<long, std::size_t>>> carrier;

  /// Cover simplex of the original complex carrying a cover vertex of the subdivision.
  CoverSimplex carrier_of(const CoverVertex& v) const;
  /// Subdivision of a region of the original complex.
  Region subdivide(const Region& region) const;
};

/// Orientation of every top flag is eps_sigma times the sign of its vertex permutation.
EquivariantSubdivision barycentric(const EquivariantComplex& e);

}  // namespace l2approx
