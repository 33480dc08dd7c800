#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l2approx/equivariant.hpp"
#include "l2approx/linalg.hpp"
#include "l2approx/oracle.hpp"

namespace l2approx {

/**
 * Face closure of { gamma * lift(s) : |gamma_1^-1 gamma| < r for some gamma_1
 * with gamma_1 * lift(s) sharing a vertex with z }. Empty for r = 0.
 */
Region u_r(const EquivariantComplex& e, const Region& z, std::size_t r);

struct RatioSeries {
  std::size_t radius = 0;
  std::vector<Rational> ratios;
  bool ok = false;
};

struct AmenabilityReport {
  std::vector<RatioSeries> series;
  bool ok = false;
};

/// |U_R(X_k)| / |X_k| per radius; ok when the last ratio is within `tolerance` of 1.
/// Throws ValidationError if the sequence is empty or not nested.
AmenabilityReport is_amenable_exhaustion(const EquivariantComplex& e, const std::vector<Region>& seq,
                                         const std::vector<std::size_t>& radii, const Rational& tolerance);

struct BalanceReport {
  /// occupancy[k][j] = |X_k cap Gamma s_j| / |X_k| over all orbits s_j in dimension order.
  std::vector<std::vector<Rational>> occupancy;
  Rational target;
  bool ok = false;
};

BalanceReport is_balanced(const EquivariantComplex& e, const std::vector<Region>& seq, const Rational& tolerance);

/// {-k..k}^n for k = 1..k_max (free abelian), or the whole group at every level (finite).
std::vector<std::vector<GroupElement>> box_sets(const Group& group, std::size_t k_max);

/// Face closure of V_k * F. Throws ValidationError if the V_k are not nested.
std::vector<Region> folner_exhaustion(const EquivariantComplex& e, const std::vector<std::vector<GroupElement>>& sets);

/// (orbit, shift) of every p-simplex of a region, sorted.
using Coordinates = std::vector<std::pair<std::size_t, GroupElement>>;
Coordinates coordinates(const Region& region, long p);

struct TruncatedOperator {
  std::size_t k = 0;
  QMatrix matrix;
  Coordinates rows;
  Coordinates cols;
};

/// Entry ((s, x), (t, y)) is the coefficient of x^-1 y in a(s, t).
TruncatedOperator truncate(const GroupRingMatrix& a, const Coordinates& rows, const Coordinates& cols,
                           std::size_t k = 0);

struct RestrictionReport {
  long degree = 0;
  bool structure_ok = true;
  bool manifold_ok = true;
  bool equal = false;
  std::vector<std::string> failures;
  QMatrix lhs;
  QMatrix rhs;
  bool ok() const { return structure_ok && manifold_ok && equal; }
};

/**
 * Compares the cap operator of U rel V, computed from the top simplices of U,
 * with the truncation of the cap operator of the whole cover, both on the
 * coordinates of U \ V. Also checks that (U, V) is a homology manifold with
 * boundary and that no top simplex outside U has a face in U \ V.
 */
RestrictionReport restriction_check(const EquivariantComplex& e, const Region& u, const Region& v, long p);

struct CoverThickening {
  Region u;
  Region v;
  ManifoldReport report;
};

/// Full subcomplex of the subdivided cover on barycenters of simplices meeting x_prime.
CoverThickening thicken_in_cover(const EquivariantComplex& base, const EquivariantSubdivision& sd,
                                 const Region& x_prime);

struct AmenableOptions {
  std::size_t jobs = 1;
  bool oracle = false;
  TorusOptions torus;
};

struct AmenableRow {
  std::size_t k = 0;
  std::size_t size = 0;
  bool manifold_ok = true;
  std::string note;
  std::vector<std::size_t> kernel_dims;
  std::vector<Rational> betti;
  std::optional<Inertia> inertia;
  Rational sign;
};

struct AmenableRun {
  std::vector<AmenableRow> rows;
  std::vector<std::optional<OracleResult>> betti_oracle;
  std::optional<OracleResult> sign_oracle;
};

/**
 * Per level: homology manifold validation of X_k (boundary Y_k derived),
 * Betti numbers of the truncated Laplacians scaled by |X| / |X_k|, and for
 * dimensions divisible by 4 the signature of the truncated cap pairing on
 * harmonic relative chains.
 */
AmenableRun run_amenable(const EquivariantComplex& e, const std::vector<Region>& exhaustion,
                         const AmenableOptions& options = {});

struct OperatorRow {
  std::size_t k = 0;
  std::size_t size = 0;
  Inertia inertia;
  Rational sign;
  Rational betti;
};

struct OperatorRun {
  std::vector<OperatorRow> rows;
  std::optional<OracleResult> oracle;
};

/// Truncations of a self-adjoint matrix to V_k, signature and nullity divided by |V_k|.
OperatorRun run_amenable_operator(const GroupRingMatrix& a, const std::vector<std::vector<GroupElement>>& sets,
                                  const AmenableOptions& options = {});

}  // namespace l2approx
