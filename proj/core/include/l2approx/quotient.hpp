#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "l2approx/chain.hpp"
#include "l2approx/linalg.hpp"
#include "l2approx/oracle.hpp"

namespace l2approx {

/// Pushed complex at one tower level with its Laplacians and middle-degree pairing.
struct QuotientSnapshot {
  std::size_t k = 0;
  std::size_t index = 0;
  std::size_t middle = 0;
  /// differentials[p] is c_p[k] for p = 0..N (entry 0 is an empty matrix).
  std::vector<QMatrix> differentials;
  std::vector<QMatrix> laplacians;
  std::vector<std::size_t> kernel_dims;
  QMatrix harmonic_basis;
  QMatrix pairing;
  Inertia inertia;
  bool has_pairing = false;

  long long signature() const { return inertia.signature(); }
  Rational normalized(std::size_t count) const { return Rational(count) / Rational(index); }
  Rational sign_norm() const { return Rational(static_cast<long>(signature())) / Rational(index); }
  Rational betti_norm(long p) const;
};

/// Laplacian c_{p+1} c_{p+1}^T + c_p^T c_p of pushed differentials.
QMatrix laplacian(const QMatrix& c_p, const QMatrix& c_p1);

/// Pushed differentials and Laplacians of a free complex at `level`.
QuotientSnapshot snapshot(const FreeComplex& c, const TowerLevel& level);

/**
 * Full snapshot including the harmonic basis B of the middle Laplacian and
 * the pairing B^T f[k] B. Throws InvariantViolation if the pairing is not
 * exactly symmetric or the inertia does not account for every harmonic vector.
 */
QuotientSnapshot snapshot(const SymmetricComplex& s, const TowerLevel& level);

/// dim ker Delta_p[X_k] / [Gamma : Gamma_k].
Rational betti_k(const FreeComplex& c, long p, const TowerLevel& level);
/// (r_p |G_k|) / |G_k|, read off the pushed chain module.
Rational dim_k_chains(const FreeComplex& c, long p, const TowerLevel& level);

/// Number of eigenvalues in (a, b] of the symmetric matrix `a_sym`.
std::size_t spectral_count(const QMatrix& a_sym, const Rational& a, const Rational& b);

struct ConvergenceRow {
  std::size_t k = 0;
  std::size_t index = 0;
  Rational dim_k;
  Rational b_plus;
  Rational b_minus;
  Rational b_zero;
  Rational sign;
};

struct TowerSummary {
  Rational last;
  std::vector<Rational> differences;
  std::optional<OracleResult> oracle;
  std::optional<double> gap;
};

struct TowerRun {
  std::vector<ConvergenceRow> rows;
  TowerSummary summary;
};

struct TowerOptions {
  std::size_t jobs = 1;
  std::optional<OracleResult> oracle;
};

/// Snapshots at every level, computed on up to `jobs` threads and assembled in level order.
TowerRun run_tower(const SymmetricComplex& s, const GroupTower& tower, const TowerOptions& options = {});

struct BettiRow {
  std::size_t k = 0;
  std::size_t index = 0;
  std::vector<Rational> betti;
};

struct BettiRun {
  std::vector<BettiRow> rows;
  std::vector<std::optional<OracleResult>> oracle;
};

BettiRun run_tower_betti(const FreeComplex& c, const GroupTower& tower, std::size_t jobs = 1);

}  // namespace l2approx
