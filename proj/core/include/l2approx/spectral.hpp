#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/chain.hpp"
#include "l2approx/matrix.hpp"
#include "l2approx/rational.hpp"

namespace l2approx {

/// One sampled constraint check of a filter polynomial.
struct FilterCheck {
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst_margin = 0;
  std::string first_failure;
  bool ok() const { return violations == 0; }
};

/**
 * p_eps(x) = (1 - (x/K)^2)^d, or a Bernstein approximation of an interval
 * indicator for q_eps. The Bernstein form on t = (x+K)/(2K) has coefficient
 * `high` for j/D in [j_low/D, j_high/D] and `low` elsewhere.
 */
struct FilterSpec {
  enum class Kind { PEps, QEps };

  Kind kind = Kind::PEps;
  Rational eps;
  Rational k;
  Rational a;
  Rational b;
  std::size_t degree = 0;
  /// Power coefficients c_0..c_degree, filled when the degree is small enough to expand.
  std::vector<Rational> coefficients;
  std::size_t exponent = 0;
  bool exact_exponent_check = false;
  std::size_t j_low = 0;
  std::size_t j_high = 0;
  Rational low;
  Rational high;
  FilterCheck check;

  long double evaluate(long double x) const;
  /// Exact value for p_eps; throws for q_eps.
  Rational evaluate_exact(const Rational& x) const;
};

/// Throws ValidationError unless 0 < eps < 1 and K >= 1. Throws
/// InvariantViolation if the constructed polynomial fails its grid check.
FilterSpec build_p_eps(const Rational& eps, const Rational& k);

struct QEpsOptions {
  std::size_t max_degree = std::size_t{1} << 22;
};

/// Throws ValidationError on bad parameters or when no degree up to the cap verifies.
FilterSpec build_q_eps(const Rational& a, const Rational& b, const Rational& eps, const Rational& k,
                       const QEpsOptions& options = {});

struct LogDetReport {
  Rational product;
  double log = 0;
  std::size_t kernel_dim = 0;
  /// Kernel dimension from the characteristic polynomial agrees with inertia.
  bool consistent = true;
};

/// Product of the nonzero eigenvalues of a positive semidefinite matrix.
LogDetReport log_det_prime(const QMatrix& laplacian);

struct BoundCheck {
  std::string lemma;
  Rational eps;
  std::size_t count = 0;
  Rational lhs;
  double rhs = 0;
  bool ok = true;
  bool precondition = true;
  std::string note;
};

/**
 * For each eps checks count(0, eps] / normalizer <= d ln K / (-ln eps). The
 * precondition (integer entries) is recorded in every item.
 */
std::vector<BoundCheck> check_small_eigenvalue_bound(const QMatrix& laplacian, std::size_t d, const Rational& k,
                                                     const std::vector<Rational>& eps_grid,
                                                     const Rational& normalizer);

struct ReplayOptions {
  /// Largest filter exponent for which p_eps(Delta) is formed exactly.
  std::size_t max_exponent = 20000;
  std::size_t max_rows = 96;
};

/**
 * tr_k(p_eps(Delta_p) - pr) computed exactly against d (eps + ln K / (-ln eps)),
 * with K the norm bound of the group-ring Laplacian and d its number of rows.
 */
BoundCheck replay_spec_control(const FreeComplex& c, long p, const TowerLevel& level, const Rational& eps,
                               const ReplayOptions& options = {});

/// Group-ring Laplacian c_{p+1} c_{p+1}* + c_p* c_p.
GroupRingMatrix group_laplacian(const FreeComplex& c, long p);

}  // namespace l2approx
