#include "l2approx/quotient.hpp"

#include <cmath>

#include "l2approx/errors.hpp"
#include "parallel.hpp"

namespace l2approx {

Rational QuotientSnapshot::betti_norm(long p) const {
  if (p < 0 || static_cast<std::size_t>(p) >= kernel_dims.size()) {
    throw ValidationError("degree " + std::to_string(p) + " out of range");
  }
  return normalized(kernel_dims[static_cast<std::size_t>(p)]);
}

QMatrix laplacian(const QMatrix& c_p, const QMatrix& c_p1) {
  QMatrix up = c_p1 * c_p1.transpose();
  QMatrix down = c_p.transpose() * c_p;
  if (up.rows() != down.rows()) throw ValidationError("laplacian: incompatible differentials");
  return up + down;
}

namespace {

QuotientSnapshot push_complex(const FreeComplex& c, const TowerLevel& level, std::optional<long> skip_kernel) {
  QuotientSnapshot snap;
  snap.k = level.k();
  snap.index = level.order();
  const long top = static_cast<long>(c.dim());
  for (long p = 0; p <= top + 1; ++p) snap.differentials.push_back(c.c(p).push(level));
  for (long p = 0; p <= top; ++p) {
    const auto up = static_cast<std::size_t>(p);
    snap.laplacians.push_back(laplacian(snap.differentials[up], snap.differentials[up + 1]));
    if (skip_kernel && *skip_kernel == p) {
      snap.kernel_dims.push_back(0);
    } else {
      snap.kernel_dims.push_back(snap.laplacians.back().rows() - rank(snap.laplacians.back()));
    }
  }
  return snap;
}

}  // namespace

QuotientSnapshot snapshot(const FreeComplex& c, const TowerLevel& level) {
  return push_complex(c, level, std::nullopt);
}

QuotientSnapshot snapshot(const SymmetricComplex& s, const TowerLevel& level) {
  if (!s.has_signature()) return push_complex(s.base(), level, std::nullopt);
  const long mid = static_cast<long>(s.middle());
  QuotientSnapshot snap = push_complex(s.base(), level, mid);
  snap.middle = s.middle();
  snap.harmonic_basis = nullspace(snap.laplacians[snap.middle]);
  snap.kernel_dims[snap.middle] = snap.harmonic_basis.cols();
  const QMatrix f = s.f(mid).push(level);
  snap.pairing = snap.harmonic_basis.transpose() * (f * snap.harmonic_basis);
  snap.has_pairing = true;
  if (!snap.pairing.is_symmetric()) {
    throw InvariantViolation("harmonic pairing is not symmetric at level " + std::to_string(level.k()));
  }
  snap.inertia = inertia(snap.pairing);
  if (snap.inertia.size() != snap.harmonic_basis.cols()) {
    throw InvariantViolation("pairing inertia does not match the harmonic dimension at level " +
                             std::to_string(level.k()));
  }
  return snap;
}

Rational betti_k(const FreeComplex& c, long p, const TowerLevel& level) {
  if (p < 0 || p > static_cast<long>(c.dim())) throw ValidationError("degree " + std::to_string(p) + " out of range");
  const QMatrix lap = laplacian(c.c(p).push(level), c.c(p + 1).push(level));
  return Rational(lap.rows() - rank(lap)) / Rational(level.order());
}

Rational dim_k_chains(const FreeComplex& c, long p, const TowerLevel& level) {
  const QMatrix pushed = c.c(p + 1).push(level);
  return Rational(pushed.rows()) / Rational(level.order());
}

std::size_t spectral_count(const QMatrix& a_sym, const Rational& a, const Rational& b) {
  if (a > b) throw ValidationError("spectral_count: empty interval orientation (a > b)");
  return eigenvalues_at_most(a_sym, b) - eigenvalues_at_most(a_sym, a);
}

TowerRun run_tower(const SymmetricComplex& s, const GroupTower& tower, const TowerOptions& options) {
  if (!(*tower.group() == *s.group())) throw ValidationError("tower and complex use different groups");
  if (!s.has_signature()) throw ValidationError("signature needs a complex of dimension divisible by 4");
  const auto& levels = tower.levels();
  TowerRun run;
  run.rows.resize(levels.size());
  detail::parallel_for(levels.size(), options.jobs, [&](std::size_t i) {
    const QuotientSnapshot snap = snapshot(s, levels[i]);
    ConvergenceRow& row = run.rows[i];
    row.k = snap.k;
    row.index = snap.index;
    row.dim_k = dim_k_chains(s.base(), static_cast<long>(s.middle()), levels[i]);
    row.b_plus = snap.normalized(snap.inertia.positive);
    row.b_minus = snap.normalized(snap.inertia.negative);
    row.b_zero = snap.normalized(snap.inertia.zero);
    row.sign = snap.sign_norm();
  });
  run.summary.last = run.rows.back().sign;
  for (std::size_t i = 1; i < run.rows.size(); ++i) {
    run.summary.differences.push_back(run.rows[i].sign - run.rows[i - 1].sign);
  }
  if (options.oracle) {
    run.summary.oracle = options.oracle;
    run.summary.gap = std::fabs(to_long_double(run.summary.last) - options.oracle->value);
  }
  return run;
}

BettiRun run_tower_betti(const FreeComplex& c, const GroupTower& tower, std::size_t jobs) {
  if (!(*tower.group() == *c.group())) throw ValidationError("tower and complex use different groups");
  const auto& levels = tower.levels();
  BettiRun run;
  run.rows.resize(levels.size());
  detail::parallel_for(levels.size(), jobs, [&](std::size_t i) {
    const QuotientSnapshot snap = snapshot(c, levels[i]);
    BettiRow& row = run.rows[i];
    row.k = snap.k;
    row.index = snap.index;
    for (long p = 0; p <= static_cast<long>(c.dim()); ++p) row.betti.push_back(snap.betti_norm(p));
  });
  return run;
}

}  // namespace l2approx
