#include "l2approx/spectral.hpp"

#include <cmath>

#include "l2approx/errors.hpp"
#include "l2approx/linalg.hpp"
#include "l2approx/quotient.hpp"

namespace l2approx {

namespace {

constexpr std::size_t kExactExponentLimit = 4096;
constexpr std::size_t kExpandLimit = 128;
constexpr long double kSlack = 1e-9L;

Rational power(Rational base, std::size_t e) {
  Rational r = 1;
  while (e > 0) {
    if (e & 1U) r *= base;
    e >>= 1U;
    if (e) base *= base;
  }
  return r;
}

Rational binomial(std::size_t n, std::size_t k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

// Exact grid -K, -K + h, ..., K together with extra points inside [-K, K].
std::vector<Rational> sample_grid(const Rational& k, const Rational& h, std::vector<Rational> extra) {
  std::vector<Rational> pts;
  for (Rational x = -k; x <= k; x += h) pts.push_back(x);
  for (auto& x : extra) {
    if (x >= -k && x <= k) pts.push_back(std::move(x));
  }
  return pts;
}

void record(FilterCheck& check, bool ok, long double margin, const Rational& x, const char* what) {
  ++check.points;
  check.worst_margin = std::min(check.worst_margin, static_cast<double>(margin));
  if (!ok) {
    if (check.violations == 0) check.first_failure = std::string(what) + " at x=" + to_string(x);
    ++check.violations;
  }
}

// log P(lo <= Bin(n, t) <= hi) summed over a window around the mean.
long double binomial_window(std::size_t n, long double t, std::size_t lo, std::size_t hi) {
  if (lo > hi) return 0;
  if (t <= 0) return lo == 0 ? 1 : 0;
  if (t >= 1) return hi >= n ? 1 : 0;
  const long double nd = static_cast<long double>(n);
  const long double mean = nd * t;
  const long double sd = std::sqrt(nd * t * (1 - t));
  const long double reach = 40 * sd + 40;
  const auto from = static_cast<std::size_t>(std::max<long double>(static_cast<long double>(lo), mean - reach));
  const auto to = static_cast<std::size_t>(std::min<long double>(static_cast<long double>(hi), mean + reach));
  if (from > to) return 0;
  const long double lt = std::log(t);
  const long double l1t = std::log1p(-t);
  const long double lgn = std::lgamma(nd + 1);
  long double sum = 0;
  for (std::size_t j = from; j <= to; ++j) {
    const long double jd = static_cast<long double>(j);
    sum += std::exp(lgn - std::lgamma(jd + 1) - std::lgamma(nd - jd + 1) + jd * lt + (nd - jd) * l1t);
  }
  return std::min<long double>(sum, 1);
}

}  // namespace

long double FilterSpec::evaluate(long double x) const {
  const long double kk = to_long_double(k);
  if (kind == Kind::PEps) {
    const long double r = (x / kk) * (x / kk);
    if (r <= 1) return std::exp(static_cast<long double>(exponent) * std::log1p(-r));
    return std::pow(1 - r, static_cast<long double>(exponent));
  }
  const long double t = (x + kk) / (2 * kk);
  const long double mass = binomial_window(degree, std::clamp<long double>(t, 0, 1), j_low, j_high);
  return to_long_double(low) + mass * (to_long_double(high) - to_long_double(low));
}

Rational FilterSpec::evaluate_exact(const Rational& x) const {
  if (kind != Kind::PEps) throw ValidationError("exact evaluation is only available for p_eps");
  return power(1 - (x / k) * (x / k), exponent);
}

FilterSpec build_p_eps(const Rational& eps, const Rational& k) {
  if (!(eps > 0 && eps < 1)) throw ValidationError("p_eps needs 0 < eps < 1");
  if (k < 1) throw ValidationError("p_eps needs K >= 1");
  FilterSpec spec;
  spec.kind = FilterSpec::Kind::PEps;
  spec.eps = eps;
  spec.k = k;
  const Rational r = (eps / k) * (eps / k);
  const Rational base = 1 - r;
  const long double le = std::log(to_long_double(eps));
  const long double lb = std::log1p(-to_long_double(r));
  auto d = static_cast<std::size_t>(std::max<long double>(1, std::ceil(le / lb)));
  if (d <= kExactExponentLimit) {
    while (power(base, d) > eps) ++d;
    while (d > 1 && power(base, d - 1) <= eps) --d;
    spec.exact_exponent_check = true;
  } else {
    while (static_cast<long double>(d) * lb > le) ++d;
  }
  spec.exponent = d;
  spec.degree = 2 * d;
  if (d <= kExpandLimit) {
    spec.coefficients.assign(spec.degree + 1, Rational(0));
    const Rational step = -1 / (k * k);
    for (std::size_t j = 0; j <= d; ++j) spec.coefficients[2 * j] = binomial(d, j) * power(step, j);
  }

  const long double e = to_long_double(eps);
  for (const Rational& x : sample_grid(k, eps / 8, {Rational(0), eps, -eps, k, -k})) {
    const long double v = spec.evaluate(to_long_double(x));
    if (abs(x) <= eps) {
      record(spec.check, v >= 0 && v <= (1 + e) * (1 + kSlack), std::min(v, 1 + e - v), x, "|x|<=eps band");
    } else {
      record(spec.check, v >= 0 && v <= e * (1 + kSlack), std::min(v, e - v), x, "eps<=|x|<=K band");
    }
  }
  if (spec.evaluate_exact(0) != 1) record(spec.check, false, -1, Rational(0), "p(0)=1");
  if (spec.exact_exponent_check && spec.evaluate_exact(eps) > eps) {
    record(spec.check, false, -1, eps, "p(eps)<=eps");
  }
  if (!spec.check.ok()) throw InvariantViolation("p_eps failed its constraint check: " + spec.check.first_failure);
  return spec;
}

FilterSpec build_q_eps(const Rational& a, const Rational& b, const Rational& eps, const Rational& k,
                       const QEpsOptions& options) {
  if (!(a < b)) throw ValidationError("q_eps needs a < b");
  if (!(eps > 0 && eps < (b - a) / 2)) throw ValidationError("q_eps needs 0 < eps < (b-a)/2");
  if (k < 1 || k < abs(a) || k < abs(b)) throw ValidationError("q_eps needs K >= max(|a|, |b|, 1)");
  const Rational delta = eps / (4 * k);
  const Rational alpha = (a + k) / (2 * k) + delta;
  const Rational beta = (b + k) / (2 * k) - delta;
  const long double e = to_long_double(eps);
  const long double kk = to_long_double(k);
  auto degree = static_cast<std::size_t>(std::ceil(8 * kk * kk * std::log(4 / e) / (e * e)));
  degree = std::max<std::size_t>(degree, 1);

  const std::vector<Rational> grid = sample_grid(k, eps / 8, {a, b, a + eps, b - eps, (a + b) / 2, k, -k});
  while (degree <= options.max_degree) {
    FilterSpec spec;
    spec.kind = FilterSpec::Kind::QEps;
    spec.a = a;
    spec.b = b;
    spec.eps = eps;
    spec.k = k;
    spec.degree = degree;
    spec.low = -eps / 2;
    spec.high = 1 - eps / 2;
    Rational lo_r = alpha * Rational(degree);
    Rational hi_r = beta * Rational(degree);
    Integer lo, hi;
    mpz_cdiv_q(lo.get_mpz_t(), lo_r.get_num_mpz_t(), lo_r.get_den_mpz_t());
    mpz_fdiv_q(hi.get_mpz_t(), hi_r.get_num_mpz_t(), hi_r.get_den_mpz_t());
    spec.j_low = static_cast<std::size_t>(std::max<long>(0, lo.get_si()));
    spec.j_high = static_cast<std::size_t>(std::max<long>(0, hi.get_si()));
    for (const Rational& x : grid) {
      const long double v = spec.evaluate(to_long_double(x));
      const bool inside = x > a && x < b;
      const long double chi = inside ? 1 : 0;
      record(spec.check, v <= chi && v >= -1, std::min(chi - v, v + 1), x, "-1<=q<=chi");
      const bool banded = x <= a || x >= b || (x >= a + eps && x <= b - eps);
      if (banded) record(spec.check, v >= chi - e, v - (chi - e), x, "q>=chi-eps");
    }
    if (spec.check.ok()) return spec;
    degree *= 2;
  }
  throw ValidationError("q_eps constraints could not be verified below degree " + std::to_string(options.max_degree));
}

LogDetReport log_det_prime(const QMatrix& laplacian) {
  const Inertia in = inertia(laplacian);
  if (in.negative > 0) throw ValidationError("log_det_prime needs a positive semidefinite matrix");
  const std::vector<Rational> poly = characteristic_polynomial(laplacian);
  std::size_t z = 0;
  while (z < poly.size() && sgn(poly[z]) == 0) ++z;
  LogDetReport report;
  report.kernel_dim = z;
  const std::size_t n = laplacian.rows();
  report.product = ((n - z) % 2 == 0) ? poly[z] : Rational(-poly[z]);
  report.log = static_cast<double>(std::log(to_long_double(report.product)));
  report.consistent = z == in.zero && report.product > 0;
  return report;
}

std::vector<BoundCheck> check_small_eigenvalue_bound(const QMatrix& laplacian, std::size_t d, const Rational& k,
                                                     const std::vector<Rational>& eps_grid,
                                                     const Rational& normalizer) {
  const bool integral = laplacian.is_integral();
  std::vector<BoundCheck> out;
  for (const Rational& eps : eps_grid) {
    if (!(eps > 0 && eps < 1)) throw ValidationError("eps must lie in (0, 1)");
    BoundCheck item;
    item.lemma = "small_eigenvalue_bound";
    item.eps = eps;
    item.count = spectral_count(laplacian, 0, eps);
    item.lhs = Rational(item.count) / normalizer;
    const long double lk = std::log(to_long_double(k));
    item.rhs = static_cast<double>(static_cast<long double>(d) * lk / -std::log(to_long_double(eps)));
    item.precondition = integral;
    if (!integral) item.note = "laplacian has non-integer entries";
    item.ok = to_long_double(item.lhs) <= static_cast<long double>(item.rhs) * (1 + kSlack);
    out.push_back(std::move(item));
  }
  return out;
}

GroupRingMatrix group_laplacian(const FreeComplex& c, long p) {
  const GroupRingMatrix down = c.c(p);
  const GroupRingMatrix up = c.c(p + 1);
  return up * up.adjoint() + down.adjoint() * down;
}

BoundCheck replay_spec_control(const FreeComplex& c, long p, const TowerLevel& level, const Rational& eps,
                               const ReplayOptions& options) {
  const GroupRingMatrix lap = group_laplacian(c, p);
  Rational k = lap.norm_bound();
  if (k < 1) k = 1;
  const FilterSpec filter = build_p_eps(eps, k);
  BoundCheck item;
  item.lemma = "spectral_control";
  item.eps = eps;
  item.precondition = lap.is_integral();
  const std::size_t d = lap.rows();
  const long double le = std::log(to_long_double(eps));
  item.rhs = static_cast<double>(static_cast<long double>(d) *
                                 (to_long_double(eps) + std::log(to_long_double(k)) / -le));
  const QMatrix delta = lap.push(level);
  const std::size_t n = delta.rows();
  if (filter.exponent > options.max_exponent || n > options.max_rows) {
    item.note = "skipped: exponent " + std::to_string(filter.exponent) + ", size " + std::to_string(n);
    return item;
  }
  const QMatrix m = QMatrix::identity(n) - (delta * delta) * (1 / (k * k));
  QMatrix result = QMatrix::identity(n);
  QMatrix base = m;
  for (std::size_t e = filter.exponent; e > 0; e >>= 1U) {
    if (e & 1U) result = result * base;
    if (e > 1) base = base * base;
  }
  const std::size_t kernel = n - rank(delta);
  item.count = kernel;
  item.lhs = (result.trace() - Rational(kernel)) / Rational(level.order());
  item.ok = item.lhs >= 0 && to_long_double(item.lhs) <= static_cast<long double>(item.rhs);
  if (!item.precondition) item.note = "laplacian has non-integer entries; the bound is not guaranteed";
  return item;
}

}  // namespace l2approx
