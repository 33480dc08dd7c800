#include "l2approx/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "l2approx/errors.hpp"
#include "l2approx/linalg.hpp"

namespace l2approx {

namespace {

using CMatrix = Eigen::MatrixXcd;

TowerLevel whole_group_level(const GroupPtr& group) {
  if (!group->is_finite()) throw ValidationError("finite-group oracle needs a finite or trivial group");
  return TowerLevel(group, 1, 0);
}

// Rows of `top` followed by rows of `bottom`.
QMatrix stack(const QMatrix& top, const QMatrix& bottom) {
  QMatrix out(top.rows() + bottom.rows(), top.cols());
  out.place(0, 0, top);
  out.place(top.rows(), 0, bottom);
  return out;
}

// Harmonic p-chains as ker c_p intersected with ker c_{p+1}^T.
QMatrix harmonic_chains(const FreeComplex& c, long p, const TowerLevel& level) {
  const QMatrix down = c.c(p).push(level);
  const QMatrix up = c.c(p + 1).push(level);
  return nullspace(stack(down, up.transpose()));
}

std::size_t sign_changes(const std::vector<Rational>& coeffs, bool alternate) {
  std::size_t changes = 0;
  int last = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    int s = sgn(coeffs[i]);
    if (alternate && i % 2 == 1) s = -s;
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

CMatrix fiber(const GroupRingMatrix& m, const std::vector<double>& theta) {
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (const auto& [ij, x] : m.entries()) {
    std::complex<double> v = 0;
    for (const auto& [g, c] : x.terms()) {
      double phase = 0;
      for (std::size_t i = 0; i < theta.size(); ++i) phase += static_cast<double>(g.coords[i]) * theta[i];
      v += static_cast<double>(to_long_double(c)) * std::polar(1.0, phase);
    }
    out(static_cast<Eigen::Index>(ij.first), static_cast<Eigen::Index>(ij.second)) = v;
  }
  return out;
}

double scale_of(const CMatrix& m) {
  return m.size() == 0 ? 1.0 : std::max(1.0, m.cwiseAbs().maxCoeff());
}

// Eigenvectors of the Hermitian matrix `h` whose eigenvalues are numerically zero.
CMatrix fiber_kernel(const CMatrix& h, double threshold) {
  if (h.rows() == 0) return CMatrix(0, 0);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const double cut = threshold * scale_of(h);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (std::abs(solver.eigenvalues()(i)) <= cut) keep.push_back(i);
  }
  CMatrix basis(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = solver.eigenvectors().col(keep[j]);
  }
  return basis;
}

CMatrix fiber_laplacian(const FreeComplex& c, long p, const std::vector<double>& theta) {
  const CMatrix down = fiber(c.c(p), theta);
  const CMatrix up = fiber(c.c(p + 1), theta);
  CMatrix lap = CMatrix::Zero(static_cast<Eigen::Index>(c.rank(p)), static_cast<Eigen::Index>(c.rank(p)));
  if (up.cols() > 0) lap += up * up.adjoint();
  if (down.rows() > 0) lap += down.adjoint() * down;
  return lap;
}

template <typename FiberValue>
OracleResult sample_torus(std::size_t rank, const TorusOptions& options, FiberValue&& value) {
  auto average = [&](std::size_t n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < rank; ++i) total *= n;
    long double sum = 0;
    std::vector<double> theta(rank);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = rank; i-- > 0;) {
        const std::size_t j = rest % n;
        rest /= n;
        theta[i] = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      }
      sum += value(theta);
    }
    return static_cast<double>(sum / static_cast<long double>(total));
  };
  auto fibers = [rank](std::size_t n) {
    double total = 1;
    for (std::size_t i = 0; i < rank; ++i) total *= static_cast<double>(n);
    return total;
  };

  std::size_t n = std::max<std::size_t>(2, options.initial_grid + options.initial_grid % 2);
  OracleResult result;
  result.method = OracleMethod::TorusSampling;
  double prev = average(n);
  while (true) {
    const std::size_t next = 2 * n;
    if (fibers(next) > static_cast<double>(options.max_fibers)) {
      result.value = prev;
      result.grid = n;
      result.converged = false;
      result.tolerance = std::numeric_limits<double>::infinity();
      return result;
    }
    const double cur = average(next);
    const double diff = std::fabs(cur - prev);
    n = next;
    if (diff < options.tolerance) {
      result.value = cur;
      result.tolerance = diff;
      result.grid = n;
      return result;
    }
    prev = cur;
  }
}

void require_free_abelian(const GroupPtr& g) {
  if (g->kind() != GroupKind::FreeAbelian) throw ValidationError("torus oracle needs a free abelian group");
}

}  // namespace

std::string to_string(OracleMethod method) {
  switch (method) {
    case OracleMethod::IdentityCoefficient:
      return "identity_coefficient";
    case OracleMethod::FiniteGroupClosedForm:
      return "finite_group_closed_form";
    case OracleMethod::TorusSampling:
      return "torus_sampling";
  }
  return "unknown";
}

Rational l2_signature_finite(const SymmetricComplex& s) {
  if (!s.has_signature()) throw ValidationError("signature needs a complex of dimension divisible by 4");
  const TowerLevel level = whole_group_level(s.group());
  const long mid = static_cast<long>(s.middle());
  const QMatrix b = harmonic_chains(s.base(), mid, level);
  const QMatrix m = b.transpose() * (s.f(mid).push(level) * b);
  // A symmetric matrix has a real-rooted characteristic polynomial, so the
  // rule of signs counts positive and negative eigenvalues exactly.
  const std::vector<Rational> poly = characteristic_polynomial(m);
  const auto positive = static_cast<long long>(sign_changes(poly, false));
  const auto negative = static_cast<long long>(sign_changes(poly, true));
  return Rational(static_cast<long>(positive - negative)) / Rational(level.order());
}

Rational l2_betti_finite(const FreeComplex& c, long p) {
  const TowerLevel level = whole_group_level(c.group());
  return Rational(harmonic_chains(c, p, level).cols()) / Rational(level.order());
}

OracleResult l2_signature_torus(const SymmetricComplex& s, const TorusOptions& options) {
  require_free_abelian(s.group());
  if (!s.has_signature()) throw ValidationError("signature needs a complex of dimension divisible by 4");
  const long mid = static_cast<long>(s.middle());
  const GroupRingMatrix f = s.f(mid);
  return sample_torus(s.group()->rank(), options, [&](const std::vector<double>& theta) {
    const CMatrix b = fiber_kernel(fiber_laplacian(s.base(), mid, theta), options.zero_threshold);
    if (b.cols() == 0) return 0.0L;
    const CMatrix ft = fiber(f, theta);
    CMatrix pairing = b.adjoint() * ft * b;
    pairing = (pairing + pairing.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(pairing, Eigen::EigenvaluesOnly);
    const double cut = options.zero_threshold * scale_of(ft);
    long double sig = 0;
    for (Eigen::Index i = 0; i < pairing.rows(); ++i) {
      const double ev = solver.eigenvalues()(i);
      if (ev > cut) sig += 1;
      if (ev < -cut) sig -= 1;
    }
    return sig;
  });
}

OracleResult l2_betti_torus(const FreeComplex& c, long p, const TorusOptions& options) {
  require_free_abelian(c.group());
  if (p < 0 || p > static_cast<long>(c.dim())) throw ValidationError("degree " + std::to_string(p) + " out of range");
  return sample_torus(c.group()->rank(), options, [&](const std::vector<double>& theta) {
    return static_cast<long double>(fiber_kernel(fiber_laplacian(c, p, theta), options.zero_threshold).cols());
  });
}

Expr MatrixExpression::leaf(GroupRingMatrix m) {
  if (!m.is_square()) throw ValidationError("expression leaves must be square");
  auto e = std::make_shared<MatrixExpression>();
  e->leaf_ = std::move(m);
  return e;
}

Expr MatrixExpression::sum(Expr a, Expr b) {
  auto e = std::make_shared<MatrixExpression>();
  e->kind_ = Kind::Sum;
  e->children_ = {std::move(a), std::move(b)};
  return e;
}

Expr MatrixExpression::product(Expr a, Expr b) {
  auto e = std::make_shared<MatrixExpression>();
  e->kind_ = Kind::Product;
  e->children_ = {std::move(a), std::move(b)};
  return e;
}

Expr MatrixExpression::scale(Rational c, Expr a) {
  auto e = std::make_shared<MatrixExpression>();
  e->kind_ = Kind::Scale;
  e->factor_ = std::move(c);
  e->children_ = {std::move(a)};
  return e;
}

Expr MatrixExpression::power(const Expr& a, std::size_t n) {
  if (n == 0) throw ValidationError("expression power must be >= 1");
  Expr r = a;
  for (std::size_t i = 1; i < n; ++i) r = product(r, a);
  return r;
}

GroupRingMatrix evaluate(const Expr& e) {
  switch (e->kind()) {
    case MatrixExpression::Kind::Leaf:
      return e->matrix();
    case MatrixExpression::Kind::Sum:
      return evaluate(e->children()[0]) + evaluate(e->children()[1]);
    case MatrixExpression::Kind::Product:
      return evaluate(e->children()[0]) * evaluate(e->children()[1]);
    case MatrixExpression::Kind::Scale:
      return evaluate(e->children()[0]) * e->factor();
  }
  throw InvariantViolation("unknown expression node");
}

QMatrix evaluate_pushed(const Expr& e, const TowerLevel& level) {
  switch (e->kind()) {
    case MatrixExpression::Kind::Leaf:
      return e->matrix().push(level);
    case MatrixExpression::Kind::Sum:
      return evaluate_pushed(e->children()[0], level) + evaluate_pushed(e->children()[1], level);
    case MatrixExpression::Kind::Product: {
      const QMatrix a = evaluate_pushed(e->children()[0], level);
      const QMatrix b = evaluate_pushed(e->children()[1], level);
      if (a.cols() != b.rows()) throw ValidationError("shape mismatch in expression product");
      return a * b;
    }
    case MatrixExpression::Kind::Scale:
      return evaluate_pushed(e->children()[0], level) * e->factor();
  }
  throw InvariantViolation("unknown expression node");
}

Rational vn_trace_expression(const Expr& e) { return evaluate(e).vn_trace(); }

Rational normalized_pushed_trace(const Expr& e, const TowerLevel& level) {
  Rational tr;
  if (e->kind() == MatrixExpression::Kind::Product) {
    const QMatrix a = evaluate_pushed(e->children()[0], level);
    const QMatrix b = evaluate_pushed(e->children()[1], level);
    if (a.cols() != b.rows() || a.rows() != b.cols()) throw ValidationError("shape mismatch in expression product");
    tr = trace_of_product(a, b);
  } else {
    tr = evaluate_pushed(e, level).trace();
  }
  return tr / Rational(level.order());
}

}  // namespace l2approx
