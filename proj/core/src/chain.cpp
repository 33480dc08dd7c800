#include "l2approx/chain.hpp"

#include <algorithm>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

void require_shape(const GroupRingMatrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ValidationError(what + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                          ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

FreeComplex::FreeComplex(GroupPtr group, std::vector<std::size_t> ranks, std::vector<GroupRingMatrix> differentials)
    : group_(std::move(group)), ranks_(std::move(ranks)), differentials_(std::move(differentials)) {
  if (!group_) throw ValidationError("complex without a group");
  if (ranks_.empty()) ranks_.push_back(0);
  if (differentials_.size() != ranks_.size() - 1) {
    throw ValidationError("complex of dimension " + std::to_string(ranks_.size() - 1) + " needs " +
                          std::to_string(ranks_.size() - 1) + " differentials");
  }
  for (std::size_t p = 1; p < ranks_.size(); ++p) {
    require_shape(differentials_[p - 1], ranks_[p - 1], ranks_[p], "differential c_" + std::to_string(p));
    if (!(*differentials_[p - 1].group() == *group_)) throw ValidationError("differential over a different group");
  }
}

FreeComplex FreeComplex::zero(GroupPtr group, std::vector<std::size_t> ranks) {
  if (ranks.empty()) ranks.push_back(0);
  std::vector<GroupRingMatrix> d;
  for (std::size_t p = 1; p < ranks.size(); ++p) d.emplace_back(group, ranks[p - 1], ranks[p]);
  return FreeComplex(group, std::move(ranks), std::move(d));
}

std::size_t FreeComplex::rank(long p) const {
  if (p < 0 || static_cast<std::size_t>(p) >= ranks_.size()) return 0;
  return ranks_[static_cast<std::size_t>(p)];
}

GroupRingMatrix FreeComplex::c(long p) const {
  if (p >= 1 && static_cast<std::size_t>(p) < ranks_.size()) return differentials_[static_cast<std::size_t>(p) - 1];
  return GroupRingMatrix(group_, rank(p - 1), rank(p));
}

bool operator==(const FreeComplex& a, const FreeComplex& b) {
  const bool same_group = a.group_ == b.group_ || (a.group_ && b.group_ && *a.group_ == *b.group_);
  return same_group && a.ranks_ == b.ranks_ && a.differentials_ == b.differentials_;
}

GroupRingMatrix ChainMap::f(long p) const {
  if (p >= 0 && static_cast<std::size_t>(p) < components.size()) return components[static_cast<std::size_t>(p)];
  return GroupRingMatrix(target.group(), target.rank(p), source.rank(p));
}

ValidationReport validate(const FreeComplex& c) {
  ValidationReport report;
  for (long p = 1; p < static_cast<long>(c.dim()); ++p) {
    if (!(c.c(p) * c.c(p + 1)).is_zero()) {
      report.violations.push_back({"boundary_squared", p, "c_" + std::to_string(p) + " c_" +
                                                              std::to_string(p + 1) + " != 0"});
    }
  }
  return report;
}

ValidationReport validate(const ChainMap& f) {
  ValidationReport report;
  const long top = static_cast<long>(std::max(f.source.dim(), f.target.dim()));
  for (long p = 0; p <= top; ++p) {
    const GroupRingMatrix fp = f.f(p);
    if (fp.rows() != f.target.rank(p) || fp.cols() != f.source.rank(p)) {
      report.violations.push_back({"shape", p, "component f_" + std::to_string(p) + " has the wrong shape"});
      return report;
    }
  }
  for (long p = 1; p <= top; ++p) {
    if (!(f.target.c(p) * f.f(p) == f.f(p - 1) * f.source.c(p))) {
      report.violations.push_back({"chain_map", p, "d f_" + std::to_string(p) + " != f_" +
                                                       std::to_string(p - 1) + " d"});
    }
  }
  return report;
}

FreeComplex dual(const FreeComplex& c) {
  const long n = static_cast<long>(c.dim());
  std::vector<std::size_t> ranks;
  std::vector<GroupRingMatrix> d;
  for (long p = 0; p <= n; ++p) ranks.push_back(c.rank(n - p));
  for (long p = 1; p <= n; ++p) d.push_back(c.c(n - p + 1).adjoint());
  return FreeComplex(c.group(), std::move(ranks), std::move(d));
}

FreeComplex cone(const ChainMap& f) {
  if (!validate(f).ok()) throw ValidationError("cone: map is not a chain map");
  const FreeComplex& src = f.source;
  const FreeComplex& dst = f.target;
  const long top = static_cast<long>(std::max(dst.dim(), src.dim() + 1));
  std::vector<std::size_t> ranks;
  for (long p = 0; p <= top; ++p) ranks.push_back(dst.rank(p) + src.rank(p - 1));
  std::vector<GroupRingMatrix> d;
  for (long p = 1; p <= top; ++p) {
    GroupRingMatrix m(dst.group(), ranks[static_cast<std::size_t>(p - 1)], ranks[static_cast<std::size_t>(p)]);
    m.place(0, 0, dst.c(p));
    m.place(0, dst.rank(p), f.f(p - 1));
    m.place(dst.rank(p - 1), dst.rank(p), -src.c(p - 1));
    d.push_back(std::move(m));
  }
  return FreeComplex(dst.group(), std::move(ranks), std::move(d));
}

FreeComplex suspension(const FreeComplex& c) {
  const long top = static_cast<long>(c.dim()) + 1;
  std::vector<std::size_t> ranks;
  for (long p = 0; p <= top; ++p) ranks.push_back(c.rank(p - 1));
  std::vector<GroupRingMatrix> d;
  for (long p = 1; p <= top; ++p) d.push_back(-c.c(p - 1));
  return FreeComplex(c.group(), std::move(ranks), std::move(d));
}

SymmetricComplex::SymmetricComplex(FreeComplex base, std::vector<GroupRingMatrix> duality)
    : base_(std::move(base)), duality_(std::move(duality)) {
  const long n = static_cast<long>(base_.dim());
  if (duality_.size() != static_cast<std::size_t>(n + 1)) {
    throw ValidationError("duality needs one component per degree 0.." + std::to_string(n));
  }
  for (long p = 0; p <= n; ++p) {
    require_shape(duality_[static_cast<std::size_t>(p)], base_.rank(p), base_.rank(n - p),
                  "duality component f_" + std::to_string(p));
  }
}

GroupRingMatrix SymmetricComplex::f(long p) const {
  if (p >= 0 && p <= static_cast<long>(dim())) return duality_[static_cast<std::size_t>(p)];
  return GroupRingMatrix(group(), base_.rank(p), base_.rank(static_cast<long>(dim()) - p));
}

ChainMap SymmetricComplex::duality_map() const { return ChainMap{dual(base_), base_, duality_}; }

SymmetricComplex from_form(const AlgebraicForm& form) {
  if (form.n == 0) throw ValidationError("form parameter n must be >= 1");
  if (!form.matrix.is_square()) throw ValidationError("form matrix is not square");
  if (!form.matrix.is_self_adjoint()) throw ValidationError("form matrix is not self-adjoint");
  const std::size_t top = 4 * form.n;
  const auto& group = form.matrix.group();
  std::vector<std::size_t> ranks(top + 1, 0);
  ranks[2 * form.n] = form.matrix.rows();
  FreeComplex base = FreeComplex::zero(group, ranks);
  std::vector<GroupRingMatrix> f;
  for (std::size_t p = 0; p <= top; ++p) f.emplace_back(group, ranks[p], ranks[top - p]);
  f[2 * form.n] = form.matrix;
  return SymmetricComplex(std::move(base), std::move(f));
}

ValidationReport validate(const SymmetricComplex& s) {
  ValidationReport report = validate(s.base());
  const ValidationReport chain = validate(s.duality_map());
  report.violations.insert(report.violations.end(), chain.violations.begin(), chain.violations.end());
  return report;
}

}  // namespace l2approx
