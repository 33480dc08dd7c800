#include "l2approx/amenable.hpp"

#include <algorithm>
#include <cmath>

#include "l2approx/errors.hpp"
#include "l2approx/quotient.hpp"
#include "parallel.hpp"

namespace l2approx {

namespace {

std::set<CoverVertex> vertex_set(const EquivariantComplex& e, const Region& region) {
  std::set<CoverVertex> out;
  for (const auto& s : region) {
    for (const auto& v : e.vertices(s)) out.insert(v);
  }
  return out;
}

void require_nested(const std::vector<Region>& seq) {
  if (seq.empty()) throw ValidationError("exhaustion is empty");
  for (std::size_t k = 1; k < seq.size(); ++k) {
    if (!std::includes(seq[k].begin(), seq[k].end(), seq[k - 1].begin(), seq[k - 1].end())) {
      throw ValidationError("exhaustion is not nested at level " + std::to_string(k + 1));
    }
  }
}

// Every simplex of the cover containing one of the given vertices.
Region stars_of(const EquivariantComplex& e, const std::set<CoverVertex>& verts) {
  Region out;
  std::vector<CoverSimplex> stack;
  for (const auto& v : verts) stack.push_back(CoverSimplex{0, v.orbit, v.shift});
  while (!stack.empty()) {
    CoverSimplex s = std::move(stack.back());
    stack.pop_back();
    if (out.contains(s)) continue;
    for (auto& c : e.cofaces(s)) stack.push_back(std::move(c));
    out.insert(std::move(s));
  }
  return out;
}

Region without(const Region& a, const Region& b) {
  Region out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

Region boundary_region(const Materialized& m, const ManifoldReport& report) {
  Region out;
  for (const auto& s : report.boundary_simplices) out.insert(m.cover.at(s));
  return out;
}

QMatrix kernel_basis_pairing(const QMatrix& basis, const QMatrix& f) {
  return basis.transpose() * (f * basis);
}

}  // namespace

Region u_r(const EquivariantComplex& e, const Region& z, std::size_t r) {
  Region seeds;
  if (r == 0) return seeds;
  const GroupPtr& group = e.group();
  const std::vector<GroupElement> ball = group->ball(r - 1);
  std::set<std::pair<long, std::size_t>> done;
  std::set<std::tuple<long, std::size_t, GroupElement>> near;
  for (const auto& v : vertex_set(e, z)) {
    for (long p = 0; p <= e.dim(); ++p) {
      for (std::size_t i = 0; i < e.orbit_count(p); ++i) {
        for (const auto& w : e.lift(p, i)) {
          if (w.orbit != v.orbit) continue;
          // gamma_1 * w = v
          near.emplace(p, i, group->multiply(v.shift, group->inverse(w.shift)));
        }
      }
    }
  }
  for (const auto& [p, i, g1] : near) {
    for (const auto& b : ball) seeds.insert(CoverSimplex{p, i, group->multiply(g1, b)});
  }
  return e.close(seeds);
}

AmenabilityReport is_amenable_exhaustion(const EquivariantComplex& e, const std::vector<Region>& seq,
                                         const std::vector<std::size_t>& radii, const Rational& tolerance) {
  require_nested(seq);
  AmenabilityReport report;
  report.ok = true;
  for (std::size_t r : radii) {
    RatioSeries series;
    series.radius = r;
    for (const auto& x : seq) {
      if (x.empty()) throw ValidationError("exhaustion contains an empty level");
      series.ratios.push_back(Rational(u_r(e, x, r).size()) / Rational(x.size()));
    }
    series.ok = abs(series.ratios.back() - 1) <= tolerance;
    report.ok = report.ok && series.ok;
    report.series.push_back(std::move(series));
  }
  return report;
}

BalanceReport is_balanced(const EquivariantComplex& e, const std::vector<Region>& seq, const Rational& tolerance) {
  BalanceReport report;
  report.target = Rational(1) / Rational(e.size());
  report.ok = !seq.empty();
  for (const auto& x : seq) {
    std::vector<Rational> row;
    for (long p = 0; p <= e.dim(); ++p) {
      for (std::size_t i = 0; i < e.orbit_count(p); ++i) {
        const auto n = static_cast<std::size_t>(
            std::count_if(x.begin(), x.end(), [&](const CoverSimplex& s) { return s.dim == p && s.orbit == i; }));
        row.push_back(x.empty() ? Rational(0) : Rational(n) / Rational(x.size()));
      }
    }
    report.occupancy.push_back(std::move(row));
  }
  if (report.ok) {
    for (const auto& v : report.occupancy.back()) report.ok = report.ok && abs(v - report.target) <= tolerance;
  }
  return report;
}

std::vector<std::vector<GroupElement>> box_sets(const Group& group, std::size_t k_max) {
  std::vector<std::vector<GroupElement>> out;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (group.is_finite()) {
      out.push_back(group.elements());
      continue;
    }
    std::vector<GroupElement> box;
    const auto kk = static_cast<std::int64_t>(k);
    std::vector<std::int64_t> cur(group.rank(), -kk);
    while (true) {
      box.emplace_back(cur);
      std::size_t i = cur.size();
      while (i > 0 && cur[i - 1] == kk) cur[--i] = -kk;
      if (i == 0) break;
      ++cur[i - 1];
    }
    out.push_back(std::move(box));
  }
  return out;
}

std::vector<Region> folner_exhaustion(const EquivariantComplex& e, const std::vector<std::vector<GroupElement>>& sets) {
  if (sets.empty()) throw ValidationError("Folner sequence is empty");
  std::vector<Region> out;
  std::set<GroupElement> prev;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const std::set<GroupElement> cur(sets[k].begin(), sets[k].end());
    if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) {
      throw ValidationError("Folner sets are not nested at level " + std::to_string(k + 1));
    }
    Region seeds;
    for (const auto& g : cur) {
      e.group()->require(g);
      for (long p = 0; p <= e.dim(); ++p) {
        for (std::size_t i = 0; i < e.orbit_count(p); ++i) seeds.insert(CoverSimplex{p, i, g});
      }
    }
    out.push_back(e.close(seeds));
    prev = cur;
  }
  return out;
}

Coordinates coordinates(const Region& region, long p) {
  Coordinates out;
  for (const auto& s : region) {
    if (s.dim == p) out.emplace_back(s.orbit, s.shift);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TruncatedOperator truncate(const GroupRingMatrix& a, const Coordinates& rows, const Coordinates& cols, std::size_t k) {
  const Group& group = *a.group();
  TruncatedOperator t{k, QMatrix(rows.size(), cols.size()), rows, cols};
  std::map<std::pair<std::size_t, GroupElement>, std::size_t> col_index;
  for (std::size_t j = 0; j < cols.size(); ++j) col_index[cols[j]] = j;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& [s, x] = rows[r];
    for (const auto& [ij, entry] : a.entries()) {
      if (ij.first != s) continue;
      for (const auto& [g, c] : entry.terms()) {
        const auto it = col_index.find({ij.second, group.multiply(x, g)});
        if (it != col_index.end()) t.matrix.add(r, it->second, c);
      }
    }
  }
  return t;
}

RestrictionReport restriction_check(const EquivariantComplex& e, const Region& u, const Region& v, long p) {
  RestrictionReport report;
  report.degree = p;
  const long n = e.dim();
  const Materialized m = e.materialize(u);
  SimplicialComplex declared;
  for (const auto& s : v) {
    const auto it = m.simplex.find(s);
    if (it == m.simplex.end()) {
      report.manifold_ok = false;
      report.failures.push_back("V is not contained in U");
      return report;
    }
    declared.insert(it->second);
  }
  const ManifoldReport manifold = validate_homology_manifold(m.complex, declared);
  if (!manifold.ok) {
    report.manifold_ok = false;
    for (const auto& f : manifold.failures) report.failures.push_back(f);
  }

  const Region interior = without(u, v);
  for (const auto& s : interior) {
    std::vector<CoverSimplex> stack{s};
    std::set<CoverSimplex> seen;
    while (!stack.empty()) {
      const CoverSimplex c = stack.back();
      stack.pop_back();
      if (!seen.insert(c).second) continue;
      if (c.dim == n && !u.contains(c)) {
        report.structure_ok = false;
        report.failures.push_back("top simplex (orbit " + std::to_string(c.orbit) + ", shift " + to_string(c.shift) +
                                  ") outside U has a face in U \\ V");
      }
      for (auto& up : e.cofaces(c)) stack.push_back(std::move(up));
    }
  }

  const Coordinates rows = coordinates(interior, n - p);
  const Coordinates cols = coordinates(interior, p);
  report.rhs = truncate(e.cap_operator(p), rows, cols).matrix;

  std::map<std::pair<std::size_t, GroupElement>, std::size_t> row_index, col_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;
  for (std::size_t j = 0; j < cols.size(); ++j) col_index[cols[j]] = j;
  report.lhs = QMatrix(rows.size(), cols.size());
  for (const auto& s : u) {
    if (s.dim != n) continue;
    const VertexTuple t = e.vertices(s);
    const auto front = e.identify(VertexTuple(t.begin(), t.begin() + (n - p + 1)));
    const auto back = e.identify(VertexTuple(t.begin() + (n - p), t.end()));
    if (!front || !back) throw InvariantViolation("front or back face of a top simplex is missing");
    const auto r = row_index.find({front->orbit, front->shift});
    const auto c = col_index.find({back->orbit, back->shift});
    if (r == row_index.end() || c == col_index.end()) continue;
    report.lhs.add(r->second, c->second, e.fundamental_class()[s.orbit] * front->sign * back->sign);
  }
  report.equal = report.lhs == report.rhs;
  if (!report.equal) report.failures.push_back("restricted cap operator differs from the truncation");
  return report;
}

CoverThickening thicken_in_cover(const EquivariantComplex& base, const EquivariantSubdivision& sd,
                                 const Region& x_prime) {
  CoverThickening out;
  const std::set<CoverVertex> xv = vertex_set(base, x_prime);
  if (xv.empty()) return out;
  const Region nearby = base.close(stars_of(base, xv));
  std::map<CoverSimplex, bool> meets_cache;
  auto meets_x = [&](const CoverSimplex& carrier) {
    auto [it, inserted] = meets_cache.try_emplace(carrier, false);
    if (inserted) {
      const VertexTuple t = base.vertices(carrier);
      it->second = std::any_of(t.begin(), t.end(), [&](const CoverVertex& w) { return xv.contains(w); });
    }
    return it->second;
  };
  for (const auto& s : sd.subdivide(nearby)) {
    const VertexTuple t = sd.complex.vertices(s);
    if (std::all_of(t.begin(), t.end(), [&](const CoverVertex& w) { return meets_x(sd.carrier_of(w)); })) {
      out.u.insert(s);
    }
  }
  const Materialized m = sd.complex.materialize(out.u);
  out.report = classify_homology_manifold(m.complex);
  out.v = boundary_region(m, out.report);
  return out;
}

AmenableRun run_amenable(const EquivariantComplex& e, const std::vector<Region>& exhaustion,
                         const AmenableOptions& options) {
  require_nested(exhaustion);
  const FreeComplex chains = e.chain_complex();
  const long n = e.dim();
  const bool signature = n % 4 == 0 && !e.fundamental_class().empty() && e.fundamental_cycle_report().ok();
  std::optional<GroupRingMatrix> cap;
  if (signature) {
    const long mid = n / 2;
    cap = e.cap_operator(mid);
    if ((mid * (mid + 1) / 2) % 2 != 0) *cap = -*cap;
  }
  const Rational total(e.size());

  AmenableRun run;
  run.rows.resize(exhaustion.size());
  detail::parallel_for(exhaustion.size(), options.jobs, [&](std::size_t k) {
    const Region& x = exhaustion[k];
    AmenableRow& row = run.rows[k];
    row.k = k + 1;
    row.size = x.size();
    if (x.empty()) {
      row.manifold_ok = false;
      row.note = "empty level";
      return;
    }
    const Rational scale = total / Rational(x.size());
    Region y;
    try {
      const Materialized m = e.materialize(x);
      const ManifoldReport report = classify_homology_manifold(m.complex);
      row.manifold_ok = report.ok;
      if (!report.ok) row.note = report.failures.front();
      y = boundary_region(m, report);
    } catch (const ValidationError& err) {
      row.manifold_ok = false;
      row.note = err.what();
    }
    for (long p = 0; p <= n; ++p) {
      const QMatrix down = truncate(chains.c(p), coordinates(x, p - 1), coordinates(x, p)).matrix;
      const QMatrix up = truncate(chains.c(p + 1), coordinates(x, p), coordinates(x, p + 1)).matrix;
      const QMatrix lap = laplacian(down, up);
      row.kernel_dims.push_back(lap.rows() - rank(lap));
      row.betti.push_back(Rational(row.kernel_dims.back()) * scale);
    }
    if (cap && row.manifold_ok) {
      const long mid = n / 2;
      const Region rel = without(x, y);
      const QMatrix down = truncate(chains.c(mid), coordinates(rel, mid - 1), coordinates(rel, mid)).matrix;
      const QMatrix up = truncate(chains.c(mid + 1), coordinates(rel, mid), coordinates(rel, mid + 1)).matrix;
      const QMatrix basis = nullspace(laplacian(down, up));
      const QMatrix f = truncate(*cap, coordinates(rel, mid), coordinates(rel, mid)).matrix;
      const QMatrix pairing = kernel_basis_pairing(basis, f);
      if (!pairing.is_symmetric()) {
        throw InvariantViolation("truncated harmonic pairing is not symmetric at level " + std::to_string(k + 1));
      }
      row.inertia = inertia(pairing);
      row.sign = Rational(static_cast<long>(row.inertia->signature())) * scale;
    }
  });

  if (options.oracle && e.group()->kind() == GroupKind::FreeAbelian) {
    for (long p = 0; p <= n; ++p) run.betti_oracle.push_back(l2_betti_torus(chains, p, options.torus));
    if (signature && !e.has_boundary()) run.sign_oracle = l2_signature_torus(e.symmetric_complex(), options.torus);
  }
  return run;
}

OperatorRun run_amenable_operator(const GroupRingMatrix& a, const std::vector<std::vector<GroupElement>>& sets,
                                  const AmenableOptions& options) {
  if (sets.empty()) throw ValidationError("exhaustion is empty");
  if (!a.is_square() || !a.is_self_adjoint()) throw ValidationError("operator mode needs a self-adjoint matrix");
  OperatorRun run;
  run.rows.resize(sets.size());
  detail::parallel_for(sets.size(), options.jobs, [&](std::size_t k) {
    std::vector<GroupElement> box = sets[k];
    std::sort(box.begin(), box.end());
    box.erase(std::unique(box.begin(), box.end()), box.end());
    if (box.empty()) throw ValidationError("exhaustion level " + std::to_string(k + 1) + " is empty");
    Coordinates coords;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (const auto& g : box) coords.emplace_back(i, g);
    }
    const TruncatedOperator t = truncate(a, coords, coords, k + 1);
    OperatorRow& row = run.rows[k];
    row.k = k + 1;
    row.size = box.size();
    row.inertia = inertia(t.matrix);
    row.sign = Rational(static_cast<long>(row.inertia.signature())) / Rational(box.size());
    row.betti = Rational(row.inertia.zero) / Rational(box.size());
  });
  if (options.oracle && a.group()->kind() == GroupKind::FreeAbelian) {
    run.oracle = l2_signature_torus(from_form(AlgebraicForm{a, 1}), options.torus);
  }
  return run;
}

}  // namespace l2approx
