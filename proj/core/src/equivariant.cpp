#include "l2approx/equivariant.hpp"

#include <algorithm>
#include <numeric>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

int permutation_sign(const std::vector<std::size_t>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) sign = -sign;
    }
  }
  return sign;
}

std::vector<std::size_t> orbit_key(const VertexTuple& t) {
  std::vector<std::size_t> key;
  for (const auto& v : t) key.push_back(v.orbit);
  std::sort(key.begin(), key.end());
  return key;
}

std::string describe(long p, std::size_t orbit) {
  return "simplex orbit " + std::to_string(orbit) + " of dimension " + std::to_string(p);
}

}  // namespace

EquivariantComplex::EquivariantComplex(GroupPtr group, std::size_t vertex_orbits,
                                       std::vector<std::vector<VertexTuple>> simplices,
                                       std::vector<int> fundamental_class,
                                       std::vector<std::pair<long, std::size_t>> boundary)
    : group_(std::move(group)), fundamental_(std::move(fundamental_class)) {
  if (!group_) throw ValidationError("equivariant complex without a group");
  if (vertex_orbits == 0) throw ValidationError("equivariant complex needs at least one vertex orbit");
  lifts_.emplace_back();
  for (std::size_t v = 0; v < vertex_orbits; ++v) lifts_[0].push_back({CoverVertex{v, group_->identity()}});
  while (!simplices.empty() && simplices.back().empty()) simplices.pop_back();
  for (auto& level : simplices) lifts_.push_back(std::move(level));

  for (std::size_t p = 0; p < lifts_.size(); ++p) {
    for (std::size_t i = 0; i < lifts_[p].size(); ++i) {
      const VertexTuple& t = lifts_[p][i];
      if (t.size() != p + 1) {
        throw ValidationError(describe(static_cast<long>(p), i) + " needs " + std::to_string(p + 1) + " vertices");
      }
      for (const auto& v : t) {
        if (v.orbit >= vertex_orbits) throw ValidationError(describe(static_cast<long>(p), i) + ": bad vertex orbit");
        group_->require(v.shift);
      }
      by_orbits_[orbit_key(t)].emplace_back(static_cast<long>(p), i);
    }
  }
  for (std::size_t p = 0; p < lifts_.size(); ++p) {
    for (std::size_t i = 0; i < lifts_[p].size(); ++i) {
      const auto self = identify(lifts_[p][i]);
      if (!self || self->orbit != i) {
        throw ValidationError(describe(static_cast<long>(p), i) + " duplicates another orbit");
      }
    }
  }

  face_table_.resize(lifts_.size());
  coface_table_.resize(lifts_.size());
  for (std::size_t p = 0; p < lifts_.size(); ++p) coface_table_[p].resize(lifts_[p].size());
  for (std::size_t p = 1; p < lifts_.size(); ++p) {
    face_table_[p].resize(lifts_[p].size());
    for (std::size_t i = 0; i < lifts_[p].size(); ++i) {
      for (std::size_t j = 0; j <= p; ++j) {
        VertexTuple f = lifts_[p][i];
        f.erase(f.begin() + static_cast<long>(j));
        const auto match = identify(f);
        if (!match) {
          throw ValidationError("face " + std::to_string(j) + " of " + describe(static_cast<long>(p), i) +
                                " is not a simplex of the complex");
        }
        if (match->sign != 1) ordered_ = false;
        face_table_[p][i].push_back(*match);
        OrbitMatch back = *match;
        back.orbit = i;
        back.sign = static_cast<int>(j);
        coface_table_[p - 1][match->orbit].emplace_back(i, back);
      }
    }
  }

  if (!fundamental_.empty()) {
    if (fundamental_.size() != lifts_.back().size()) {
      throw ValidationError("fundamental class needs one sign per top-dimensional orbit");
    }
    for (int s : fundamental_) {
      if (s != 1 && s != -1) throw ValidationError("fundamental class signs must be +1 or -1");
    }
  }

  boundary_.resize(lifts_.size());
  std::vector<std::pair<long, std::size_t>> stack = std::move(boundary);
  while (!stack.empty()) {
    const auto [p, i] = stack.back();
    stack.pop_back();
    if (p < 0 || p > dim() || i >= orbit_count(p)) throw ValidationError("boundary entry out of range");
    if (!boundary_[static_cast<std::size_t>(p)].insert(i).second) continue;
    if (p > 0) {
      for (const auto& f : face_table_[static_cast<std::size_t>(p)][i]) stack.emplace_back(p - 1, f.orbit);
    }
  }
}

std::size_t EquivariantComplex::orbit_count(long p) const {
  if (p < 0 || p > dim()) return 0;
  return lifts_[static_cast<std::size_t>(p)].size();
}

std::size_t EquivariantComplex::size() const {
  std::size_t n = 0;
  for (const auto& l : lifts_) n += l.size();
  return n;
}

bool EquivariantComplex::in_boundary(long p, std::size_t orbit) const {
  if (p < 0 || p > dim()) return false;
  return boundary_[static_cast<std::size_t>(p)].contains(orbit);
}

bool EquivariantComplex::has_boundary() const {
  return std::any_of(boundary_.begin(), boundary_.end(), [](const auto& s) { return !s.empty(); });
}

std::optional<OrbitMatch> EquivariantComplex::identify(const VertexTuple& tuple) const {
  const auto it = by_orbits_.find(orbit_key(tuple));
  if (it == by_orbits_.end()) return std::nullopt;
  for (const auto& [p, i] : it->second) {
    if (static_cast<std::size_t>(p) + 1 != tuple.size()) continue;
    const VertexTuple& lift = lifts_[static_cast<std::size_t>(p)][i];
    std::vector<std::size_t> perm(tuple.size());
    std::iota(perm.begin(), perm.end(), 0);
    // tuple[k] = shift * lift[perm[k]]; the identity permutation is tried first.
    do {
      bool orbits_match = true;
      for (std::size_t k = 0; k < tuple.size() && orbits_match; ++k) {
        orbits_match = tuple[k].orbit == lift[perm[k]].orbit;
      }
      if (!orbits_match) continue;
      const GroupElement shift = group_->multiply(tuple[0].shift, group_->inverse(lift[perm[0]].shift));
      bool ok = true;
      for (std::size_t k = 1; k < tuple.size() && ok; ++k) {
        ok = group_->multiply(shift, lift[perm[k]].shift) == tuple[k].shift;
      }
      if (ok) return OrbitMatch{i, shift, permutation_sign(perm)};
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::nullopt;
}

VertexTuple EquivariantComplex::vertices(const CoverSimplex& s) const {
  VertexTuple t = lift(s.dim, s.orbit);
  for (auto& v : t) v.shift = group_->multiply(s.shift, v.shift);
  return t;
}

const OrbitMatch& EquivariantComplex::face_of_lift(long p, std::size_t orbit, std::size_t i) const {
  return face_table_[static_cast<std::size_t>(p)][orbit][i];
}

std::vector<std::pair<CoverSimplex, int>> EquivariantComplex::faces(const CoverSimplex& s) const {
  std::vector<std::pair<CoverSimplex, int>> out;
  if (s.dim == 0) return out;
  for (const auto& f : face_table_[static_cast<std::size_t>(s.dim)][s.orbit]) {
    out.emplace_back(CoverSimplex{s.dim - 1, f.orbit, group_->multiply(s.shift, f.shift)}, f.sign);
  }
  return out;
}

std::vector<CoverSimplex> EquivariantComplex::cofaces(const CoverSimplex& s) const {
  std::vector<CoverSimplex> out;
  if (s.dim >= dim()) return out;
  for (const auto& [sigma, m] : coface_table_[static_cast<std::size_t>(s.dim)][s.orbit]) {
    out.push_back(CoverSimplex{s.dim + 1, sigma, group_->multiply(s.shift, group_->inverse(m.shift))});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Region EquivariantComplex::close(const Region& region) const {
  Region out;
  std::vector<CoverSimplex> stack(region.begin(), region.end());
  while (!stack.empty()) {
    CoverSimplex s = std::move(stack.back());
    stack.pop_back();
    if (out.contains(s)) continue;
    for (auto& [f, sign] : faces(s)) stack.push_back(f);
    out.insert(std::move(s));
  }
  return out;
}

Materialized EquivariantComplex::materialize(const Region& region) const {
  Materialized m;
  std::set<CoverVertex> verts;
  for (const auto& s : region) {
    for (const auto& v : vertices(s)) verts.insert(v);
  }
  m.vertex.assign(verts.begin(), verts.end());
  std::map<CoverVertex, std::size_t> id;
  for (std::size_t i = 0; i < m.vertex.size(); ++i) id[m.vertex[i]] = i;
  for (const auto& s : region) {
    std::vector<std::size_t> ids;
    for (const auto& v : vertices(s)) ids.push_back(id.at(v));
    Simplex simplex = make_simplex(ids);
    if (simplex.size() != static_cast<std::size_t>(s.dim) + 1) {
      throw ValidationError("region is not simplicial: a simplex has repeated vertices");
    }
    if (!m.cover.emplace(simplex, s).second) {
      throw ValidationError("region is not simplicial: two simplices share a vertex set");
    }
    m.simplex.emplace(s, simplex);
    m.complex.insert(simplex);
  }
  if (m.complex.size() != region.size()) throw ValidationError("region is not closed under faces");
  return m;
}

FreeComplex EquivariantComplex::chain_complex() const {
  std::vector<std::size_t> ranks;
  for (long p = 0; p <= dim(); ++p) ranks.push_back(orbit_count(p));
  std::vector<GroupRingMatrix> d;
  for (long p = 1; p <= dim(); ++p) {
    GroupRingMatrix c(group_, orbit_count(p - 1), orbit_count(p));
    for (std::size_t i = 0; i < orbit_count(p); ++i) {
      const auto& fs = face_table_[static_cast<std::size_t>(p)][i];
      for (std::size_t j = 0; j < fs.size(); ++j) {
        c.add(fs[j].orbit, i, group_->inverse(fs[j].shift), (j % 2 == 0 ? 1 : -1) * fs[j].sign);
      }
    }
    d.push_back(std::move(c));
  }
  return FreeComplex(group_, std::move(ranks), std::move(d));
}

ValidationReport EquivariantComplex::fundamental_cycle_report() const {
  ValidationReport report;
  const long n = dim();
  if (fundamental_.empty()) {
    report.violations.push_back({"fundamental_class", n, "no fundamental class given"});
    return report;
  }
  if (n == 0) return report;
  for (std::size_t t = 0; t < orbit_count(n - 1); ++t) {
    if (in_boundary(n - 1, t)) continue;
    long coefficient = 0;
    for (const auto& [sigma, m] : coface_table_[static_cast<std::size_t>(n - 1)][t]) {
      const auto& f = face_table_[static_cast<std::size_t>(n)][sigma][static_cast<std::size_t>(m.sign)];
      coefficient += fundamental_[sigma] * (m.sign % 2 == 0 ? 1 : -1) * f.sign;
    }
    if (coefficient != 0) {
      report.violations.push_back({"fundamental_class", n - 1,
                                   "boundary of the fundamental class is nonzero on orbit " + std::to_string(t)});
    }
  }
  return report;
}

GroupRingMatrix EquivariantComplex::cap_operator(long p) const {
  const long n = dim();
  GroupRingMatrix g(group_, orbit_count(n - p), orbit_count(p));
  if (p < 0 || p > n) return g;
  if (!ordered_) throw ValidationError("cap product needs face identifications that respect the local ordering");
  const ValidationReport cycle = fundamental_cycle_report();
  if (!cycle.ok()) throw ValidationError("cap product needs a fundamental cycle: " + cycle.violations.front().message);
  for (std::size_t s = 0; s < orbit_count(n); ++s) {
    const VertexTuple& t = lift(n, s);
    const VertexTuple front(t.begin(), t.begin() + (n - p + 1));
    const VertexTuple back(t.begin() + (n - p), t.end());
    const auto f = identify(front);
    const auto b = identify(back);
    if (!f || !b) throw InvariantViolation("front or back face of a top simplex is missing");
    if (in_boundary(n - p, f->orbit)) continue;
    g.add(f->orbit, b->orbit, group_->multiply(group_->inverse(f->shift), b->shift),
          fundamental_[s] * f->sign * b->sign);
  }
  return g;
}

SymmetricComplex EquivariantComplex::symmetric_complex() const {
  if (has_boundary()) throw ValidationError("symmetric complex needs an empty boundary");
  const long n = dim();
  std::vector<GroupRingMatrix> f;
  for (long q = 0; q <= n; ++q) {
    GroupRingMatrix cap = cap_operator(n - q);
    if ((q * (q + 1) / 2) % 2 != 0) cap = -cap;
    f.push_back(std::move(cap));
  }
  return SymmetricComplex(chain_complex(), std::move(f));
}

CoverSimplex EquivariantSubdivision::carrier_of(const CoverVertex& v) const {
  const auto& [p, orbit] = vertex_carrier.at(v.orbit);
  return CoverSimplex{p, orbit, v.shift};
}

Region EquivariantSubdivision::subdivide(const Region& region) const {
  Region out;
  for (const auto& s : region) {
    for (std::size_t q = 0; q < carrier.size(); ++q) {
      for (std::size_t i = 0; i < carrier[q].size(); ++i) {
        if (carrier[q][i].first == s.dim && carrier[q][i].second == s.orbit) {
          out.insert(CoverSimplex{static_cast<long>(q), i, s.shift});
        }
      }
    }
  }
  return out;
}

EquivariantSubdivision barycentric(const EquivariantComplex& e) {
  const GroupPtr& group = e.group();
  std::map<std::pair<long, std::size_t>, std::size_t> vertex_id;
  std::vector<std::pair<long, std::size_t>> vertex_carrier;
  for (long p = 0; p <= e.dim(); ++p) {
    for (std::size_t i = 0; i < e.orbit_count(p); ++i) {
      vertex_id[{p, i}] = vertex_carrier.size();
      vertex_carrier.emplace_back(p, i);
    }
  }
  const long n = e.dim();
  std::vector<std::vector<VertexTuple>> simplices(static_cast<std::size_t>(std::max<long>(n, 0)));
  std::vector<std::vector<std::pair<long, std::size_t>>> carrier(static_cast<std::size_t>(n + 1));
  std::vector<int> fundamental;
  std::vector<std::pair<long, std::size_t>> boundary;
  const bool oriented = !e.fundamental_class().empty();

  for (long p = 0; p <= n; ++p) {
    for (std::size_t i = 0; i < e.orbit_count(p); ++i) {
      const VertexTuple& t = e.lift(p, i);
      const std::size_t full = (std::size_t{1} << (p + 1)) - 1;
      std::map<std::size_t, CoverVertex> bary;
      for (std::size_t mask = 1; mask <= full; ++mask) {
        VertexTuple sub;
        for (std::size_t k = 0; k <= static_cast<std::size_t>(p); ++k) {
          if (mask & (std::size_t{1} << k)) sub.push_back(t[k]);
        }
        const auto m = e.identify(sub);
        if (!m) throw InvariantViolation("face of a lift is missing");
        bary[mask] = CoverVertex{vertex_id.at({static_cast<long>(sub.size()) - 1, m->orbit}), m->shift};
      }
      std::set<CoverVertex> distinct;
      for (const auto& [mask, v] : bary) distinct.insert(v);
      if (distinct.size() != bary.size()) {
        throw ValidationError("barycentric subdivision needs distinct faces in every simplex lift");
      }
      // Chains of masks ending at the full mask, built from the top down.
      std::vector<std::vector<std::size_t>> chains{{full}};
      for (std::size_t idx = 0; idx < chains.size(); ++idx) {
        const std::vector<std::size_t> chain = chains[idx];
        const std::size_t low = chain.front();
        for (std::size_t sub = (low - 1) & low; sub > 0; sub = (sub - 1) & low) {
          std::vector<std::size_t> next = chain;
          next.insert(next.begin(), sub);
          chains.push_back(std::move(next));
        }
      }
      std::sort(chains.begin(), chains.end());
      for (const auto& chain : chains) {
        VertexTuple tuple;
        for (std::size_t mask : chain) tuple.push_back(bary.at(mask));
        const std::size_t q = chain.size() - 1;
        if (q == 0) continue;
        carrier[q].emplace_back(p, i);
        if (q == static_cast<std::size_t>(n) && oriented) {
          std::vector<std::size_t> perm;
          std::size_t seen = 0;
          for (std::size_t mask : chain) {
            const std::size_t added = mask & ~seen;
            perm.push_back(static_cast<std::size_t>(__builtin_ctzll(added)));
            seen = mask;
          }
          fundamental.push_back(e.fundamental_class()[i] * permutation_sign(perm));
        }
        if (e.in_boundary(p, i)) boundary.emplace_back(static_cast<long>(q), simplices[q - 1].size());
        simplices[q - 1].push_back(std::move(tuple));
      }
    }
  }
  for (std::size_t v = 0; v < vertex_carrier.size(); ++v) {
    carrier[0].push_back(vertex_carrier[v]);
    if (e.in_boundary(vertex_carrier[v].first, vertex_carrier[v].second)) boundary.emplace_back(0, v);
  }
  EquivariantComplex complex(group, vertex_carrier.size(), std::move(simplices), std::move(fundamental),
                             std::move(boundary));
  return EquivariantSubdivision{std::move(complex), std::move(vertex_carrier), std::move(carrier)};
}

}  // namespace l2approx
