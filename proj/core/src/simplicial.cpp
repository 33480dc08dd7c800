#include "l2approx/simplicial.hpp"

#include <algorithm>

#include "l2approx/errors.hpp"
#include "l2approx/linalg.hpp"

namespace l2approx {

Simplex make_simplex(std::vector<std::size_t> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

std::vector<Simplex> faces(const Simplex& s, bool with_empty) {
  std::vector<Simplex> out;
  const std::size_t n = s.size();
  for (std::size_t mask = with_empty ? 0 : 1; mask < (std::size_t{1} << n); ++mask) {
    Simplex f;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) f.push_back(s[i]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

bool meets(const Simplex& a, const Simplex& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

SimplicialComplex::SimplicialComplex(const std::vector<Simplex>& generators) {
  for (const auto& s : generators) insert(s);
}

void SimplicialComplex::insert(Simplex s) {
  s = make_simplex(std::move(s));
  if (s.empty() || simplices_.contains(s)) return;
  for (auto& f : faces(s)) simplices_.insert(std::move(f));
}

long SimplicialComplex::dim() const {
  long d = -1;
  for (const auto& s : simplices_) d = std::max(d, static_cast<long>(s.size()) - 1);
  return d;
}

std::vector<Simplex> SimplicialComplex::simplices(long p) const {
  std::vector<Simplex> out;
  for (const auto& s : simplices_) {
    if (static_cast<long>(s.size()) == p + 1) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> SimplicialComplex::vertices() const {
  std::vector<std::size_t> out;
  for (const auto& s : simplices_) {
    if (s.size() == 1) out.push_back(s[0]);
  }
  return out;
}

std::vector<Simplex> SimplicialComplex::facets() const {
  std::set<Simplex> proper;
  for (const auto& s : simplices_) {
    for (std::size_t i = 0; i < s.size() && s.size() > 1; ++i) {
      Simplex f = s;
      f.erase(f.begin() + static_cast<long>(i));
      proper.insert(std::move(f));
    }
  }
  std::vector<Simplex> out;
  for (const auto& s : simplices_) {
    if (!proper.contains(s)) out.push_back(s);
  }
  return out;
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const {
  return std::includes(other.simplices_.begin(), other.simplices_.end(), simplices_.begin(), simplices_.end());
}

QMatrix SimplicialComplex::boundary(long p) const {
  const auto cols = simplices(p);
  const auto rows = simplices(p - 1);
  QMatrix d(rows.size(), cols.size());
  if (p < 1) return d;
  std::map<Simplex, std::size_t> row_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < cols[j].size(); ++i) {
      Simplex f = cols[j];
      f.erase(f.begin() + static_cast<long>(i));
      d.set(row_index.at(f), j, i % 2 == 0 ? 1 : -1);
    }
  }
  return d;
}

SimplicialComplex link(const SimplicialComplex& k, const Simplex& s) {
  SimplicialComplex out;
  for (const auto& t : k.simplices()) {
    if (meets(t, s)) continue;
    Simplex u = t;
    u.insert(u.end(), s.begin(), s.end());
    if (k.contains(make_simplex(u))) out.insert(t);
  }
  return out;
}

SimplicialComplex closed_star(const SimplicialComplex& k, const Simplex& s) {
  SimplicialComplex out;
  for (const auto& t : k.simplices()) {
    if (std::includes(t.begin(), t.end(), s.begin(), s.end())) out.insert(t);
  }
  return out;
}

SimplicialComplex star(const SimplicialComplex& k, const SimplicialComplex& x) {
  if (!x.is_subcomplex_of(k)) throw ValidationError("star: not a subcomplex");
  const auto verts = x.vertices();
  const std::set<std::size_t> vset(verts.begin(), verts.end());
  SimplicialComplex out;
  for (const auto& t : k.simplices()) {
    if (std::any_of(t.begin(), t.end(), [&](std::size_t v) { return vset.contains(v); })) out.insert(t);
  }
  return out;
}

SimplicialComplex full_subcomplex(const SimplicialComplex& k, const std::set<std::size_t>& vertices) {
  SimplicialComplex out;
  for (const auto& t : k.simplices()) {
    if (std::all_of(t.begin(), t.end(), [&](std::size_t v) { return vertices.contains(v); })) out.insert(t);
  }
  return out;
}

std::vector<std::size_t> reduced_betti(const SimplicialComplex& k) {
  const long n = k.dim();
  // Index i holds degree i-1; the augmentation C_0 -> C_-1 = Q is the boundary in degree 0.
  std::vector<std::size_t> dims(static_cast<std::size_t>(n + 2));
  std::vector<std::size_t> ranks(static_cast<std::size_t>(n + 3), 0);
  dims[0] = 1;
  for (long p = 0; p <= n; ++p) dims[static_cast<std::size_t>(p + 1)] = k.simplices(p).size();
  if (n >= 0) ranks[1] = 1;
  for (long p = 1; p <= n; ++p) ranks[static_cast<std::size_t>(p + 1)] = rank(k.boundary(p));
  std::vector<std::size_t> betti(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) betti[i] = dims[i] - ranks[i] - ranks[i + 1];
  return betti;
}

bool is_homology_sphere(const std::vector<std::size_t>& reduced, long d) {
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const long degree = static_cast<long>(i) - 1;
    if (reduced[i] != (degree == d ? 1U : 0U)) return false;
  }
  return d + 1 < static_cast<long>(reduced.size());
}

bool is_acyclic(const std::vector<std::size_t>& reduced) {
  return std::all_of(reduced.begin(), reduced.end(), [](std::size_t b) { return b == 0; });
}

SimplicialComplex Subdivision::subdivide(const SimplicialComplex& sub) const {
  SimplicialComplex out;
  for (const auto& chain : complex.simplices()) {
    // vertex ids do not follow the flag, so take the largest carrier
    const Simplex* top = &carrier[chain.front()];
    for (std::size_t v : chain) {
      if (carrier[v].size() > top->size()) top = &carrier[v];
    }
    if (sub.contains(*top)) out.insert(chain);
  }
  return out;
}

namespace {

// Vertices of a chain sorted so that carriers increase.
void extend_chains(const std::vector<Simplex>& carrier, const std::map<Simplex, std::size_t>& index, Simplex chain,
                   std::vector<Simplex>& out) {
  out.push_back(make_simplex(chain));
  const Simplex& bottom = carrier[chain.front()];
  if (bottom.size() == 1) return;
  for (std::size_t i = 0; i < bottom.size(); ++i) {
    Simplex f = bottom;
    f.erase(f.begin() + static_cast<long>(i));
    Simplex next = chain;
    next.insert(next.begin(), index.at(f));
    extend_chains(carrier, index, std::move(next), out);
  }
}

}  // namespace

Subdivision barycentric(const SimplicialComplex& k) {
  Subdivision sd;
  for (const auto& s : k.simplices()) {
    sd.barycenter[s] = sd.carrier.size();
    sd.carrier.push_back(s);
  }
  std::vector<Simplex> chains;
  for (const auto& top : k.facets()) extend_chains(sd.carrier, sd.barycenter, {sd.barycenter.at(top)}, chains);
  for (auto& c : chains) sd.complex.insert(std::move(c));
  return sd;
}

ManifoldReport classify_homology_manifold(const SimplicialComplex& k) {
  ManifoldReport report;
  report.dim = k.dim();
  for (const auto& s : k.simplices()) {
    const auto reduced = reduced_betti(link(k, s));
    const long expected = report.dim - 1 - (static_cast<long>(s.size()) - 1);
    if (is_homology_sphere(reduced, expected)) {
      report.interior.push_back(s);
    } else if (is_acyclic(reduced)) {
      report.boundary_simplices.push_back(s);
      report.boundary.insert(s);
    } else {
      report.ok = false;
      std::string where;
      for (std::size_t v : s) where += (where.empty() ? "" : ",") + std::to_string(v);
      report.failures.push_back("link of [" + where + "] is neither a homology S^" + std::to_string(expected) +
                                " nor acyclic");
    }
  }
  if (report.boundary.size() != report.boundary_simplices.size()) {
    report.ok = false;
    report.failures.push_back("boundary simplices do not form a subcomplex");
  }
  return report;
}

ManifoldReport validate_homology_manifold(const SimplicialComplex& k, const SimplicialComplex& declared) {
  ManifoldReport report = classify_homology_manifold(k);
  if (!(report.boundary == declared)) {
    report.ok = false;
    report.failures.push_back("declared boundary differs from the derived boundary");
  }
  return report;
}

Thickening thicken(const SimplicialComplex& k, const SimplicialComplex& boundary, const SimplicialComplex& x_prime) {
  const ManifoldReport input = validate_homology_manifold(k, boundary);
  if (!input.ok) throw ValidationError("thicken: input is not a homology manifold: " + input.failures.front());
  if (!x_prime.is_subcomplex_of(k)) throw ValidationError("thicken: X' is not a subcomplex");
  Thickening out;
  out.subdivision = barycentric(k);
  const auto xv = x_prime.vertices();
  std::set<std::size_t> keep;
  for (std::size_t b = 0; b < out.subdivision.carrier.size(); ++b) {
    const Simplex& c = out.subdivision.carrier[b];
    if (std::any_of(c.begin(), c.end(), [&](std::size_t v) { return std::binary_search(xv.begin(), xv.end(), v); })) {
      keep.insert(b);
    }
  }
  out.x = full_subcomplex(out.subdivision.complex, keep);
  out.report = classify_homology_manifold(out.x);
  out.y = out.report.boundary;
  return out;
}

}  // namespace l2approx
