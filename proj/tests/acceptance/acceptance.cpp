// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "cli.hpp"
#include "l2approx/amenable.hpp"
#include "l2approx/errors.hpp"
#include "l2approx/oracle.hpp"
#include "l2approx/quotient.hpp"
#include "l2approx/simplicial.hpp"
#include "l2approx/spectral.hpp"
#include "support.hpp"

using namespace l2approx;
using l2t::g1;
using l2t::laurent;
using l2t::q;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Records the first few failures; later ones only bump the count.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  std::size_t checks() const { return checks_; }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, summary + ", " + std::to_string(failures_) + " failed: " + first_};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

std::size_t workers() { return std::max<std::size_t>(1, std::thread::hardware_concurrency()); }

std::string str(const Rational& r) { return to_string(r); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int cli_exit(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "l2approx");
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

// 1. pushed traces of random expressions equal the vn trace once m_k > 2 deg width
Outcome trace_stabilization() {
  constexpr int deg = 4;
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> size(1, 3), width(1, 3);
  Tally t;
  std::size_t matrices = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t rank = 1 + trial % 2;
    const GroupPtr g = l2t::z(rank);
    const std::size_t n = size(rng);
    const int w = width(rng);
    Expr product;
    Expr extra;
    for (int i = 0; i < w; ++i) {
      const Expr leaf = MatrixExpression::leaf(l2t::random_matrix(g, n, n, 5, deg, rng));
      product = product ? MatrixExpression::product(product, leaf) : leaf;
      if (i == 0) extra = MatrixExpression::scale(q(trial % 5 - 2, 3), leaf);
    }
    matrices += w;
    const Expr e = MatrixExpression::sum(product, extra);
    const Rational expected = vn_trace_expression(e);
    const std::int64_t threshold = 2 * deg * w;
    std::vector<std::int64_t> moduli{threshold + 1};
    if (rank == 1) moduli.push_back(threshold + 1 + trial % 7);
    for (const std::int64_t m : moduli) {
      const Rational got = normalized_pushed_trace(e, TowerLevel(g, 1, m));
      t.check(got == expected, "trial " + std::to_string(trial) + " m=" + std::to_string(m) + ": " + str(got) +
                                   " != " + str(expected));
    }
  }
  t.check(matrices >= 200, "only " + std::to_string(matrices) + " matrices");
  return t.outcome(std::to_string(matrices) + " random matrices over Q[Z], Q[Z^2], " + std::to_string(t.checks()) +
                   " exact trace comparisons");
}

SymmetricComplex form_of(const GroupRingElement& x) {
  return from_form(AlgebraicForm{l2t::scalar_matrix(l2t::z(), x), 1});
}

// 2. signatures along m_k = k for 2 + t + t^-1 and t + t^-1
Outcome form_towers() {
  Tally t;
  const GroupTower tower = make_tower(l2t::z(), linear_schedule(1, 512), false);
  TowerOptions opt;
  opt.jobs = workers();

  const SymmetricComplex pos = form_of(laurent({{0, 2}, {1, 1}, {-1, 1}}));
  opt.oracle = l2_signature_torus(pos);
  const TowerRun a = run_tower(pos, tower, opt);
  t.check(a.rows.size() == 512, "positive: wrong number of levels");
  for (const ConvergenceRow& r : a.rows) {
    const long k = static_cast<long>(r.index);
    const Rational expected = k % 2 == 1 ? q(1) : q(k - 1, k);
    t.check(r.sign == expected, "positive k=" + std::to_string(k) + ": " + str(r.sign));
    t.check(abs(r.sign - 1) * Rational(k) <= 1, "positive k=" + std::to_string(k) + ": |sign - 1| > 1/k");
  }
  const double gap_pos = std::fabs(static_cast<double>(to_long_double(a.rows.back().sign)) - opt.oracle->value);
  t.check(a.rows.back().index == 512 && gap_pos <= 2e-3, "positive oracle gap " + fmt(gap_pos));

  const SymmetricComplex bal = form_of(laurent({{1, 1}, {-1, 1}}));
  opt.oracle = l2_signature_torus(bal);
  const TowerRun b = run_tower(bal, tower, opt);
  for (const ConvergenceRow& r : b.rows) {
    t.check(abs(r.sign) * Rational(static_cast<long>(r.index)) <= 1,
            "balanced k=" + std::to_string(r.index) + ": " + str(r.sign));
  }
  t.check(std::fabs(opt.oracle->value) <= 1e-3, "balanced oracle " + fmt(opt.oracle->value));
  return t.outcome("k = 1..512, gap at 512 = " + fmt(gap_pos) + ", balanced oracle = " + fmt(opt.oracle->value));
}

// 3. circle: betti_k(0) = 1/k and the torus oracle sees the limit 0
Outcome circle_betti() {
  Tally t;
  const InputDocument d = l2t::load("complexes/circle.json");
  const FreeComplex& c = *d.complex;
  const BettiRun run = run_tower_betti(c, make_tower(d.group, linear_schedule(1, 512), false), workers());
  t.check(run.rows.size() == 512, "wrong number of levels");
  for (const BettiRow& r : run.rows) {
    const long k = static_cast<long>(r.index);
    t.check(r.betti[0] == q(1, k), "k=" + std::to_string(k) + ": " + str(r.betti[0]));
  }
  const OracleResult o = l2_betti_torus(c, 0);
  t.check(o.converged, "oracle did not converge");
  t.check(std::fabs(o.value) <= o.tolerance, "oracle " + fmt(o.value) + " outside its bound " + fmt(o.tolerance));
  return t.outcome("k = 1..512, oracle " + fmt(o.value) + " +- " + fmt(o.tolerance));
}

GroupTower default_tower(const InputDocument& d) {
  if (!d.schedule.empty()) return build_tower(TowerSpec{d.group, d.schedule});
  return make_tower(d.group, power_schedule(d.group->rank() > 1 ? 3 : 5));
}

// 4. dim_k C_p = r_p
Outcome chain_dimensions() {
  Tally t;
  std::size_t examples = 0;
  auto check_complex = [&](const std::string& name, const FreeComplex& c, const GroupTower& tower) {
    ++examples;
    for (const TowerLevel& level : tower.levels()) {
      const QuotientSnapshot snap = snapshot(c, level);
      for (long p = 0; p <= static_cast<long>(c.dim()); ++p) {
        const Rational r(static_cast<long>(c.rank(p)));
        const std::string where = name + " k=" + std::to_string(level.k()) + " p=" + std::to_string(p);
        t.check(dim_k_chains(c, p, level) == r, where);
        // size of the pushed chain module, read off its Laplacian
        const auto rows = static_cast<long>(snap.laplacians[static_cast<std::size_t>(p)].rows());
        t.check(Rational(rows) / Rational(static_cast<long>(level.order())) == r, where + " pushed");
      }
    }
  };
  for (const auto& f : l2t::shipped_files("complexes")) {
    const InputDocument d = l2t::load(f);
    const FreeComplex c = d.complex ? *d.complex : d.symmetric->base();
    check_complex(f, c, default_tower(d));
  }
  for (const auto& f : l2t::shipped_files("equivariant")) {
    const InputDocument d = l2t::load(f);
    check_complex(f, d.equivariant->chain_complex(), default_tower(d));
  }
  for (const auto& f : l2t::shipped_files("operators")) {
    const InputDocument d = l2t::load(f);
    check_complex(f, FreeComplex::zero(d.group, {d.operator_matrix->rows()}), default_tower(d));
  }
  return t.outcome(std::to_string(examples) + " examples, " + std::to_string(t.checks()) + " checks");
}

// 5. count(0, eps] / normalizer <= d ln K / (-ln eps)
Outcome small_eigenvalues() {
  Tally t;
  const std::vector<Rational> grid{q(1, 10), q(1, 100), q(1, 1000)};
  auto record = [&](const std::string& where, const std::vector<BoundCheck>& checks) {
    for (const BoundCheck& b : checks) {
      t.check(b.ok && b.precondition, where + " eps=" + str(b.eps) + ": " + str(b.lhs) + " > " + fmt(b.rhs));
    }
  };
  auto tower_family = [&](const std::string& file, const std::vector<std::int64_t>& schedule) {
    const InputDocument d = l2t::load(file);
    const FreeComplex& c = *d.complex;
    const GroupTower tower = make_tower(d.group, schedule, false);
    for (long p = 0; p <= static_cast<long>(c.dim()); ++p) {
      const GroupRingMatrix lap = group_laplacian(c, p);
      for (const TowerLevel& level : tower.levels()) {
        record(file + " p=" + std::to_string(p) + " m=" + std::to_string(level.modulus()),
               check_small_eigenvalue_bound(lap.push(level), c.rank(p), lap.norm_bound(), grid,
                                            Rational(static_cast<long>(level.order()))));
      }
    }
  };
  tower_family("complexes/circle.json", linear_schedule(1, 128));
  tower_family("complexes/plane.json", linear_schedule(1, 12));
  // path graphs: vertex Laplacian of a segment of the line, K = 4
  for (std::size_t n = 2; n <= 160; ++n) {
    std::vector<Simplex> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    const QMatrix b = SimplicialComplex(edges).boundary(1);
    record("segment n=" + std::to_string(n),
           check_small_eigenvalue_bound(b * b.transpose(), 1, 4, grid, Rational(static_cast<long>(n))));
  }
  return t.outcome(std::to_string(t.checks()) + " (Laplacian, eps) pairs on circle, segments and Z^2");
}

EquivariantComplex load_equivariant(const std::string& name) {
  return *l2t::load("equivariant/" + name + ".json").equivariant;
}

// 6. restriction identity on thickened subcomplexes of the shipped covers
Outcome restriction_identity() {
  Tally t;
  std::size_t regions = 0;
  for (const std::string name : {"line", "plane", "torus7", "tetrahedron_boundary", "triangle_z3"}) {
    const EquivariantComplex e = load_equivariant(name);
    const EquivariantSubdivision sd = barycentric(e);
    std::vector<Region> seeds;
    for (long p = 0; p <= e.dim(); ++p) seeds.push_back(e.close({CoverSimplex{p, 0, e.group()->identity()}}));
    if (!e.group()->is_finite()) seeds.push_back(folner_exhaustion(e, box_sets(*e.group(), 1))[0]);
    for (const Region& seed : seeds) {
      const CoverThickening th = thicken_in_cover(e, sd, seed);
      ++regions;
      const std::string where = name + " region " + std::to_string(regions);
      t.check(th.report.ok && !th.u.empty(), where + ": thickening is not a manifold");
      for (long p = 0; p <= e.dim(); ++p) {
        const RestrictionReport r = restriction_check(sd.complex, th.u, th.v, p);
        t.check(r.ok() && r.lhs == r.rhs,
                where + " p=" + std::to_string(p) + (r.failures.empty() ? "" : ": " + r.failures.front()));
      }
    }
  }
  t.check(regions >= 10, "only " + std::to_string(regions) + " regions");
  return t.outcome(std::to_string(regions) + " thickened regions, " + std::to_string(t.checks()) + " checks");
}

SimplicialComplex torus7() {
  std::vector<Simplex> s;
  for (std::size_t i = 0; i < 7; ++i) {
    s.push_back(make_simplex({i, (i + 1) % 7, (i + 3) % 7}));
    s.push_back(make_simplex({i, (i + 2) % 7, (i + 3) % 7}));
  }
  return SimplicialComplex(s);
}

// 7. random thickenings in the boundary of the 3-simplex and the 7-vertex torus
Outcome thickenings() {
  Tally t;
  std::mt19937_64 rng(7);
  std::size_t count = 0;
  const std::vector<std::pair<std::string, SimplicialComplex>> spaces{
      {"tetrahedron", SimplicialComplex({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}})}, {"torus7", torus7()}};
  for (const auto& [name, k] : spaces) {
    const std::vector<Simplex> all(k.simplices().begin(), k.simplices().end());
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1), gens(1, 3);
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<Simplex> g;
      for (std::size_t i = gens(rng); i > 0; --i) g.push_back(all[pick(rng)]);
      const SimplicialComplex xp(g);
      const Thickening th = thicken(k, SimplicialComplex(), xp);
      const Subdivision& sd = th.subdivision;
      const std::string where = name + " trial " + std::to_string(trial);
      ++count;
      t.check(sd.subdivide(xp).is_subcomplex_of(th.x), where + ": X' not in X");
      t.check(th.x.is_subcomplex_of(sd.subdivide(star(k, xp))), where + ": X not in Star(X')");
      t.check(th.report.ok && validate_homology_manifold(th.x, th.y).ok, where + ": not a manifold");
      t.check(sd.subdivide(star(k, xp)) == star(sd.complex, star(sd.complex, sd.subdivide(xp))),
              where + ": star identity");
    }
  }
  return t.outcome(std::to_string(count) + " random subcomplexes");
}

// 8. truncations to {-k..k}
Outcome truncations() {
  Tally t;
  const auto sets = box_sets(*l2t::z(), 256);
  AmenableOptions opt;
  opt.oracle = true;
  opt.jobs = workers();
  const OperatorRun pos = run_amenable_operator(l2t::scalar_matrix(l2t::z(), laurent({{0, 2}, {1, 1}, {-1, 1}})), sets, opt);
  const OperatorRun bal = run_amenable_operator(l2t::scalar_matrix(l2t::z(), laurent({{1, 1}, {-1, 1}})), sets, opt);
  t.check(pos.rows.size() == 256 && bal.rows.size() == 256, "wrong number of levels");
  t.check(pos.oracle.has_value() && bal.oracle.has_value(), "missing oracle");
  for (std::size_t i = 0; i < pos.rows.size(); ++i) {
    const std::string k = std::to_string(pos.rows[i].k);
    t.check(pos.rows[i].size == 2 * pos.rows[i].k + 1, "k=" + k + ": wrong size");
    t.check(pos.rows[i].sign == 1, "positive k=" + k + ": " + str(pos.rows[i].sign));
    t.check(abs(bal.rows[i].sign) * Rational(static_cast<long>(bal.rows[i].size)) <= 1,
            "balanced k=" + k + ": " + str(bal.rows[i].sign));
    t.check(std::fabs(static_cast<double>(to_long_double(pos.rows[i].sign)) - pos.oracle->value) <= 1e-3,
            "positive k=" + k + ": oracle gap");
    t.check(std::fabs(static_cast<double>(to_long_double(bal.rows[i].sign)) - bal.oracle->value) <= 1e-3,
            "balanced k=" + k + ": oracle gap");
  }
  return t.outcome("k = 1..256, oracles " + fmt(pos.oracle->value) + " and " + fmt(bal.oracle->value));
}

constexpr const char* asymmetric_document = R"({"group":{"kind":"free_abelian","rank":1,"schedule":[3,6]},
  "ranks":[0,0,1,0,0],
  "differentials":[{"rows":0,"cols":0,"entries":[]},{"rows":0,"cols":1,"entries":[]},
                   {"rows":1,"cols":0,"entries":[[]]},{"rows":0,"cols":0,"entries":[]}],
  "duality":[{"rows":0,"cols":0,"entries":[]},{"rows":0,"cols":0,"entries":[]},
             {"rows":1,"cols":1,"entries":[[[{"g":1,"c":1}]]]},
             {"rows":0,"cols":0,"entries":[]},{"rows":0,"cols":0,"entries":[]}]})";

// 9. exact pairing symmetry, and exit 3 on an asymmetric pairing
Outcome pairing_symmetry() {
  Tally t;
  std::size_t pairings = 0;
  auto check_symmetric = [&](const std::string& name, const SymmetricComplex& s, const GroupTower& tower) {
    t.check(validate(s).ok(), name + ": duality is not a chain map");
    if (!s.has_signature()) return;
    for (const TowerLevel& level : tower.levels()) {
      const std::string where = name + " k=" + std::to_string(level.k());
      try {
        const QuotientSnapshot snap = snapshot(s, level);
        ++pairings;
        t.check(snap.pairing == snap.pairing.transpose(), where);
        t.check(snap.inertia.size() == snap.kernel_dims[snap.middle], where + ": inertia does not cover the kernel");
      } catch (const InvariantViolation& e) {
        t.check(false, where + ": " + e.what());
      }
    }
  };
  for (const auto& f : l2t::shipped_files("complexes")) {
    const InputDocument d = l2t::load(f);
    if (d.symmetric) check_symmetric(f, *d.symmetric, default_tower(d));
  }
  for (const auto& f : l2t::shipped_files("equivariant")) {
    const InputDocument d = l2t::load(f);
    if (!d.equivariant->has_boundary()) check_symmetric(f, d.equivariant->symmetric_complex(), default_tower(d));
  }
  for (const auto& x : {laurent({{0, 2}, {1, 1}, {-1, 1}}), laurent({{1, 1}, {-1, 1}}), laurent({{0, 1}, {3, -2}, {-3, -2}})}) {
    check_symmetric("form", form_of(x), make_tower(l2t::z(), linear_schedule(1, 24), false));
  }

  const auto path = std::filesystem::temp_directory_path() / "l2approx_acceptance_asymmetric.json";
  std::ofstream(path) << asymmetric_document;
  const int code = cli_exit({"tower-sign", "--input", path.string()});
  t.check(code == 3, "asymmetric pairing exit code " + std::to_string(code));
  return t.outcome(std::to_string(pairings) + " pairings symmetric, asymmetric input exits with " +
                   std::to_string(code));
}

// 10. tower-sign output does not depend on --jobs
Outcome jobs_determinism() {
  Tally t;
  const std::vector<std::vector<std::string>> runs{
      {"--input", l2t::data_path("complexes/form_positive.json"), "--tower", l2t::data_path("towers/z_linear.json"),
       "--oracle"},
      {"--input", l2t::data_path("complexes/form_balanced.json"), "--tower", l2t::data_path("towers/z_linear.json"),
       "--oracle"},
      {"--input", l2t::data_path("complexes/form_diagonal.json"), "--k-max", "6", "--oracle"},
      {"--input", l2t::data_path("complexes/form_z3.json"), "--oracle"}};
  std::size_t bytes = 0;
  for (const auto& args : runs) {
    std::vector<std::string> one{"tower-sign"}, eight{"tower-sign"};
    one.insert(one.end(), args.begin(), args.end());
    eight.insert(eight.end(), args.begin(), args.end());
    one.insert(one.end(), {"--jobs", "1"});
    eight.insert(eight.end(), {"--jobs", "8"});
    std::string a, b;
    const int ca = cli_exit(one, &a), cb = cli_exit(eight, &b);
    t.check(ca == 0 && cb == 0, args[1] + ": exit codes " + std::to_string(ca) + ", " + std::to_string(cb));
    t.check(!a.empty() && a == b, args[1] + ": outputs differ");
    bytes += a.size();
  }
  return t.outcome(std::to_string(runs.size()) + " inputs, " + std::to_string(bytes) + " bytes identical");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    double limit_seconds;
  };
  const std::vector<Criterion> criteria{
      {1, "trace stabilization", trace_stabilization, 60},
      {2, "form signatures along m_k = k", form_towers, 120},
      {3, "circle betti numbers", circle_betti, 0},
      {4, "normalized chain dimensions", chain_dimensions, 0},
      {5, "small-eigenvalue bound", small_eigenvalues, 0},
      {6, "restriction identity", restriction_identity, 0},
      {7, "thickening", thickenings, 0},
      {8, "truncated operators", truncations, 0},
      {9, "pairing symmetry", pairing_symmetry, 0},
      {10, "jobs determinism", jobs_determinism, 0},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      o.pass = false;
      o.detail += ", over the " + fmt(c.limit_seconds) + " s limit";
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] criterion %2d  %-32s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
