#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "l2approx/amenable.hpp"
#include "l2approx/errors.hpp"
#include "l2approx/io.hpp"
#include "l2approx/oracle.hpp"
#include "l2approx/quotient.hpp"
#include "l2approx/spectral.hpp"

namespace l2approx::cli {

namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string command;
  std::string input;
  std::string tower;
  std::string out;
  std::size_t k_max = 0;
  std::size_t jobs = 1;
  std::optional<double> oracle;
  std::uint64_t seed = 1;
};

struct Loaded {
  InputDocument doc;
  std::vector<std::int64_t> schedule;
};

Loaded load(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ValidationError("--input is required");
  TowerSpec spec;
  if (!cfg.tower.empty()) spec = parse_tower(read_text(cfg.tower));
  Loaded l{parse_input(read_text(cfg.input), spec.group), {}};
  if (cfg.k_max > 0) {
    l.schedule = power_schedule(cfg.k_max);
  } else if (!cfg.tower.empty()) {
    l.schedule = spec.schedule;
  } else {
    l.schedule = l.doc.schedule;
  }
  return l;
}

GroupTower tower_of(const Loaded& l) {
  if (l.schedule.empty()) throw ValidationError("empty schedule (pass --tower, --k-max or embed a schedule)");
  return build_tower(TowerSpec{l.doc.group, l.schedule});
}

TorusOptions torus_options(double tolerance) {
  if (!(tolerance > 0)) throw ValidationError("oracle tolerance must be positive");
  TorusOptions o;
  o.tolerance = tolerance;
  return o;
}

OracleResult exact_oracle(const Rational& v) {
  OracleResult r;
  r.value = v.get_d();
  r.exact = v;
  r.method = OracleMethod::FiniteGroupClosedForm;
  return r;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write " + cfg.out);
  f << text;
}

int cmd_tower_sign(const RunConfig& cfg, std::ostream& out) {
  const Loaded l = load(cfg);
  if (!l.doc.symmetric) throw ValidationError("tower-sign needs a symmetric complex or a form");
  const ValidationReport report = validate(*l.doc.symmetric);
  if (!report.ok()) throw ValidationError(report.violations.front().check + " fails at degree " +
                                          std::to_string(report.violations.front().degree) + ": " +
                                          report.violations.front().message);
  const GroupTower tower = tower_of(l);
  TowerOptions options;
  options.jobs = cfg.jobs;
  if (cfg.oracle) {
    if (l.doc.group->is_finite()) {
      options.oracle = exact_oracle(l2_signature_finite(*l.doc.symmetric));
    } else {
      options.oracle = l2_signature_torus(*l.doc.symmetric, torus_options(*cfg.oracle));
    }
  }
  emit(cfg, tower_csv(run_tower(*l.doc.symmetric, tower, options)), out);
  return 0;
}

int cmd_tower_betti(const RunConfig& cfg, std::ostream& out) {
  const Loaded l = load(cfg);
  if (!l.doc.complex) throw ValidationError("tower-betti needs a chain complex");
  const ValidationReport report = validate(*l.doc.complex);
  if (!report.ok()) throw ValidationError("differentials do not compose to zero at degree " +
                                          std::to_string(report.violations.front().degree));
  const GroupTower tower = tower_of(l);
  BettiRun run = run_tower_betti(*l.doc.complex, tower, cfg.jobs);
  if (cfg.oracle) {
    for (long p = 0; p <= static_cast<long>(l.doc.complex->dim()); ++p) {
      if (l.doc.group->is_finite()) {
        run.oracle.push_back(exact_oracle(l2_betti_finite(*l.doc.complex, p)));
      } else {
        run.oracle.push_back(l2_betti_torus(*l.doc.complex, p, torus_options(*cfg.oracle)));
      }
    }
  }
  emit(cfg, betti_csv(run), out);
  return 0;
}

int cmd_amenable(const RunConfig& cfg, std::ostream& out) {
  const Loaded l = load(cfg);
  ExhaustionSpec spec;
  if (cfg.k_max > 0) {
    spec.box_k_max = cfg.k_max;
  } else if (l.doc.exhaustion) {
    spec = *l.doc.exhaustion;
  } else {
    throw ValidationError("exhaustion is empty (pass --k-max or embed \"exhaustion\")");
  }
  AmenableOptions options;
  options.jobs = cfg.jobs;
  if (cfg.oracle) {
    options.oracle = true;
    options.torus = torus_options(*cfg.oracle);
  }
  if (l.doc.operator_matrix) {
    emit(cfg, operator_csv(run_amenable_operator(*l.doc.operator_matrix, resolve_sets(*l.doc.group, spec), options)),
         out);
    return 0;
  }
  if (!l.doc.equivariant) throw ValidationError("amenable needs an equivariant complex or an operator");
  emit(cfg, amenable_csv(run_amenable(*l.doc.equivariant, resolve_exhaustion(*l.doc.equivariant, spec), options)),
       out);
  return 0;
}

GroupRingMatrix random_matrix(const GroupPtr& group, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(0, 5), degree(-4, 4), coeff(-6, 6);
  GroupRingMatrix m(group, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int count = terms(rng);
      for (int t = 0; t < count; ++t) {
        std::vector<std::int64_t> g(group->rank());
        for (auto& x : g) x = degree(rng);
        Rational c(coeff(rng), 1 + std::abs(coeff(rng)));
        c.canonicalize();
        m.add(i, j, GroupElement(g), c);
      }
    }
  }
  return m;
}

int cmd_diagnose(const RunConfig& cfg, std::ostream& out) {
  const Loaded l = load(cfg);
  if (!l.doc.complex) throw ValidationError("diagnose needs a chain complex");
  const FreeComplex& c = *l.doc.complex;
  const GroupTower tower = tower_of(l);
  const std::vector<Rational> grid{Rational(1, 10), Rational(1, 100), Rational(1, 1000)};
  json reports = json::array();
  bool ok = true;

  std::vector<Rational> norms;
  for (long p = 0; p <= static_cast<long>(c.dim()); ++p) {
    const Rational k = group_laplacian(c, p).norm_bound();
    norms.push_back(k < 1 ? Rational(1) : k);
  }
  for (const auto& level : tower.levels()) {
    const QuotientSnapshot snap = snapshot(c, level);
    for (long p = 0; p <= static_cast<long>(c.dim()); ++p) {
      const QMatrix& lap = snap.laplacians[static_cast<std::size_t>(p)];
      if (lap.rows() == 0) continue;
      for (const auto& b : check_small_eigenvalue_bound(lap, c.rank(p), norms[static_cast<std::size_t>(p)], grid,
                                                        Rational(level.order()))) {
        reports.push_back({{"lemma", b.lemma}, {"level", level.k()}, {"degree", p}, {"eps", to_string(b.eps)},
                           {"count", b.count}, {"lhs", to_string(b.lhs)}, {"rhs_decimal", b.rhs}, {"ok", b.ok},
                           {"precondition", b.precondition}, {"note", b.note}});
        ok = ok && (b.ok || !b.precondition);
      }
    }
  }
  const TowerLevel& first = tower.levels().front();
  for (long p = 0; p <= static_cast<long>(c.dim()); ++p) {
    const BoundCheck b = replay_spec_control(c, p, first, Rational(1, 10));
    reports.push_back({{"lemma", b.lemma}, {"level", first.k()}, {"degree", p}, {"eps", to_string(b.eps)},
                       {"lhs", to_string(b.lhs)}, {"rhs_decimal", b.rhs}, {"ok", b.ok},
                       {"precondition", b.precondition}, {"note", b.note}});
    ok = ok && (b.ok || !b.precondition);
  }
  std::set<Rational> distinct(norms.begin(), norms.end());
  for (const auto& k : distinct) {
    for (const auto& eps : grid) {
      const FilterSpec f = build_p_eps(eps, k);
      reports.push_back({{"lemma", "p_eps_filter"}, {"eps", to_string(eps)}, {"k", to_string(k)},
                         {"exponent", f.exponent}, {"points", f.check.points}, {"ok", f.check.ok()}});
      ok = ok && f.check.ok();
    }
    const FilterSpec q = build_q_eps(Rational(0), k / 2, Rational(1, 10), k);
    reports.push_back({{"lemma", "q_eps_filter"}, {"eps", "1/10"}, {"k", to_string(k)}, {"degree", q.degree},
                       {"points", q.check.points}, {"ok", q.check.ok()}});
    ok = ok && q.check.ok();
  }
  if (c.group()->kind() == GroupKind::FreeAbelian) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> size(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const GroupRingMatrix a = random_matrix(c.group(), size(rng), rng);
      const Expr e = MatrixExpression::product(MatrixExpression::leaf(a), MatrixExpression::leaf(a.adjoint()));
      const Rational expected = vn_trace_expression(e);
      for (const auto& level : tower.levels()) {
        if (level.modulus() <= 2 * 2 * a.support_width()) continue;
        const Rational got = normalized_pushed_trace(e, level);
        reports.push_back({{"lemma", "trace_stabilization"}, {"trial", trial}, {"level", level.k()},
                           {"lhs", to_string(got)}, {"rhs", to_string(expected)}, {"ok", got == expected}});
        ok = ok && got == expected;
      }
    }
  }
  json bundle{{"command", "diagnose"}, {"ok", ok}, {"reports", reports}};
  emit(cfg, bundle.dump(2) + "\n", out);
  if (!ok) throw InvariantViolation("a diagnostic bound was violated");
  return 0;
}

void add_violations(json& list, const ValidationReport& report) {
  for (const auto& v : report.violations) {
    list.push_back({{"check", v.check}, {"degree", v.degree}, {"message", v.message}});
  }
}

ValidationReport validate_cover(const EquivariantComplex& e) {
  ValidationReport report;
  const long n = e.dim();
  if (!e.fundamental_class().empty()) {
    const ValidationReport cycle = e.fundamental_cycle_report();
    report.violations.insert(report.violations.end(), cycle.violations.begin(), cycle.violations.end());
  }
  Region domain;
  for (long p = 0; p <= n; ++p) {
    for (std::size_t i = 0; i < e.orbit_count(p); ++i) domain.insert(CoverSimplex{p, i, e.group()->identity()});
  }
  const Region around = u_r(e, domain, 1);
  Materialized m;
  try {
    m = e.materialize(around);
  } catch (const ValidationError& err) {
    report.violations.push_back({"simplicial", n, err.what()});
    return report;
  }
  for (const auto& s : domain) {
    const std::vector<std::size_t> rb = reduced_betti(link(m.complex, m.simplex.at(s)));
    const bool declared = e.in_boundary(s.dim, s.orbit);
    const bool sphere = is_homology_sphere(rb, n - 1 - s.dim);
    const std::string where = "orbit " + std::to_string(s.orbit) + ": ";
    if (!sphere && !is_acyclic(rb)) {
      report.violations.push_back({"link", s.dim, where + "link is neither a homology sphere nor acyclic"});
    } else if (sphere && declared) {
      report.violations.push_back({"boundary", s.dim, where + "declared boundary but the link is a sphere"});
    } else if (!sphere && !declared) {
      report.violations.push_back({"boundary", s.dim, where + "link is acyclic but the simplex is not declared boundary"});
    }
  }
  return report;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Loaded l = load(cfg);
  json violations = json::array();
  std::string kind;
  if (l.doc.symmetric) {
    kind = "symmetric_complex";
    add_violations(violations, validate(*l.doc.symmetric));
  } else if (l.doc.complex) {
    kind = "chain_complex";
    add_violations(violations, validate(*l.doc.complex));
  } else if (l.doc.equivariant) {
    kind = "equivariant_complex";
    add_violations(violations, validate_cover(*l.doc.equivariant));
  } else if (l.doc.operator_matrix) {
    kind = "operator";
    if (!l.doc.operator_matrix->is_self_adjoint()) {
      violations.push_back({{"check", "self_adjoint"}, {"degree", 0}, {"message", "operator is not self-adjoint"}});
    }
  } else {
    throw ValidationError("input describes nothing to validate");
  }
  const bool ok = violations.empty();
  json report{{"command", "validate"}, {"kind", kind}, {"ok", ok}, {"violations", violations}};
  emit(cfg, report.dump(2) + "\n", out);
  if (!ok) {
    err << json{{"error", "validation"}, {"message", violations.front()["message"]}}.dump() << '\n';
    return 2;
  }
  return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string& oracle) {
  sub->add_option("--input", cfg.input, "input JSON document");
  sub->add_option("--tower", cfg.tower, "group and schedule JSON");
  sub->add_option("--k-max", cfg.k_max, "use the schedule 2^1..2^k (towers) or boxes {-k..k}^n (exhaustions)");
  sub->add_option("--oracle", oracle, "compare with an oracle, optional tolerance")->expected(0, 1);
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "seed for randomized diagnostics");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string oracle;
  CLI::App app{"L2-signatures and L2-Betti numbers by finite approximation"};
  app.require_subcommand(1);
  std::vector<CLI::App*> subs;
  for (const char* name : {"tower-sign", "tower-betti", "amenable", "diagnose", "validate"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, cfg, oracle);
    subs.push_back(sub);
  }
  subs[0]->description("signature convergence table along a tower of finite quotients");
  subs[1]->description("Betti number convergence table along a tower");
  subs[2]->description("convergence table along an amenable exhaustion");
  subs[3]->description("small-eigenvalue bounds, filter polynomials and trace stabilization");
  subs[4]->description("structural validation without running a driver");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  try {
    for (CLI::App* sub : subs) {
      if (!sub->parsed()) continue;
      cfg.command = sub->get_name();
      if (sub->get_option("--oracle")->count() > 0) cfg.oracle = oracle.empty() ? 1e-3 : std::stod(oracle);
    }
    if (cfg.command == "tower-sign") return cmd_tower_sign(cfg, out);
    if (cfg.command == "tower-betti") return cmd_tower_betti(cfg, out);
    if (cfg.command == "amenable") return cmd_amenable(cfg, out);
    if (cfg.command == "diagnose") return cmd_diagnose(cfg, out);
    return cmd_validate(cfg, out, err);
  } catch (const ValidationError& e) {
    err << json{{"error", "validation"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    err << json{{"error", "invariant"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << json{{"error", "validation"}, {"message", std::string("bad number: ") + e.what()}}.dump() << '\n';
    return 2;
  }
}

}  // namespace l2approx::cli
