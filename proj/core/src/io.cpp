#include "l2approx/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

using json = nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("field \"") + what + "\" has the wrong type");
  }
}

std::size_t as_size(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ValidationError(std::string("field \"") + what + "\" must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

GroupPtr group_from(const json& j) {
  const auto kind = as<std::string>(field(j, "kind"), "kind");
  if (kind == "trivial") return std::make_shared<const Group>(Group::trivial());
  if (kind == "free_abelian") {
    const std::size_t rank = as_size(field(j, "rank"), "rank");
    if (rank == 0) throw ValidationError("free abelian rank must be positive");
    return std::make_shared<const Group>(Group::free_abelian(rank));
  }
  if (kind == "finite") {
    auto table = as<std::vector<std::vector<std::size_t>>>(field(j, "table"), "table");
    std::optional<std::vector<std::size_t>> gens;
    if (j.contains("generators")) gens = as<std::vector<std::size_t>>(j.at("generators"), "generators");
    return std::make_shared<const Group>(Group::finite(std::move(table), std::move(gens)));
  }
  throw ValidationError("unknown group kind \"" + kind + "\"");
}

std::vector<std::int64_t> schedule_from(const json& j) {
  if (j.is_array()) return as<std::vector<std::int64_t>>(j, "schedule");
  if (j.is_object() && j.contains("linear")) {
    const auto range = as<std::vector<std::int64_t>>(j.at("linear"), "linear");
    if (range.size() != 2) throw ValidationError("linear schedule needs [first, last]");
    return linear_schedule(range[0], range[1]);
  }
  if (j.is_object() && j.contains("power")) return power_schedule(as_size(j.at("power"), "power"));
  throw ValidationError("schedule must be a list, {\"linear\":[a,b]} or {\"power\":k}");
}

GroupElement element_from(const json& j, const Group& group) {
  GroupElement g;
  switch (group.kind()) {
    case GroupKind::Trivial:
      if (!(j.is_null() || (j.is_array() && j.empty()) || (j.is_number_integer() && j.get<long long>() == 0))) {
        throw ValidationError("trivial group element must be [] or 0");
      }
      return group.identity();
    case GroupKind::Finite:
      g = GroupElement({as<std::int64_t>(j, "g")});
      break;
    case GroupKind::FreeAbelian:
      if (j.is_number_integer()) {
        g = GroupElement({j.get<std::int64_t>()});
      } else {
        g = GroupElement(as<std::vector<std::int64_t>>(j, "g"));
      }
      break;
  }
  group.require(g);
  return g;
}

GroupRingMatrix matrix_from(const json& j, const GroupPtr& group) {
  const std::size_t rows = as_size(field(j, "rows"), "rows");
  const std::size_t cols = as_size(field(j, "cols"), "cols");
  const json& entries = field(j, "entries");
  GroupRingMatrix m(group, rows, cols);
  if (!entries.is_array() || entries.size() != rows) throw ValidationError("matrix \"entries\" must have one list per row");
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = entries[i];
    if (!row.is_array() || row.size() != cols) throw ValidationError("matrix row " + std::to_string(i) + " has the wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_array()) throw ValidationError("matrix entries must be lists of terms");
      for (const json& term : row[c]) {
        const GroupElement g = element_from(term.contains("g") ? term.at("g") : json(), *group);
        const json& coeff = field(term, "c");
        const Rational value =
            coeff.is_number_integer() ? Rational(static_cast<long>(coeff.get<long long>())) : parse_rational(as<std::string>(coeff, "c"));
        m.add(i, c, g, value);
      }
    }
  }
  return m;
}

std::vector<GroupRingMatrix> matrices_from(const json& j, const GroupPtr& group, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string("field \"") + what + "\" must be a list of matrices");
  std::vector<GroupRingMatrix> out;
  for (const json& m : j) out.push_back(matrix_from(m, group));
  return out;
}

EquivariantComplex equivariant_from(const json& j, const GroupPtr& group) {
  const std::size_t vertices = as_size(field(j, "vertices"), "vertices");
  std::vector<std::vector<VertexTuple>> simplices;
  for (const json& dim : field(j, "simplices")) {
    std::vector<VertexTuple> lifts;
    for (const json& tuple : dim) {
      VertexTuple t;
      for (const json& v : tuple) {
        if (!v.is_array() || v.empty() || v.size() > 2) throw ValidationError("cover vertex must be [orbit, g]");
        t.push_back(CoverVertex{as_size(v[0], "orbit"), element_from(v.size() == 2 ? v[1] : json(), *group)});
      }
      lifts.push_back(std::move(t));
    }
    simplices.push_back(std::move(lifts));
  }
  std::vector<int> fundamental;
  if (j.contains("fundamental_class")) fundamental = as<std::vector<int>>(j.at("fundamental_class"), "fundamental_class");
  std::vector<std::pair<long, std::size_t>> boundary;
  if (j.contains("boundary")) {
    for (const json& b : j.at("boundary")) {
      const auto pair = as<std::vector<long>>(b, "boundary");
      if (pair.size() != 2 || pair[0] < 0 || pair[1] < 0) throw ValidationError("boundary entries must be [dim, orbit]");
      boundary.emplace_back(pair[0], static_cast<std::size_t>(pair[1]));
    }
  }
  return EquivariantComplex(group, vertices, std::move(simplices), std::move(fundamental), std::move(boundary));
}

ExhaustionSpec exhaustion_from(const json& j, const GroupPtr& group) {
  ExhaustionSpec spec;
  if (j.contains("folner")) {
    if (as<std::string>(j.at("folner"), "folner") != "box") throw ValidationError("only \"box\" Folner sets are built in");
    spec.box_k_max = as_size(field(j, "k_max"), "k_max");
    if (spec.box_k_max == 0) throw ValidationError("exhaustion is empty");
  } else if (j.contains("sets")) {
    for (const json& level : j.at("sets")) {
      std::vector<GroupElement> set;
      for (const json& g : level) set.push_back(element_from(g, *group));
      spec.sets.push_back(std::move(set));
    }
    if (spec.sets.empty()) throw ValidationError("exhaustion is empty");
  } else if (j.contains("levels")) {
    for (const json& level : j.at("levels")) {
      Region r;
      for (const json& s : level) {
        if (!s.is_array() || s.size() < 2 || s.size() > 3) throw ValidationError("cover simplex must be [dim, orbit, g]");
        r.insert(CoverSimplex{as<long>(s[0], "dim"), as_size(s[1], "orbit"),
                              element_from(s.size() == 3 ? s[2] : json(), *group)});
      }
      spec.levels.push_back(std::move(r));
    }
    if (spec.levels.empty()) throw ValidationError("exhaustion is empty");
  } else {
    throw ValidationError("exhaustion needs \"folner\", \"sets\" or \"levels\"");
  }
  return spec;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TowerSpec parse_tower(std::string_view text) {
  const json j = parse_json(text);
  TowerSpec spec;
  spec.group = group_from(j);
  if (j.contains("schedule")) spec.schedule = schedule_from(j.at("schedule"));
  return spec;
}

GroupTower build_tower(const TowerSpec& spec) {
  if (!spec.group) throw ValidationError("tower has no group");
  bool nested = true;
  for (std::size_t i = 1; i < spec.schedule.size(); ++i) {
    if (spec.schedule[i - 1] <= 0 || spec.schedule[i] % spec.schedule[i - 1] != 0) nested = false;
  }
  return make_tower(spec.group, spec.schedule, nested);
}

GroupRingMatrix parse_matrix(std::string_view text, const GroupPtr& group) { return matrix_from(parse_json(text), group); }

InputDocument parse_input(std::string_view text, GroupPtr group) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ValidationError("input must be a JSON object");
  InputDocument doc;
  if (j.contains("group")) {
    const json& g = j.at("group");
    if (!group) group = group_from(g);
    if (g.contains("schedule")) doc.schedule = schedule_from(g.at("schedule"));
  }
  if (!group) throw ValidationError("no group given (embed \"group\" or pass --tower)");
  doc.group = group;

  const int kinds = static_cast<int>(j.contains("differentials") || j.contains("ranks")) +
                    static_cast<int>(j.contains("form")) + static_cast<int>(j.contains("equivariant")) +
                    static_cast<int>(j.contains("operator"));
  if (kinds > 1) throw ValidationError("input describes more than one object");

  if (j.contains("ranks")) {
    const auto ranks = as<std::vector<std::size_t>>(j.at("ranks"), "ranks");
    if (j.contains("dim") && as_size(j.at("dim"), "dim") + 1 != ranks.size()) {
      throw ValidationError("\"dim\" does not match the number of ranks");
    }
    std::vector<GroupRingMatrix> diffs;
    if (j.contains("differentials")) diffs = matrices_from(j.at("differentials"), group, "differentials");
    doc.complex = FreeComplex(group, ranks, std::move(diffs));
    if (j.contains("duality")) {
      doc.symmetric = SymmetricComplex(*doc.complex, matrices_from(j.at("duality"), group, "duality"));
    }
  } else if (j.contains("differentials")) {
    throw ValidationError("missing field \"ranks\"");
  }
  if (j.contains("form")) {
    const json& f = j.at("form");
    AlgebraicForm form{matrix_from(field(f, "matrix"), group), f.contains("n") ? as_size(f.at("n"), "n") : 1};
    doc.symmetric = from_form(form);
    doc.complex = doc.symmetric->base();
  }
  if (j.contains("equivariant")) doc.equivariant = equivariant_from(j.at("equivariant"), group);
  if (j.contains("operator")) doc.operator_matrix = matrix_from(j.at("operator"), group);
  if (j.contains("exhaustion")) doc.exhaustion = exhaustion_from(j.at("exhaustion"), group);
  return doc;
}

std::vector<Region> resolve_exhaustion(const EquivariantComplex& e, const ExhaustionSpec& spec) {
  if (!spec.levels.empty()) {
    std::vector<Region> out;
    for (const auto& r : spec.levels) out.push_back(e.close(r));
    return out;
  }
  return folner_exhaustion(e, resolve_sets(*e.group(), spec));
}

std::vector<std::vector<GroupElement>> resolve_sets(const Group& group, const ExhaustionSpec& spec) {
  if (!spec.sets.empty()) return spec.sets;
  if (spec.box_k_max > 0) return box_sets(group, spec.box_k_max);
  throw ValidationError("exhaustion has no group sets");
}

std::string format_decimal(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string tower_csv(const TowerRun& run) {
  std::ostringstream out;
  out << "k,index,dim_k,b_plus_norm,b_minus_norm,b_zero_norm,sign_norm,oracle,oracle_bound,gap\n";
  const auto& oracle = run.summary.oracle;
  for (const auto& r : run.rows) {
    out << r.k << ',' << r.index << ',' << to_string(r.dim_k) << ',' << to_string(r.b_plus) << ','
        << to_string(r.b_minus) << ',' << to_string(r.b_zero) << ',' << to_string(r.sign) << ',';
    if (oracle) {
      out << format_decimal(oracle->value) << ',' << format_decimal(oracle->tolerance) << ','
          << format_decimal(std::fabs(static_cast<double>(to_long_double(r.sign)) - oracle->value));
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

std::string betti_csv(const BettiRun& run) {
  std::ostringstream out;
  const std::size_t degrees = run.rows.empty() ? 0 : run.rows.front().betti.size();
  out << "k,index";
  for (std::size_t p = 0; p < degrees; ++p) out << ",betti_" << p;
  for (std::size_t p = 0; p < run.oracle.size(); ++p) out << ",oracle_" << p << ",oracle_bound_" << p;
  out << '\n';
  for (const auto& r : run.rows) {
    out << r.k << ',' << r.index;
    for (const auto& b : r.betti) out << ',' << to_string(b);
    for (const auto& o : run.oracle) {
      if (o) {
        out << ',' << format_decimal(o->value) << ',' << format_decimal(o->tolerance);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string amenable_csv(const AmenableRun& run) {
  std::ostringstream out;
  const std::size_t degrees = run.rows.empty() ? 0 : run.rows.front().betti.size();
  out << "k,size,manifold_ok";
  for (std::size_t p = 0; p < degrees; ++p) out << ",betti_" << p;
  out << ",b_plus,b_minus,b_zero,sign_norm";
  for (std::size_t p = 0; p < run.betti_oracle.size(); ++p) out << ",oracle_" << p << ",oracle_bound_" << p;
  out << ",sign_oracle,sign_oracle_bound,note\n";
  for (const auto& r : run.rows) {
    out << r.k << ',' << r.size << ',' << (r.manifold_ok ? "true" : "false");
    for (std::size_t p = 0; p < degrees; ++p) out << ',' << (p < r.betti.size() ? to_string(r.betti[p]) : "");
    if (r.inertia) {
      out << ',' << r.inertia->positive << ',' << r.inertia->negative << ',' << r.inertia->zero << ','
          << to_string(r.sign);
    } else {
      out << ",,,,";
    }
    for (const auto& o : run.betti_oracle) {
      if (o) {
        out << ',' << format_decimal(o->value) << ',' << format_decimal(o->tolerance);
      } else {
        out << ",,";
      }
    }
    if (run.sign_oracle) {
      out << ',' << format_decimal(run.sign_oracle->value) << ',' << format_decimal(run.sign_oracle->tolerance);
    } else {
      out << ",,";
    }
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    out << ',' << note << '\n';
  }
  return out.str();
}

std::string operator_csv(const OperatorRun& run) {
  std::ostringstream out;
  out << "k,size,b_plus,b_minus,b_zero,sign_norm,betti_norm,oracle,oracle_bound,gap\n";
  for (const auto& r : run.rows) {
    out << r.k << ',' << r.size << ',' << r.inertia.positive << ',' << r.inertia.negative << ',' << r.inertia.zero
        << ',' << to_string(r.sign) << ',' << to_string(r.betti) << ',';
    if (run.oracle) {
      out << format_decimal(run.oracle->value) << ',' << format_decimal(run.oracle->tolerance) << ','
          << format_decimal(std::fabs(static_cast<double>(to_long_double(r.sign)) - run.oracle->value));
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace l2approx
