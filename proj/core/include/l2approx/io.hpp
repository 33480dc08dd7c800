#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2approx/amenable.hpp"
#include "l2approx/chain.hpp"
#include "l2approx/equivariant.hpp"
#include "l2approx/quotient.hpp"

namespace l2approx {

/// Whole file as text; ValidationError when it cannot be read.
std::string read_text(const std::filesystem::path& path);

/**
 * Group descriptor, optionally with a schedule:
 *   {"kind":"free_abelian","rank":2,"schedule":[2,4,8]}
 *   {"kind":"finite","table":[[0,1],[1,0]],"generators":[1]}
 *   {"kind":"trivial"}
 * A schedule may also be {"linear":[first,last]} or {"power":k_max}.
 */
struct TowerSpec {
  GroupPtr group;
  std::vector<std::int64_t> schedule;
};

TowerSpec parse_tower(std::string_view text);

/// Nested when the moduli form a divisibility chain, otherwise one independent
/// finite cover per modulus.
GroupTower build_tower(const TowerSpec& spec);

/// {"rows":r,"cols":c,"entries":[[[{"g":...,"c":"p/q"},...],...],...]} in row-major order.
GroupRingMatrix parse_matrix(std::string_view text, const GroupPtr& group);

struct ExhaustionSpec {
  /// Box Folner sets {-k..k}^n for k = 1..k_max.
  std::size_t box_k_max = 0;
  /// Explicit Folner sets V_k.
  std::vector<std::vector<GroupElement>> sets;
  /// Explicit cover simplex lists per level, face-closed on load.
  std::vector<Region> levels;
};

/**
 * One input document. Every key is optional, but a document describes at
 * most one of: a free or symmetric complex ("dim"/"ranks"/"differentials"
 * with optional "duality", or "form":{"matrix":...,"n":1}), an equivariant
 * complex ("equivariant"), or a bare operator ("operator"). An embedded
 * "group" descriptor is used unless a group is supplied by the caller.
 */
struct InputDocument {
  GroupPtr group;
  std::vector<std::int64_t> schedule;
  std::optional<FreeComplex> complex;
  std::optional<SymmetricComplex> symmetric;
  std::optional<EquivariantComplex> equivariant;
  std::optional<GroupRingMatrix> operator_matrix;
  std::optional<ExhaustionSpec> exhaustion;
};

InputDocument parse_input(std::string_view text, GroupPtr group = nullptr);

/// Explicit levels, explicit sets, or box sets turned into face-closed regions.
std::vector<Region> resolve_exhaustion(const EquivariantComplex& e, const ExhaustionSpec& spec);
std::vector<std::vector<GroupElement>> resolve_sets(const Group& group, const ExhaustionSpec& spec);

/// Fixed-format decimal used for every floating column.
std::string format_decimal(double value);

/// k,index,dim_k,b_plus_norm,b_minus_norm,b_zero_norm,sign_norm,oracle,oracle_bound,gap
std::string tower_csv(const TowerRun& run);
/// k,index,betti_0..betti_N and, with an oracle, oracle_p/oracle_bound_p per degree.
std::string betti_csv(const BettiRun& run);
std::string amenable_csv(const AmenableRun& run);
std::string operator_csv(const OperatorRun& run);

}  // namespace l2approx
