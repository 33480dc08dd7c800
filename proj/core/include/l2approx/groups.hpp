#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/matrix.hpp"

namespace l2approx {

/// Exponent vector for free abelian groups, a single element id for finite
/// groups, and empty for the trivial group.
struct GroupElement {
  std::vector<std::int64_t> coords;

  GroupElement() = default;
  explicit GroupElement(std::vector<std::int64_t> c) : coords(std::move(c)) {}

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

std::string to_string(const GroupElement& g);

enum class GroupKind { Trivial, Finite, FreeAbelian };

class Group {
 public:
  static Group trivial();
  /// `table[a][b]` is the id of a*b. Throws ValidationError unless the table
  /// defines a group. Generators default to every non-identity element.
  static Group finite(std::vector<std::vector<std::size_t>> table,
                      std::optional<std::vector<std::size_t>> generators = std::nullopt);
  /// Z^rank with the standard basis vectors as generators.
  static Group free_abelian(std::size_t rank);

  GroupKind kind() const { return kind_; }
  std::size_t rank() const { return rank_; }
  /// Order of a finite or trivial group; nullopt for free abelian groups.
  std::optional<std::size_t> order() const;
  bool is_finite() const { return kind_ != GroupKind::FreeAbelian; }

  GroupElement identity() const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& g) const;
  bool contains(const GroupElement& g) const;
  /// Throws ValidationError when `g` is not an element of this group.
  void require(const GroupElement& g) const;

  const std::vector<GroupElement>& generators() const { return generators_; }
  std::size_t word_length(const GroupElement& g) const;
  /// All elements of word length <= radius, in increasing order.
  std::vector<GroupElement> ball(std::size_t radius) const;
  /// All elements of a finite group in id order.
  std::vector<GroupElement> elements() const;

  const std::vector<std::vector<std::size_t>>& table() const { return table_; }

  friend bool operator==(const Group& a, const Group& b) {
    return a.kind_ == b.kind_ && a.rank_ == b.rank_ && a.table_ == b.table_;
  }

 private:
  GroupKind kind_ = GroupKind::Trivial;
  std::size_t rank_ = 0;
  std::size_t identity_id_ = 0;
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> finite_length_;
  std::vector<GroupElement> generators_;
};

using GroupPtr = std::shared_ptr<const Group>;

/**
 * One finite quotient G_k of a tower. Elements of G_k are represented by
 * their position in a fixed lexicographic enumeration; for (Z/m)^n the
 * position of x is sum_i (x_i mod m) m^(n-1-i).
 */
class TowerLevel {
 public:
  TowerLevel(GroupPtr group, std::size_t k, std::int64_t modulus);

  const GroupPtr& group() const { return group_; }
  std::size_t k() const { return k_; }
  /// m_k for free abelian groups, 0 for finite and trivial groups.
  std::int64_t modulus() const { return modulus_; }
  /// |G_k| = [Gamma : Gamma_k].
  std::size_t order() const { return order_; }

  std::size_t project(const GroupElement& g) const;
  std::size_t multiply(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  std::size_t identity() const;
  /// Coset representative of the enumerated element.
  GroupElement representative(std::size_t index) const;

  /// Permutation matrix of right multiplication by h: entry (x, x*h) = 1.
  QMatrix regular_representation(std::size_t h) const;

 private:
  GroupPtr group_;
  std::size_t k_;
  std::int64_t modulus_;
  std::size_t order_;
};

class GroupTower {
 public:
  GroupTower(GroupPtr group, std::vector<TowerLevel> levels, bool nested)
      : group_(std::move(group)), levels_(std::move(levels)), nested_(nested) {}

  const GroupPtr& group() const { return group_; }
  const std::vector<TowerLevel>& levels() const { return levels_; }
  bool nested() const { return nested_; }

 private:
  GroupPtr group_;
  std::vector<TowerLevel> levels_;
  bool nested_;
};

/**
 * Builds the tower of quotients (Z/m_k)^n for a free abelian group.
 *
 * With `require_nesting` the moduli must form a strictly increasing
 * divisibility chain. Without it any strictly increasing list is accepted
 * (levels are then independent finite covers, labelled by their modulus).
 * Finite and trivial groups give the constant tower with schedule.size()
 * levels. Throws ValidationError on an empty or invalid schedule.
 */
GroupTower make_tower(GroupPtr group, const std::vector<std::int64_t>& schedule,
                      bool require_nesting = true);

/// Default schedule m_k = 2^k for k = 1..k_max.
std::vector<std::int64_t> power_schedule(std::size_t k_max);
/// m_k = k for k = first..last.
std::vector<std::int64_t> linear_schedule(std::int64_t first, std::int64_t last);

/// Image of a fine-level element under G_fine -> G_coarse (coarse modulus must
/// divide the fine one).
std::size_t descend(const TowerLevel& fine, const TowerLevel& coarse, std::size_t index);

}  // namespace l2approx
