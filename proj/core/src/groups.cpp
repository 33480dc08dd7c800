#include "l2approx/groups.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::string to_string(const GroupElement& g) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (i) out << ',';
    out << g.coords[i];
  }
  out << ')';
  return out.str();
}

Group Group::trivial() { return Group(); }

Group Group::finite(std::vector<std::vector<std::size_t>> table,
                    std::optional<std::vector<std::size_t>> generators) {
  const std::size_t n = table.size();
  if (n == 0) throw ValidationError("finite group table is empty");
  for (const auto& row : table) {
    if (row.size() != n) throw ValidationError("finite group table is not square");
    std::vector<bool> seen(n, false);
    for (std::size_t v : row) {
      if (v >= n) throw ValidationError("finite group table entry out of range");
      if (seen[v]) throw ValidationError("finite group table row is not a permutation");
      seen[v] = true;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<bool> seen(n, false);
    for (std::size_t a = 0; a < n; ++a) {
      if (seen[table[a][b]]) throw ValidationError("finite group table column is not a permutation");
      seen[table[a][b]] = true;
    }
  }
  std::optional<std::size_t> id;
  for (std::size_t e = 0; e < n && !id; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
    if (ok) id = e;
  }
  if (!id) throw ValidationError("finite group table has no identity");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw ValidationError("finite group table is not associative at (" + std::to_string(a) + "," +
                                std::to_string(b) + "," + std::to_string(c) + ")");
        }
      }
    }
  }

  Group g;
  g.kind_ = GroupKind::Finite;
  g.identity_id_ = *id;
  g.inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] == *id) g.inverse_[a] = b;
    }
  }
  std::vector<std::size_t> gens;
  if (generators) {
    gens = *generators;
  } else {
    for (std::size_t a = 0; a < n; ++a) {
      if (a != *id) gens.push_back(a);
    }
  }
  g.table_ = std::move(table);
  for (std::size_t s : gens) {
    if (s >= n) throw ValidationError("generator id out of range");
    g.generators_.push_back(GroupElement({static_cast<std::int64_t>(s)}));
  }

  // Word lengths by breadth-first search over generators and their inverses.
  g.finite_length_.assign(n, std::numeric_limits<std::size_t>::max());
  g.finite_length_[*id] = 0;
  std::deque<std::size_t> queue{*id};
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t s : gens) {
      for (std::size_t step : {s, g.inverse_[s]}) {
        const std::size_t y = g.table_[x][step];
        if (g.finite_length_[y] == std::numeric_limits<std::size_t>::max()) {
          g.finite_length_[y] = g.finite_length_[x] + 1;
          queue.push_back(y);
        }
      }
    }
  }
  for (std::size_t len : g.finite_length_) {
    if (len == std::numeric_limits<std::size_t>::max()) {
      throw ValidationError("declared generators do not generate the finite group");
    }
  }
  return g;
}

Group Group::free_abelian(std::size_t rank) {
  if (rank == 0) throw ValidationError("free abelian group needs rank >= 1");
  Group g;
  g.kind_ = GroupKind::FreeAbelian;
  g.rank_ = rank;
  for (std::size_t i = 0; i < rank; ++i) {
    std::vector<std::int64_t> e(rank, 0);
    e[i] = 1;
    g.generators_.emplace_back(std::move(e));
  }
  return g;
}

std::optional<std::size_t> Group::order() const {
  switch (kind_) {
    case GroupKind::Trivial:
      return 1;
    case GroupKind::Finite:
      return table_.size();
    case GroupKind::FreeAbelian:
      break;
  }
  return std::nullopt;
}

GroupElement Group::identity() const {
  switch (kind_) {
    case GroupKind::Trivial:
      return GroupElement();
    case GroupKind::Finite:
      return GroupElement({static_cast<std::int64_t>(identity_id_)});
    case GroupKind::FreeAbelian:
      break;
  }
  return GroupElement(std::vector<std::int64_t>(rank_, 0));
}

bool Group::contains(const GroupElement& g) const {
  switch (kind_) {
    case GroupKind::Trivial:
      return g.coords.empty();
    case GroupKind::Finite:
      return g.coords.size() == 1 && g.coords[0] >= 0 &&
             static_cast<std::size_t>(g.coords[0]) < table_.size();
    case GroupKind::FreeAbelian:
      break;
  }
  return g.coords.size() == rank_;
}

void Group::require(const GroupElement& g) const {
  if (!contains(g)) throw ValidationError("element " + to_string(g) + " is not in the group");
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  switch (kind_) {
    case GroupKind::Trivial:
      return GroupElement();
    case GroupKind::Finite:
      return GroupElement({static_cast<std::int64_t>(
          table_[static_cast<std::size_t>(a.coords[0])][static_cast<std::size_t>(b.coords[0])])});
    case GroupKind::FreeAbelian:
      break;
  }
  GroupElement r = a;
  for (std::size_t i = 0; i < rank_; ++i) r.coords[i] += b.coords[i];
  return r;
}

GroupElement Group::inverse(const GroupElement& g) const {
  switch (kind_) {
    case GroupKind::Trivial:
      return GroupElement();
    case GroupKind::Finite:
      return GroupElement({static_cast<std::int64_t>(inverse_[static_cast<std::size_t>(g.coords[0])])});
    case GroupKind::FreeAbelian:
      break;
  }
  GroupElement r = g;
  for (auto& c : r.coords) c = -c;
  return r;
}

std::size_t Group::word_length(const GroupElement& g) const {
  switch (kind_) {
    case GroupKind::Trivial:
      return 0;
    case GroupKind::Finite:
      return finite_length_[static_cast<std::size_t>(g.coords[0])];
    case GroupKind::FreeAbelian:
      break;
  }
  std::size_t len = 0;
  for (std::int64_t c : g.coords) len += static_cast<std::size_t>(c < 0 ? -c : c);
  return len;
}

std::vector<GroupElement> Group::elements() const {
  if (kind_ == GroupKind::FreeAbelian) throw ValidationError("cannot enumerate an infinite group");
  if (kind_ == GroupKind::Trivial) return {GroupElement()};
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < table_.size(); ++i) out.push_back(GroupElement({static_cast<std::int64_t>(i)}));
  return out;
}

std::vector<GroupElement> Group::ball(std::size_t radius) const {
  std::vector<GroupElement> out;
  if (kind_ != GroupKind::FreeAbelian) {
    for (auto& g : elements()) {
      if (word_length(g) <= radius) out.push_back(std::move(g));
    }
    return out;
  }
  const auto r = static_cast<std::int64_t>(radius);
  std::vector<std::int64_t> cur(rank_, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t budget) {
    if (i == rank_) {
      out.emplace_back(cur);
      return;
    }
    for (std::int64_t c = -budget; c <= budget; ++c) {
      cur[i] = c;
      rec(i + 1, budget - (c < 0 ? -c : c));
    }
    cur[i] = 0;
  };
  rec(0, r);
  return out;
}

TowerLevel::TowerLevel(GroupPtr group, std::size_t k, std::int64_t modulus)
    : group_(std::move(group)), k_(k), modulus_(modulus), order_(1) {
  if (group_->kind() == GroupKind::FreeAbelian) {
    if (modulus_ < 1) throw ValidationError("tower modulus must be >= 1");
    for (std::size_t i = 0; i < group_->rank(); ++i) order_ *= static_cast<std::size_t>(modulus_);
  } else {
    modulus_ = 0;
    order_ = *group_->order();
  }
}

std::size_t TowerLevel::project(const GroupElement& g) const {
  group_->require(g);
  switch (group_->kind()) {
    case GroupKind::Trivial:
      return 0;
    case GroupKind::Finite:
      return static_cast<std::size_t>(g.coords[0]);
    case GroupKind::FreeAbelian:
      break;
  }
  std::size_t index = 0;
  for (std::int64_t c : g.coords) {
    index = index * static_cast<std::size_t>(modulus_) + static_cast<std::size_t>(floor_mod(c, modulus_));
  }
  return index;
}

GroupElement TowerLevel::representative(std::size_t index) const {
  if (index >= order_) throw ValidationError("element is not in the quotient");
  switch (group_->kind()) {
    case GroupKind::Trivial:
      return GroupElement();
    case GroupKind::Finite:
      return GroupElement({static_cast<std::int64_t>(index)});
    case GroupKind::FreeAbelian:
      break;
  }
  std::vector<std::int64_t> c(group_->rank(), 0);
  for (std::size_t i = c.size(); i-- > 0;) {
    c[i] = static_cast<std::int64_t>(index % static_cast<std::size_t>(modulus_));
    index /= static_cast<std::size_t>(modulus_);
  }
  return GroupElement(std::move(c));
}

std::size_t TowerLevel::multiply(std::size_t a, std::size_t b) const {
  if (group_->kind() != GroupKind::FreeAbelian) {
    if (group_->kind() == GroupKind::Trivial) return 0;
    return group_->table()[a][b];
  }
  return project(group_->multiply(representative(a), representative(b)));
}

std::size_t TowerLevel::inverse(std::size_t a) const {
  return project(group_->inverse(representative(a)));
}

std::size_t TowerLevel::identity() const { return project(group_->identity()); }

QMatrix TowerLevel::regular_representation(std::size_t h) const {
  if (h >= order_) throw ValidationError("element is not in the quotient");
  QMatrix p(order_, order_);
  for (std::size_t x = 0; x < order_; ++x) p.set(x, multiply(x, h), 1);
  return p;
}

GroupTower make_tower(GroupPtr group, const std::vector<std::int64_t>& schedule, bool require_nesting) {
  if (schedule.empty()) throw ValidationError("tower schedule is empty");
  std::vector<TowerLevel> levels;
  if (group->kind() != GroupKind::FreeAbelian) {
    for (std::size_t k = 1; k <= schedule.size(); ++k) levels.emplace_back(group, k, 0);
    return GroupTower(std::move(group), std::move(levels), true);
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::int64_t m = schedule[i];
    if (m < 1) throw ValidationError("tower modulus must be >= 1");
    if (i > 0) {
      const std::int64_t prev = schedule[i - 1];
      if (m <= prev) throw ValidationError("tower schedule must be strictly increasing");
      if (require_nesting && m % prev != 0) {
        throw ValidationError("tower schedule is not a divisibility chain: " + std::to_string(prev) +
                              " does not divide " + std::to_string(m));
      }
    }
    const std::size_t label = require_nesting ? i + 1 : static_cast<std::size_t>(m);
    levels.emplace_back(group, label, m);
  }
  return GroupTower(std::move(group), std::move(levels), require_nesting);
}

std::vector<std::int64_t> power_schedule(std::size_t k_max) {
  std::vector<std::int64_t> out;
  for (std::size_t k = 1; k <= k_max; ++k) out.push_back(std::int64_t{1} << k);
  return out;
}

std::vector<std::int64_t> linear_schedule(std::int64_t first, std::int64_t last) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = first; k <= last; ++k) out.push_back(k);
  return out;
}

std::size_t descend(const TowerLevel& fine, const TowerLevel& coarse, std::size_t index) {
  if (fine.group() != coarse.group() && !(*fine.group() == *coarse.group())) {
    throw ValidationError("levels belong to different groups");
  }
  if (coarse.modulus() != 0 && fine.modulus() % coarse.modulus() != 0) {
    throw ValidationError("coarse level does not factor through the fine level");
  }
  return coarse.project(fine.representative(index));
}

}  // namespace l2approx
