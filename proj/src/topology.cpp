#include "fibra/topology.hpp"

#include <algorithm>

#include "fibra/error.hpp"

namespace fibra {

namespace {

std::string mask_text(const FinSet& s, Mask m) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : s.labels_of(m)) {
    if (!first) out += ',';
    out += l;
    first = false;
  }
  return out + "}";
}

void require_filter_capacity(const FinSet& points) {
  if (points.size() > kMaxFilterPoints) {
    fail(ErrorCode::CapacityExceeded,
         "filters are stored explicitly and limited to 20 points");
  }
}

}  // namespace

FiniteTopology::FiniteTopology(FinSet points, std::vector<Mask> opens)
    : points_(std::move(points)), opens_(std::move(opens)) {
  std::sort(opens_.begin(), opens_.end());
  opens_.erase(std::unique(opens_.begin(), opens_.end()), opens_.end());
  const Mask all = points_.all();
  for (Mask u : opens_) {
    if (!is_subset(u, all)) {
      fail(ErrorCode::InvalidTopology, "open set names a point outside the space");
    }
  }
  if (!std::binary_search(opens_.begin(), opens_.end(), Mask{0})) {
    fail(ErrorCode::InvalidTopology, "the empty set must be open");
  }
  if (!std::binary_search(opens_.begin(), opens_.end(), all)) {
    fail(ErrorCode::InvalidTopology, "the whole space must be open");
  }
  for (std::size_t i = 0; i < opens_.size(); ++i) {
    for (std::size_t j = i + 1; j < opens_.size(); ++j) {
      const Mask u = opens_[i] | opens_[j];
      const Mask n = opens_[i] & opens_[j];
      if (!std::binary_search(opens_.begin(), opens_.end(), u)) {
        fail(ErrorCode::InvalidTopology,
             "union " + mask_text(points_, u) + " is not open");
      }
      if (!std::binary_search(opens_.begin(), opens_.end(), n)) {
        fail(ErrorCode::InvalidTopology,
             "intersection " + mask_text(points_, n) + " is not open");
      }
    }
  }
}

FiniteTopology FiniteTopology::discrete(FinSet points) {
  if (points.size() > kMaxFilterPoints) {
    fail(ErrorCode::CapacityExceeded, "discrete topology too large to list");
  }
  std::vector<Mask> opens;
  for (Mask m = 0; m <= points.all(); ++m) opens.push_back(m);
  return FiniteTopology(std::move(points), std::move(opens));
}

FiniteTopology FiniteTopology::indiscrete(FinSet points) {
  const Mask all = points.all();
  return FiniteTopology(std::move(points), {Mask{0}, all});
}

bool FiniteTopology::is_open(Mask m) const {
  return std::binary_search(opens_.begin(), opens_.end(), m);
}

Mask FiniteTopology::smallest_open_containing(Mask m) const {
  Mask out = points_.all();
  for (Mask u : opens_)
    if (is_subset(m, u)) out &= u;
  return out;
}

void FiniteTopology::check_subset(Mask m) const {
  if (!is_subset(m, points_.all())) {
    fail(ErrorCode::SpaceMismatch, "subset refers to points outside the space");
  }
}

std::vector<FiniteTopology> enumerate_topologies(const FinSet& points) {
  const std::size_t n = points.size();
  if (n > 8) {
    fail(ErrorCode::CapacityExceeded, "topology enumeration limited to 8 points");
  }
  // up[i] = points j with i <= j. Preorders on k+1 points extend those on
  // k points by a down-closed set D and an up-closed set U of old points
  // with d <= u for all d in D, u in U.
  using Preorder = std::vector<Mask>;
  std::vector<Preorder> layer{Preorder{}};
  for (std::size_t k = 0; k < n; ++k) {
    const Mask old_all = full_mask(k);
    std::vector<Preorder> next;
    for (const auto& up : layer) {
      std::vector<Mask> up_closed;
      std::vector<Mask> down_closed;
      for (Mask s = 0; s <= old_all; ++s) {
        bool up_ok = true;
        bool down_ok = true;
        for (std::size_t i = 0; i < k; ++i) {
          if (contains(s, i) && !is_subset(up[i], s)) up_ok = false;
          // down-closed: j <= i, i in s implies j in s
          if (!contains(s, i) && (up[i] & s) != 0) down_ok = false;
        }
        if (up_ok) up_closed.push_back(s);
        if (down_ok) down_closed.push_back(s);
      }
      for (Mask d : down_closed) {
        for (Mask u : up_closed) {
          bool ok = true;
          for_each_bit(d, [&](std::size_t i) {
            if (!is_subset(u, up[i])) ok = false;
          });
          if (!ok) continue;
          Preorder ext = up;
          for_each_bit(d, [&](std::size_t i) { ext[i] |= bit(k); });
          ext.push_back(u | bit(k));
          next.push_back(std::move(ext));
        }
      }
    }
    layer = std::move(next);
  }

  std::vector<FiniteTopology> out;
  out.reserve(layer.size());
  for (const auto& up : layer) {
    std::vector<Mask> opens;
    for (Mask s = 0; s <= points.all(); ++s) {
      bool open = true;
      for_each_bit(s, [&](std::size_t i) {
        if (!is_subset(up[i], s)) open = false;
      });
      if (open) opens.push_back(s);
    }
    out.emplace_back(points, std::move(opens));
  }
  return out;
}

Mask preimage(std::span<const std::size_t> map, Mask target) {
  Mask out = 0;
  for (std::size_t i = 0; i < map.size(); ++i)
    if (contains(target, map[i])) out |= bit(i);
  return out;
}

bool is_continuous_map(std::span<const std::size_t> map,
                       const FiniteTopology& src, const FiniteTopology& dst) {
  if (map.size() != src.points().size()) {
    fail(ErrorCode::SpaceMismatch, "map domain differs from the source space");
  }
  return std::all_of(dst.opens().begin(), dst.opens().end(), [&](Mask v) {
    return src.is_open(preimage(map, v));
  });
}

Filter::Filter(FiniteTopology space, std::vector<bool> table, Unchecked)
    : space_(std::move(space)), table_(std::move(table)) {}

Filter::Filter(FiniteTopology space, std::span<const Mask> members)
    : space_(std::move(space)) {
  require_filter_capacity(space_.points());
  const Mask all = space_.points().all();
  table_.assign(static_cast<std::size_t>(all) + 1, false);
  if (members.empty()) fail(ErrorCode::InvalidFilter, "a filter is nonempty");
  for (Mask m : members) {
    space_.check_subset(m);
    if (m == 0) fail(ErrorCode::InvalidFilter, "a proper filter omits the empty set");
    table_[m] = true;
  }
  const auto listed = this->members();
  for (Mask m : listed) {
    for (std::size_t i = 0; i < space_.points().size(); ++i) {
      if (!table_[m | bit(i)]) {
        fail(ErrorCode::InvalidFilter, "filter is not upward closed");
      }
    }
    for (Mask other : listed) {
      if (!table_[m & other]) {
        fail(ErrorCode::InvalidFilter, "filter is not closed under intersection");
      }
    }
  }
}

Filter Filter::principal(FiniteTopology space, Mask generator) {
  require_filter_capacity(space.points());
  space.check_subset(generator);
  if (generator == 0) {
    fail(ErrorCode::InvalidFilter, "principal filter of the empty set is improper");
  }
  std::vector<bool> table(static_cast<std::size_t>(space.points().all()) + 1);
  for (Mask s = 0; s < table.size(); ++s) table[s] = is_subset(generator, s);
  return Filter(std::move(space), std::move(table), Unchecked{});
}

bool Filter::contains(Mask m) const { return m < table_.size() && table_[m]; }

std::vector<Mask> Filter::members() const {
  std::vector<Mask> out;
  for (Mask s = 0; s < table_.size(); ++s)
    if (table_[s]) out.push_back(s);
  return out;
}

bool Filter::coarser_than(const Filter& other) const {
  if (!(space_ == other.space_)) {
    fail(ErrorCode::SpaceMismatch, "filters live on different spaces");
  }
  for (Mask s = 0; s < table_.size(); ++s)
    if (table_[s] && !other.table_[s]) return false;
  return true;
}

FilterBase::FilterBase(FiniteTopology space, std::vector<Mask> sets)
    : space_(std::move(space)), sets_(std::move(sets)) {
  require_filter_capacity(space_.points());
  std::sort(sets_.begin(), sets_.end());
  sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
  if (sets_.empty()) fail(ErrorCode::InvalidFilter, "a filter base is nonempty");
  for (Mask s : sets_) {
    space_.check_subset(s);
    if (s == 0) fail(ErrorCode::InvalidFilter, "filter base sets are nonempty");
  }
  for (Mask a : sets_) {
    for (Mask b : sets_) {
      const bool refined = std::any_of(sets_.begin(), sets_.end(),
                                       [&](Mask c) { return is_subset(c, a & b); });
      if (!refined) {
        fail(ErrorCode::InvalidFilter,
             "two base sets contain no common base set");
      }
    }
  }
}

Filter FilterBase::generated_filter() const {
  std::vector<bool> table(static_cast<std::size_t>(space_.points().all()) + 1);
  for (Mask s = 0; s < table.size(); ++s) {
    table[s] = std::any_of(sets_.begin(), sets_.end(),
                           [&](Mask b) { return is_subset(b, s); });
  }
  return Filter(space_, std::move(table), Filter::Unchecked{});
}

Filter neighborhood_filter(const FiniteTopology& space, Mask target) {
  space.check_subset(target);
  if (target == 0) {
    fail(ErrorCode::EmptyTarget,
         "the neighborhoods of the empty set form no proper filter");
  }
  require_filter_capacity(space.points());
  std::vector<bool> table(static_cast<std::size_t>(space.points().all()) + 1);
  for (Mask u : space.opens()) {
    if (!is_subset(target, u)) continue;
    for (Mask v = 0; v < table.size(); ++v)
      if (is_subset(u, v)) table[v] = true;
  }
  return Filter(space, std::move(table), Filter::Unchecked{});
}

bool filter_converges(const Filter& f, Mask target) {
  f.space().check_subset(target);
  const Filter nbhd = neighborhood_filter(f.space(), target);
  return nbhd.coarser_than(f);
}

bool filterbase_converges(const FilterBase& b, Mask target) {
  b.space().check_subset(target);
  const Filter nbhd = neighborhood_filter(b.space(), target);
  const auto neighborhoods = nbhd.members();
  const bool direct =
      std::all_of(neighborhoods.begin(), neighborhoods.end(), [&](Mask v) {
        return std::any_of(b.sets().begin(), b.sets().end(),
                           [&](Mask s) { return is_subset(s, v); });
      });
  if (direct != filter_converges(b.generated_filter(), target)) {
    fail(ErrorCode::InvariantViolation,
         "filter base convergence disagrees with its generated filter");
  }
  return direct;
}

}  // namespace fibra
