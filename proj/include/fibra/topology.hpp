#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fibra/finset.hpp"

namespace fibra {

/// A topology on a finite point set, given by its complete family of open
/// sets. Construction rejects families that are not closed under union and
/// intersection or lack the empty set or the whole space.
class FiniteTopology {
 public:
  FiniteTopology(FinSet points, std::vector<Mask> opens);

  static FiniteTopology discrete(FinSet points);
  static FiniteTopology indiscrete(FinSet points);

  const FinSet& points() const noexcept { return points_; }
  /// Sorted ascending, no duplicates.
  const std::vector<Mask>& opens() const noexcept { return opens_; }
  bool is_open(Mask m) const;
  /// Smallest open set containing `m` (intersection of all such opens).
  Mask smallest_open_containing(Mask m) const;
  /// Throws SpaceMismatch when `m` names indices past the point set.
  void check_subset(Mask m) const;

  friend bool operator==(const FiniteTopology&, const FiniteTopology&) = default;

 private:
  FinSet points_;
  std::vector<Mask> opens_;
};

/// All topologies on `points`, obtained from the preorders on the point set
/// (a finite topology is the family of up-sets of its specialization
/// preorder). Practical up to about seven points.
std::vector<FiniteTopology> enumerate_topologies(const FinSet& points);

/// Preimage of `target` under an index map src -> dst.
Mask preimage(std::span<const std::size_t> map, Mask target);

/// Continuity of an ordinary map between finite spaces.
bool is_continuous_map(std::span<const std::size_t> map,
                       const FiniteTopology& src, const FiniteTopology& dst);

inline constexpr std::size_t kMaxFilterPoints = 20;

/// Proper filter on a finite space, stored as its explicit membership table.
class Filter {
 public:
  /// Validates: nonempty, proper, upward closed, closed under intersection.
  Filter(FiniteTopology space, std::span<const Mask> members);

  /// All supersets of a nonempty set.
  static Filter principal(FiniteTopology space, Mask generator);

  const FiniteTopology& space() const noexcept { return space_; }
  bool contains(Mask m) const;
  /// Members in ascending mask order.
  std::vector<Mask> members() const;
  /// Every member of `*this` is a member of `other`.
  bool coarser_than(const Filter& other) const;

  friend bool operator==(const Filter& a, const Filter& b) {
    return a.space_ == b.space_ && a.table_ == b.table_;
  }

 private:
  struct Unchecked {};
  Filter(FiniteTopology space, std::vector<bool> table, Unchecked);
  friend class FilterBase;
  friend Filter neighborhood_filter(const FiniteTopology& space, Mask target);

  FiniteTopology space_;
  std::vector<bool> table_;  // indexed by mask
};

/// Nonempty family of nonempty sets, any two of which contain a third.
class FilterBase {
 public:
  FilterBase(FiniteTopology space, std::vector<Mask> sets);

  const FiniteTopology& space() const noexcept { return space_; }
  const std::vector<Mask>& sets() const noexcept { return sets_; }
  /// Upward closure of the base.
  Filter generated_filter() const;

 private:
  FiniteTopology space_;
  std::vector<Mask> sets_;
};

/// Filter of all sets containing an open set that contains `target`.
Filter neighborhood_filter(const FiniteTopology& space, Mask target);

/// `f` is finer than the neighborhood filter of `target`.
bool filter_converges(const Filter& f, Mask target);

/// Every neighborhood of `target` contains a set of the base. Cross-checked
/// against convergence of the generated filter; disagreement throws.
bool filterbase_converges(const FilterBase& b, Mask target);

}  // namespace fibra
