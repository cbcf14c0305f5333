#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fibra/bundle.hpp"
#include "fibra/execution.hpp"
#include "fibra/fibered.hpp"
#include "fibra/quotient.hpp"

namespace fibra {

class FiniteGroup {
 public:
  /// table[g][h] = gh. Verifies closure, associativity, identity and inverses.
  FiniteGroup(FinSet elements, std::vector<std::vector<std::size_t>> table,
              std::size_t identity);

  const FinSet& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t mul(std::size_t g, std::size_t h) const { return table_[g][h]; }
  std::size_t inv(std::size_t g) const { return inverse_[g]; }
  const std::vector<std::vector<std::size_t>>& table() const noexcept { return table_; }

  /// Closure, identity and inverses of an element set.
  bool is_subgroup(Mask m) const;

  friend bool operator==(const FiniteGroup&, const FiniteGroup&) = default;

 private:
  FinSet elements_;
  std::vector<std::vector<std::size_t>> table_;
  std::size_t identity_;
  std::vector<std::size_t> inverse_;
};

/// Z/n with elements "0".."n-1" (n <= 10 keeps the labels single digits).
FiniteGroup cyclic_group(std::size_t n);

/// One group shared by every fiber over the base.
struct FiberedGroup {
  FinSet base;
  FiniteGroup group;

  friend bool operator==(const FiberedGroup&, const FiberedGroup&) = default;
};

/// Fiberwise left action of a fibered group on a bundle over the same base.
class TstarRepresentation {
 public:
  /// action[x][g][e] = g . e in the fiber over x. Verifies the identity
  /// acts trivially, g.(h.e) = (gh).e, and each g permutes the fiber.
  TstarRepresentation(FiberedGroup group_bundle, Bundle space,
                      std::vector<std::vector<std::vector<std::size_t>>> action);

  const FiberedGroup& group_bundle() const noexcept { return group_bundle_; }
  const FiniteGroup& group() const noexcept { return group_bundle_.group; }
  const Bundle& space() const noexcept { return space_; }
  std::size_t act(std::size_t x, std::size_t g, std::size_t e) const {
    return action_[x][g][e];
  }
  const std::vector<std::vector<std::vector<std::size_t>>>& action() const noexcept {
    return action_;
  }

  friend bool operator==(const TstarRepresentation&, const TstarRepresentation&) = default;

 private:
  FiberedGroup group_bundle_;
  Bundle space_;
  std::vector<std::vector<std::vector<std::size_t>>> action_;
};

/// Ordered bundles E_1, ..., E_n where E_1 lies over the base M and the base
/// of E_{k+1} is the total space of E_k.
struct Tower {
  std::vector<Bundle> levels;
};

/// {g : g.e = e} at base point x. Throws UnknownPoint / UnknownElement.
Mask stabilizer(const TstarRepresentation& rep, std::size_t x, std::size_t e);

using GroupSection = std::vector<std::size_t>;  // group element per base point

/// Sections g of the group bundle with g(x).h(x) = h(x) everywhere, in
/// lexicographic order. Enumerates all |G|^|M| sections; throws
/// EnumerationBound above `max_enum`, SectionMismatch for a bad `h`.
std::vector<GroupSection> little_group(const TstarRepresentation& rep, const Section& h,
                                       std::size_t max_enum = kDefaultMaxEnum,
                                       ExecPolicy policy = ExecPolicy::parallel);

/// Every stabilizer of every fiber element is trivial.
bool is_free(const TstarRepresentation& rep);

/// (p,q) in S_x iff some g sends p to q.
ReducedFiberedCorrespondence orbit_equivalence(const TstarRepresentation& rep,
                                               ExecPolicy policy = ExecPolicy::parallel);

struct DegenerateClass {
  std::size_t point;
  Label label;       // least member of the class
  std::size_t size;  // differs from |G|
};

/// For a free action: g -> g . label(class) is a bijection G -> class.
struct OrbitBijection {
  std::size_t point;
  Label label;
  std::vector<std::size_t> element_of;  // element_of[g] indexes the fiber
};

struct OrbitQuotient {
  QuotientResult quotient;
  /// E -> E/S -> M, levels bottom-up.
  Tower level2;
  bool free = false;
  std::vector<OrbitBijection> bijections;
  std::vector<DegenerateClass> degenerate;
  /// degenerate_fibers of the quotient bundle (base points).
  Mask degenerate_points = 0;
};

OrbitQuotient orbit_quotient(const TstarRepresentation& rep,
                             ExecPolicy policy = ExecPolicy::parallel);

/// Level-2 bundle with base the total space of `lower`; fiber over (x,c) is
/// the class c of the fiber over x.
Bundle level_bundle(const QuotientResult& q);

/// Throws BrokenChain naming the first level whose base is not the total
/// space of the level below.
void tower_validate(const Tower& t);

/// Projection from the total space of level `from` to level `to` (level 0 is
/// the base M), as an index map. Requires to < from <= levels.
std::vector<std::size_t> tower_project(const Tower& t, std::size_t from, std::size_t to);

}  // namespace fibra
