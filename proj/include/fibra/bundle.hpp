#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fibra/finset.hpp"
#include "fibra/topology.hpp"

namespace fibra {

/// Charts from the fibers onto one typical fiber. A point without a chart is
/// allowed (and reported by degenerate_fibers); every chart present must be
/// a bijection.
struct Trivialization {
  FinSet typical;
  /// charts[x][a] = typical index of the a-th element of the fiber over x.
  std::vector<std::optional<std::vector<std::size_t>>> charts;

  friend bool operator==(const Trivialization&, const Trivialization&) = default;
};

/// Points of the total space, labelled "(x,a)" and indexed canonically.
struct TotalSpace {
  FinSet set;
  /// (base index, fiber index) for each total-space index.
  std::vector<std::pair<std::size_t, std::size_t>> points;
  /// index[x][a] = total-space index.
  std::vector<std::vector<std::size_t>> index;
  /// total-space index -> base index.
  std::vector<std::size_t> projection;
};

class Bundle {
 public:
  Bundle() = default;
  Bundle(Label name, FinSet base, std::vector<FinSet> fibers,
         std::optional<Trivialization> trivialization = std::nullopt,
         std::optional<FiniteTopology> base_topology = std::nullopt,
         std::optional<FiniteTopology> total_topology = std::nullopt);

  const Label& name() const noexcept { return name_; }
  const FinSet& base() const noexcept { return base_; }
  const FinSet& fiber(std::size_t x) const { return fibers_.at(x); }
  const std::vector<FinSet>& fibers() const noexcept { return fibers_; }
  const std::optional<Trivialization>& trivialization() const noexcept {
    return trivialization_;
  }
  const std::optional<FiniteTopology>& base_topology() const noexcept {
    return base_topology_;
  }
  const std::optional<FiniteTopology>& total_topology() const noexcept {
    return total_topology_;
  }

  /// Chart at x; throws MissingTrivialization when there is none.
  const std::vector<std::size_t>& chart(std::size_t x) const;
  TotalSpace total_space() const;

  Bundle renamed(Label name) const;

  /// Structural equality; the name is not compared.
  friend bool operator==(const Bundle& a, const Bundle& b);

 private:
  Label name_;
  FinSet base_;
  std::vector<FinSet> fibers_;
  std::optional<Trivialization> trivialization_;
  std::optional<FiniteTopology> base_topology_;
  std::optional<FiniteTopology> total_topology_;
};

/// A total choice of one fiber element per base point.
struct Section {
  std::vector<std::size_t> choice;  // choice[x] indexes fiber(x)

  friend bool operator==(const Section&, const Section&) = default;
  friend auto operator<=>(const Section&, const Section&) = default;
};

/// Label of a section: the tuple of chosen fiber labels in base order.
Label section_label(const Bundle& b, const Section& s);

/// Identity-style injections exhibiting `sub` inside `super`.
struct SubbundleWitness {
  Bundle sub;
  Bundle super;
  std::vector<std::size_t> base_injection;
  std::vector<std::vector<std::size_t>> fiber_injections;

  /// Injectivity, fiber membership and commuting projections.
  bool valid() const;
};

/// Witness for sub inside super, matching labels; throws NotContained naming
/// the first base point or fiber element missing from super.
SubbundleWitness is_subbundle(const Bundle& sub, const Bundle& super);

/// outer: B inside C, inner: A inside B; result A inside C.
SubbundleWitness compose_witness(const SubbundleWitness& outer,
                                 const SubbundleWitness& inner);

/// Base a.base x b.base, fiber A_x x B_y over (x,y).
Bundle product(const Bundle& a, const Bundle& b);

/// Shared base, fiber A_x x B_x. Throws BaseMismatch.
Bundle reduced_product(const Bundle& a, const Bundle& b);

inline constexpr std::size_t kDefaultMaxEnum = 1'000'000;

/// Product of the fiber sizes, saturating at SIZE_MAX.
std::size_t section_count(const Bundle& a);

/// All sections in lexicographic order of their choice vectors. Throws
/// EmptyFiber naming the point, EnumerationBound when the count exceeds
/// `max_enum`.
std::vector<Section> sections(const Bundle& a, std::size_t max_enum = kDefaultMaxEnum);

/// Points whose fiber size differs from the strict-majority size (every
/// point when no strict majority exists), plus points lacking a chart.
Mask degenerate_fibers(const Bundle& a);

}  // namespace fibra
