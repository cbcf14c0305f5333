#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fibra/bundle.hpp"
#include "fibra/fibered.hpp"
#include "fibra/topology.hpp"

namespace fibra {

/// Fibered morphism over the identity of a shared base: a total map
/// A_x -> B_x for every base point x.
class FiberedMorphism {
 public:
  FiberedMorphism(Bundle source, Bundle target, std::vector<std::vector<std::size_t>> maps);

  const Bundle& source() const noexcept { return source_; }
  const Bundle& target() const noexcept { return target_; }
  const std::vector<std::vector<std::size_t>>& maps() const noexcept { return maps_; }
  std::size_t operator()(std::size_t x, std::size_t a) const { return maps_[x][a]; }

  /// Map of total spaces (total index -> total index).
  std::vector<std::size_t> total_map() const;

  bool injective() const;
  bool surjective() const;
  bool bijective() const { return injective() && surjective(); }

  friend bool operator==(const FiberedMorphism&, const FiberedMorphism&) = default;

 private:
  Bundle source_;
  Bundle target_;
  std::vector<std::vector<std::size_t>> maps_;
};

/// `second` after `first`.
FiberedMorphism compose(const FiberedMorphism& second, const FiberedMorphism& first);

/// The morphism as a reduced fibered correspondence (its graph).
ReducedFiberedCorrespondence graph(const FiberedMorphism& f);

struct QuotientResult {
  /// Fibers hold class labels; a class is labelled by its least member.
  Bundle quotient;
  FiberedMorphism nat;
  /// classes[x] lists the classes of the fiber over x as masks of A_x,
  /// ordered by least member.
  std::vector<std::vector<Mask>> classes;
  /// Finest topology on the quotient total space making nat continuous;
  /// present when the bundle carries a total-space topology.
  std::optional<FiniteTopology> quotient_topology;
};

/// Quotient of `e` by a fibered equivalence `s` on it. Throws
/// NotAnEquivalence or PartialDomain.
QuotientResult quotient_bundle(const Bundle& e, const ReducedFiberedCorrespondence& s);

/// {(a,a') : f_x(a) = f_x(a')} in every fiber.
ReducedFiberedCorrespondence kernel_equivalence(const FiberedMorphism& f);

/// f = i t j with j the natural morphism onto A/S, t a fiberwise bijection
/// A/S -> f(A) and i the inclusion f(A) -> B.
struct Factorization {
  FiberedMorphism j;
  FiberedMorphism t;
  FiberedMorphism i;
};

Factorization factorize(const FiberedMorphism& f);

}  // namespace fibra
