#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fibra/bundle.hpp"
#include "fibra/execution.hpp"
#include "fibra/relation.hpp"

namespace fibra {

using BasePair = std::pair<std::size_t, std::size_t>;

/// Fibered subset of source x target: a base correspondence plus, for every
/// base pair (x,y), a relation between the fibers over x and y.
class FiberedCorrespondence {
 public:
  /// Base pairs without an entry in `fibers` get the empty relation; an entry
  /// without its base pair, or with the wrong fibers, throws InvariantViolation.
  FiberedCorrespondence(Bundle source, Bundle target, Correspondence base,
                        std::map<BasePair, Correspondence> fibers = {});

  const Bundle& source() const noexcept { return source_; }
  const Bundle& target() const noexcept { return target_; }
  const Correspondence& base() const noexcept { return base_; }
  const std::map<BasePair, Correspondence>& fibers() const noexcept { return fibers_; }
  const Correspondence& fiber(std::size_t x, std::size_t y) const;

  friend bool operator==(const FiberedCorrespondence&,
                         const FiberedCorrespondence&) = default;

 private:
  Bundle source_;
  Bundle target_;
  Correspondence base_;
  std::map<BasePair, Correspondence> fibers_;
};

/// Fibered correspondence living over single base points: F_x relates the
/// fibers of source and target over the same x, for x in `domain`.
class ReducedFiberedCorrespondence {
 public:
  ReducedFiberedCorrespondence(Bundle source, Bundle target, Mask domain,
                               std::map<std::size_t, Correspondence> fibers = {});

  const Bundle& source() const noexcept { return source_; }
  const Bundle& target() const noexcept { return target_; }
  const FinSet& base() const noexcept { return source_.base(); }
  Mask domain() const noexcept { return domain_; }
  bool full_domain() const noexcept { return domain_ == base().all(); }
  const std::map<std::size_t, Correspondence>& fibers() const noexcept { return fibers_; }
  const Correspondence& fiber(std::size_t x) const;

  friend bool operator==(const ReducedFiberedCorrespondence&,
                         const ReducedFiberedCorrespondence&) = default;

 private:
  Bundle source_;
  Bundle target_;
  Mask domain_;
  std::map<std::size_t, Correspondence> fibers_;
};

/// n-ary relation in each fiber of a bundle.
class FiberedRelation {
 public:
  using Tuple = std::vector<std::size_t>;

  /// Throws ArityMismatch for arity 0 or a tuple of the wrong length and
  /// LabelMismatch for an element outside its fiber.
  FiberedRelation(Bundle bundle, std::size_t arity, std::vector<std::set<Tuple>> tuples);

  const Bundle& bundle() const noexcept { return bundle_; }
  std::size_t arity() const noexcept { return arity_; }
  const std::vector<std::set<Tuple>>& tuples() const noexcept { return tuples_; }

  friend bool operator==(const FiberedRelation&, const FiberedRelation&) = default;

 private:
  Bundle bundle_;
  std::size_t arity_;
  std::vector<std::set<Tuple>> tuples_;
};

/// The base correspondence is functional and injective.
bool base_is_injective_map(const FiberedCorrespondence& fc);

/// h after f. Both bases must be injective maps and f.target == h.source.
FiberedCorrespondence fibered_compose(const FiberedCorrespondence& h,
                                      const FiberedCorrespondence& f);
FiberedCorrespondence fibered_inverse(const FiberedCorrespondence& f);
FiberedCorrespondence fibered_diagonal(const Bundle& a);

/// Image of the subbundle `witness.sub` of f.source. Requires an injective
/// base and trivializations on both ends; throws SingularFiber when the fiber
/// relations (or the resulting image fibers) differ once carried to the
/// typical fibers.
Bundle image_of_subbundle(const FiberedCorrespondence& f, const SubbundleWitness& witness);

ReducedFiberedCorrespondence reduced_compose(const ReducedFiberedCorrespondence& h,
                                             const ReducedFiberedCorrespondence& f);
ReducedFiberedCorrespondence reduced_inverse(const ReducedFiberedCorrespondence& f);
ReducedFiberedCorrespondence reduced_diagonal(const Bundle& a);

/// Same base pairs (x,x), same fiber relations.
FiberedCorrespondence lift_of_diagonal(const ReducedFiberedCorrespondence& f);
/// Inverse of lift_of_diagonal; throws BaseMismatch unless the base
/// correspondence lies on the diagonal of a shared base.
ReducedFiberedCorrespondence reduce(const FiberedCorrespondence& f);

/// Pairs of sections (s,t) with (s(x),t(x)) in F_x everywhere. Both ends
/// are labelled with section_label. Requires a full domain.
Correspondence sections_correspondence(const ReducedFiberedCorrespondence& f,
                                       std::size_t max_enum = kDefaultMaxEnum,
                                       ExecPolicy policy = ExecPolicy::parallel);

enum class RelationProperty { transitive, symmetric, antisymmetric, reflexive };

std::optional<RelationProperty> parse_property(const std::string& name);
std::string to_string(RelationProperty p);

/// Evaluates the property through reduced_compose, reduced_inverse and the
/// fiberwise diagonal. Throws NotEndorelation or PartialDomain.
bool relation_is(const ReducedFiberedCorrespondence& r, RelationProperty property);

/// Witness that a property fails: the base point and the offending elements
/// (a triple for transitivity, a pair otherwise, one element for reflexivity).
struct Counterexample {
  Label point;
  std::vector<Label> elements;
};
std::optional<Counterexample> find_counterexample(const ReducedFiberedCorrespondence& r,
                                                  RelationProperty property);

struct Classification {
  bool transitive = false;
  bool symmetric = false;
  bool antisymmetric = false;
  bool reflexive = false;
  bool preordering = false;
  bool ordering = false;
  bool equivalence = false;

  /// Most specific classes, sorted: e.g. {"equivalence", "ordering"}, or
  /// {"preordering"}, or {"none"}.
  std::vector<std::string> names() const;
};

/// Also checks that the opposite of a preordering is a preordering.
Classification classify(const ReducedFiberedCorrespondence& r);

struct NaryReport {
  std::size_t arity = 0;
  std::size_t tuple_count = 0;
  /// For arity 2, the equivalent reduced correspondence (round trip checked).
  std::optional<ReducedFiberedCorrespondence> binary;
};

NaryReport nary_relation_check(const FiberedRelation& r);

ReducedFiberedCorrespondence to_reduced(const FiberedRelation& r);
FiberedRelation to_binary_relation(const ReducedFiberedCorrespondence& r);

}  // namespace fibra
