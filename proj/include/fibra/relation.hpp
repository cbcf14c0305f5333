#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fibra/finset.hpp"
#include "fibra/topology.hpp"

namespace fibra {

/// A subset of source x target. Row i holds the targets related to the
/// i-th source label.
class Correspondence {
 public:
  Correspondence() = default;
  /// Empty correspondence.
  Correspondence(FinSet source, FinSet target);
  Correspondence(FinSet source, FinSet target, std::vector<Mask> rows);
  /// Throws LabelMismatch when a pair leaves source x target.
  Correspondence(FinSet source, FinSet target,
                 const std::vector<std::pair<Label, Label>>& pairs);

  const FinSet& source() const noexcept { return source_; }
  const FinSet& target() const noexcept { return target_; }
  const std::vector<Mask>& rows() const noexcept { return rows_; }
  Mask row(std::size_t i) const { return rows_[i]; }

  bool relates(std::size_t a, std::size_t b) const {
    return contains(rows_[a], b);
  }
  bool empty() const noexcept;
  std::size_t size() const noexcept;
  /// Index pairs in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  std::vector<std::pair<Label, Label>> label_pairs() const;
  /// Targets related to something; sources related to something.
  Mask range() const noexcept;
  Mask domain() const noexcept;

  friend bool operator==(const Correspondence&, const Correspondence&) = default;

 private:
  FinSet source_;
  FinSet target_;
  std::vector<Mask> rows_;
};

Correspondence restrict(const Correspondence& phi, Mask c);
Mask image(const Correspondence& phi, Mask c);

/// psi after phi. The middle elements are the labels shared by phi's
/// target and psi's source.
Correspondence compose(const Correspondence& psi, const Correspondence& phi);
Correspondence inverse(const Correspondence& phi);
Correspondence diagonal(const FinSet& s);
Correspondence full_relation(const FinSet& a, const FinSet& b);
Correspondence intersect(const Correspondence& a, const Correspondence& b);
/// `a` is contained in `b`; both must share source and target.
bool is_subrelation(const Correspondence& a, const Correspondence& b);

/// Whether every subset of A has the same image in D along both paths
///   A --psi--> B --sigma--> D   and   A --phi--> C --theta--> D.
bool square_commutes(const Correspondence& psi, const Correspondence& sigma,
                     const Correspondence& phi, const Correspondence& theta);

/// For every open V containing phi(c) there is an open U containing c with
/// phi(U) inside V.
bool is_continuous_on(const Correspondence& phi, const FiniteTopology& src,
                      const FiniteTopology& dst, Mask c);

/// Global form: for every open V some open U has phi(U) inside V. Since the
/// empty set is open this always holds; kept for completeness of the API.
bool is_continuous(const Correspondence& phi, const FiniteTopology& src,
                   const FiniteTopology& dst);

/// Neighborhood characterization of the limit: every neighborhood V of
/// `candidate` in `dst` contains phi(M) for some member M of `f`. Defined
/// for every candidate, including the empty set.
bool limit_by_neighborhoods(const Correspondence& phi, const Filter& f,
                            const FiniteTopology& dst, Mask candidate);

/// `candidate` is a limit of phi along `f`: the image filter base
/// {phi(M) : M in f} converges to it. Computed both from the base and from
/// the neighborhood characterization; a disagreement throws.
/// Throws EmptyTarget for an empty candidate and EmptyImageBase when some
/// phi(M) is empty.
bool limit_of_correspondence(const Correspondence& phi, const Filter& f,
                             const FiniteTopology& dst, Mask candidate);

/// Operation of a finite algebra; `table` is row-major over carrier^arity
/// (the first argument is the most significant digit).
struct Operation {
  std::string name;
  std::size_t arity = 0;
  std::vector<std::size_t> table;
};

class FiniteAlgebra {
 public:
  FiniteAlgebra(FinSet carrier, std::vector<Operation> ops);

  const FinSet& carrier() const noexcept { return carrier_; }
  /// Sorted by name.
  const std::vector<Operation>& operations() const noexcept { return ops_; }
  std::size_t apply(const Operation& op, std::span<const std::size_t> args) const;

  friend bool operator==(const FiniteAlgebra& a, const FiniteAlgebra& b);

 private:
  FinSet carrier_;
  std::vector<Operation> ops_;
};

/// For every operation and every choice of pairs (a_k, b_k) in phi,
/// (op(a_1..a_n), op(b_1..b_n)) is in phi.
bool is_homomorphism_correspondence(const Correspondence& phi,
                                    const FiniteAlgebra& alg_a,
                                    const FiniteAlgebra& alg_b);

}  // namespace fibra
