#include "fibra/relation.hpp"

#include <algorithm>
#include <optional>

#include "fibra/error.hpp"

namespace fibra {

Correspondence::Correspondence(FinSet source, FinSet target)
    : source_(std::move(source)), target_(std::move(target)),
      rows_(source_.size(), Mask{0}) {}

Correspondence::Correspondence(FinSet source, FinSet target, std::vector<Mask> rows)
    : source_(std::move(source)), target_(std::move(target)), rows_(std::move(rows)) {
  if (rows_.size() != source_.size()) {
    fail(ErrorCode::LabelMismatch, "one row per source label is required");
  }
  for (Mask r : rows_) {
    if (!is_subset(r, target_.all())) {
      fail(ErrorCode::LabelMismatch, "row names a target outside the codomain");
    }
  }
}

Correspondence::Correspondence(FinSet source, FinSet target,
                               const std::vector<std::pair<Label, Label>>& pairs)
    : Correspondence(std::move(source), std::move(target)) {
  for (const auto& [a, b] : pairs) {
    rows_[source_.index_of(a)] |= bit(target_.index_of(b));
  }
}

bool Correspondence::empty() const noexcept {
  return std::all_of(rows_.begin(), rows_.end(), [](Mask r) { return r == 0; });
}

std::size_t Correspondence::size() const noexcept {
  std::size_t n = 0;
  for (Mask r : rows_) n += static_cast<std::size_t>(popcount(r));
  return n;
}

std::vector<std::pair<std::size_t, std::size_t>> Correspondence::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < rows_.size(); ++a)
    for_each_bit(rows_[a], [&](std::size_t b) { out.emplace_back(a, b); });
  return out;
}

std::vector<std::pair<Label, Label>> Correspondence::label_pairs() const {
  std::vector<std::pair<Label, Label>> out;
  for (const auto& [a, b] : pairs()) out.emplace_back(source_[a], target_[b]);
  return out;
}

Mask Correspondence::range() const noexcept {
  Mask out = 0;
  for (Mask r : rows_) out |= r;
  return out;
}

Mask Correspondence::domain() const noexcept {
  Mask out = 0;
  for (std::size_t a = 0; a < rows_.size(); ++a)
    if (rows_[a] != 0) out |= bit(a);
  return out;
}

Correspondence restrict(const Correspondence& phi, Mask c) {
  if (!is_subset(c, phi.source().all())) {
    fail(ErrorCode::LabelMismatch, "restriction set leaves the source");
  }
  std::vector<Mask> rows;
  for_each_bit(c, [&](std::size_t a) { rows.push_back(phi.row(a)); });
  return Correspondence(FinSet(phi.source().labels_of(c)), phi.target(), std::move(rows));
}

Mask image(const Correspondence& phi, Mask c) {
  if (!is_subset(c, phi.source().all())) {
    fail(ErrorCode::LabelMismatch, "image of a set outside the source");
  }
  Mask out = 0;
  for_each_bit(c, [&](std::size_t a) { out |= phi.row(a); });
  return out;
}

Correspondence compose(const Correspondence& psi, const Correspondence& phi) {
  // middle[b] = index in psi's source of phi's b-th target, when shared
  std::vector<std::optional<std::size_t>> middle;
  middle.reserve(phi.target().size());
  for (const auto& b : phi.target()) middle.push_back(psi.source().find(b));

  std::vector<Mask> rows(phi.source().size(), Mask{0});
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for_each_bit(phi.row(a), [&](std::size_t b) {
      if (middle[b]) rows[a] |= psi.row(*middle[b]);
    });
  }
  return Correspondence(phi.source(), psi.target(), std::move(rows));
}

Correspondence inverse(const Correspondence& phi) {
  std::vector<Mask> rows(phi.target().size(), Mask{0});
  for (const auto& [a, b] : phi.pairs()) rows[b] |= bit(a);
  return Correspondence(phi.target(), phi.source(), std::move(rows));
}

Correspondence diagonal(const FinSet& s) {
  std::vector<Mask> rows(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) rows[i] = bit(i);
  return Correspondence(s, s, std::move(rows));
}

Correspondence full_relation(const FinSet& a, const FinSet& b) {
  return Correspondence(a, b, std::vector<Mask>(a.size(), b.all()));
}

namespace {

void require_same_shape(const Correspondence& a, const Correspondence& b) {
  if (a.source() != b.source() || a.target() != b.target()) {
    fail(ErrorCode::ShapeMismatch, "relations live on different products");
  }
}

}  // namespace

Correspondence intersect(const Correspondence& a, const Correspondence& b) {
  require_same_shape(a, b);
  std::vector<Mask> rows(a.rows().size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = a.row(i) & b.row(i);
  return Correspondence(a.source(), a.target(), std::move(rows));
}

bool is_subrelation(const Correspondence& a, const Correspondence& b) {
  require_same_shape(a, b);
  for (std::size_t i = 0; i < a.rows().size(); ++i)
    if (!is_subset(a.row(i), b.row(i))) return false;
  return true;
}

bool square_commutes(const Correspondence& psi, const Correspondence& sigma,
                     const Correspondence& phi, const Correspondence& theta) {
  if (psi.source() != phi.source() || psi.target() != sigma.source() ||
      phi.target() != theta.source() || sigma.target() != theta.target()) {
    fail(ErrorCode::ShapeMismatch, "the four correspondences do not form a square");
  }
  const FinSet& a = psi.source();
  const auto same = [&](Mask s) {
    return image(sigma, image(psi, s)) == image(theta, image(phi, s));
  };
  if (a.size() <= 20) {
    for (Mask s = 0; s <= a.all(); ++s)
      if (!same(s)) return false;
    return true;
  }
  // images distribute over unions, so singletons decide the full quantifier
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(bit(i))) return false;
  return true;
}

namespace {

void require_spaces(const Correspondence& phi, const FiniteTopology& src,
                    const FiniteTopology& dst) {
  if (phi.source() != src.points() || phi.target() != dst.points()) {
    fail(ErrorCode::SpaceMismatch,
         "correspondence and topologies have different point sets");
  }
}

}  // namespace

bool is_continuous_on(const Correspondence& phi, const FiniteTopology& src,
                      const FiniteTopology& dst, Mask c) {
  require_spaces(phi, src, dst);
  src.check_subset(c);
  const Mask img = image(phi, c);
  for (Mask v : dst.opens()) {
    if (!is_subset(img, v)) continue;
    const bool found = std::any_of(src.opens().begin(), src.opens().end(), [&](Mask u) {
      return is_subset(c, u) && is_subset(image(phi, u), v);
    });
    if (!found) return false;
  }
  return true;
}

bool is_continuous(const Correspondence& phi, const FiniteTopology& src,
                   const FiniteTopology& dst) {
  require_spaces(phi, src, dst);
  return std::all_of(dst.opens().begin(), dst.opens().end(), [&](Mask v) {
    return std::any_of(src.opens().begin(), src.opens().end(),
                       [&](Mask u) { return is_subset(image(phi, u), v); });
  });
}

bool limit_by_neighborhoods(const Correspondence& phi, const Filter& f,
                            const FiniteTopology& dst, Mask candidate) {
  if (phi.source() != f.space().points() || phi.target() != dst.points()) {
    fail(ErrorCode::SpaceMismatch, "filter, correspondence and target disagree");
  }
  dst.check_subset(candidate);
  const auto members = f.members();
  std::vector<Mask> images;
  images.reserve(members.size());
  for (Mask m : members) images.push_back(image(phi, m));
  // V is a neighborhood of the candidate iff it contains the smallest open
  // set around it; walk every such V.
  const Mask core = dst.smallest_open_containing(candidate);
  const Mask rest = dst.points().all() & ~core;
  for (Mask extra = rest;; extra = (extra - 1) & rest) {
    const Mask v = core | extra;
    const bool found = std::any_of(images.begin(), images.end(),
                                   [&](Mask img) { return is_subset(img, v); });
    if (!found) return false;
    if (extra == 0) break;
  }
  return true;
}

bool limit_of_correspondence(const Correspondence& phi, const Filter& f,
                             const FiniteTopology& dst, Mask candidate) {
  if (phi.source() != f.space().points() || phi.target() != dst.points()) {
    fail(ErrorCode::SpaceMismatch, "filter, correspondence and target disagree");
  }
  dst.check_subset(candidate);
  if (candidate == 0) {
    fail(ErrorCode::EmptyTarget, "the empty set has only vacuous neighborhoods");
  }
  std::vector<Mask> images;
  for (Mask m : f.members()) {
    const Mask img = image(phi, m);
    if (img == 0) {
      fail(ErrorCode::EmptyImageBase,
           "a filter member has empty image, so the images form no filter base");
    }
    images.push_back(img);
  }
  const bool by_base = filterbase_converges(FilterBase(dst, std::move(images)), candidate);
  if (by_base != limit_by_neighborhoods(phi, f, dst, candidate)) {
    fail(ErrorCode::InvariantViolation,
         "image filter base convergence disagrees with the neighborhood test");
  }
  return by_base;
}

FiniteAlgebra::FiniteAlgebra(FinSet carrier, std::vector<Operation> ops)
    : carrier_(std::move(carrier)), ops_(std::move(ops)) {
  std::sort(ops_.begin(), ops_.end(),
            [](const Operation& a, const Operation& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const auto& op = ops_[i];
    if (i > 0 && ops_[i - 1].name == op.name) {
      fail(ErrorCode::InvalidAlgebra, "duplicate operation '" + op.name + "'");
    }
    std::size_t expected = 1;
    for (std::size_t k = 0; k < op.arity; ++k) {
      expected *= carrier_.size();
      if (expected > 1'000'000) {
        fail(ErrorCode::CapacityExceeded, "operation table of '" + op.name + "' is too large");
      }
    }
    if (op.table.size() != expected) {
      fail(ErrorCode::InvalidAlgebra, "operation '" + op.name + "' is not total");
    }
    for (std::size_t v : op.table) {
      if (v >= carrier_.size()) {
        fail(ErrorCode::InvalidAlgebra, "operation '" + op.name + "' leaves the carrier");
      }
    }
  }
}

std::size_t FiniteAlgebra::apply(const Operation& op,
                                 std::span<const std::size_t> args) const {
  std::size_t index = 0;
  for (std::size_t a : args) index = index * carrier_.size() + a;
  return op.table.at(index);
}

bool operator==(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.carrier_ != b.carrier_ || a.ops_.size() != b.ops_.size()) return false;
  for (std::size_t i = 0; i < a.ops_.size(); ++i) {
    if (a.ops_[i].name != b.ops_[i].name || a.ops_[i].arity != b.ops_[i].arity ||
        a.ops_[i].table != b.ops_[i].table) {
      return false;
    }
  }
  return true;
}

bool is_homomorphism_correspondence(const Correspondence& phi,
                                    const FiniteAlgebra& alg_a,
                                    const FiniteAlgebra& alg_b) {
  if (phi.source() != alg_a.carrier() || phi.target() != alg_b.carrier()) {
    fail(ErrorCode::SignatureMismatch, "correspondence does not join the two carriers");
  }
  const auto& ops_a = alg_a.operations();
  const auto& ops_b = alg_b.operations();
  if (ops_a.size() != ops_b.size()) {
    fail(ErrorCode::SignatureMismatch, "algebras have different signatures");
  }
  for (std::size_t i = 0; i < ops_a.size(); ++i) {
    if (ops_a[i].name != ops_b[i].name || ops_a[i].arity != ops_b[i].arity) {
      fail(ErrorCode::SignatureMismatch, "algebras have different signatures");
    }
  }

  const auto pairs = phi.pairs();
  for (std::size_t k = 0; k < ops_a.size(); ++k) {
    const auto& op_a = ops_a[k];
    const auto& op_b = ops_b[k];
    const std::size_t n = op_a.arity;
    if (n > 0 && pairs.empty()) continue;
    // odometer over pairs^n
    std::vector<std::size_t> choice(n, 0);
    std::vector<std::size_t> args_a(n);
    std::vector<std::size_t> args_b(n);
    while (true) {
      for (std::size_t j = 0; j < n; ++j) {
        args_a[j] = pairs[choice[j]].first;
        args_b[j] = pairs[choice[j]].second;
      }
      if (!phi.relates(alg_a.apply(op_a, args_a), alg_b.apply(op_b, args_b))) {
        return false;
      }
      std::size_t j = 0;
      while (j < n && ++choice[j] == pairs.size()) choice[j++] = 0;
      if (j == n) break;
    }
  }
  return true;
}

}  // namespace fibra
