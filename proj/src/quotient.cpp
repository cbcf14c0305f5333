#include "fibra/quotient.hpp"

#include <algorithm>
#include <map>

#include "fibra/error.hpp"

namespace fibra {

FiberedMorphism::FiberedMorphism(Bundle source, Bundle target,
                                 std::vector<std::vector<std::size_t>> maps)
    : source_(std::move(source)), target_(std::move(target)), maps_(std::move(maps)) {
  if (source_.base() != target_.base()) {
    fail(ErrorCode::BaseMismatch, "fibered morphisms here cover the identity of one base");
  }
  if (maps_.size() != source_.base().size()) {
    fail(ErrorCode::InvalidMorphism, "one fiber map per base point is required");
  }
  for (std::size_t x = 0; x < maps_.size(); ++x) {
    if (maps_[x].size() != source_.fiber(x).size()) {
      fail(ErrorCode::InvalidMorphism, "map over '" + source_.base()[x] + "' is not total");
    }
    for (std::size_t v : maps_[x]) {
      if (v >= target_.fiber(x).size()) {
        fail(ErrorCode::InvalidMorphism,
             "map over '" + source_.base()[x] + "' leaves the target fiber");
      }
    }
  }
}

std::vector<std::size_t> FiberedMorphism::total_map() const {
  const auto src = source_.total_space();
  const auto dst = target_.total_space();
  std::vector<std::size_t> out(src.set.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [x, a] = src.points[i];
    out[i] = dst.index[x][maps_[x][a]];
  }
  return out;
}

bool FiberedMorphism::injective() const {
  for (std::size_t x = 0; x < maps_.size(); ++x) {
    Mask seen = 0;
    for (std::size_t v : maps_[x]) {
      if (contains(seen, v)) return false;
      seen |= bit(v);
    }
  }
  return true;
}

bool FiberedMorphism::surjective() const {
  for (std::size_t x = 0; x < maps_.size(); ++x) {
    Mask hit = 0;
    for (std::size_t v : maps_[x]) hit |= bit(v);
    if (hit != target_.fiber(x).all()) return false;
  }
  return true;
}

FiberedMorphism compose(const FiberedMorphism& second, const FiberedMorphism& first) {
  if (!(first.target() == second.source())) {
    fail(ErrorCode::BundleMismatch, "morphisms do not chain");
  }
  std::vector<std::vector<std::size_t>> maps(first.maps().size());
  for (std::size_t x = 0; x < maps.size(); ++x)
    for (std::size_t v : first.maps()[x]) maps[x].push_back(second(x, v));
  return FiberedMorphism(first.source(), second.target(), std::move(maps));
}

ReducedFiberedCorrespondence graph(const FiberedMorphism& f) {
  std::map<std::size_t, Correspondence> fibers;
  for (std::size_t x = 0; x < f.maps().size(); ++x) {
    std::vector<Mask> rows;
    for (std::size_t v : f.maps()[x]) rows.push_back(bit(v));
    fibers.emplace(x, Correspondence(f.source().fiber(x), f.target().fiber(x), std::move(rows)));
  }
  return ReducedFiberedCorrespondence(f.source(), f.target(), f.source().base().all(),
                                      std::move(fibers));
}

QuotientResult quotient_bundle(const Bundle& e, const ReducedFiberedCorrespondence& s) {
  if (!(s.source() == e) || !(s.target() == e)) {
    fail(ErrorCode::BundleMismatch, "equivalence does not live on '" + e.name() + "'");
  }
  if (!s.full_domain()) {
    fail(ErrorCode::PartialDomain, "quotient needs the equivalence at every base point");
  }
  if (!classify(s).equivalence) {
    fail(ErrorCode::NotAnEquivalence, "relation is not a fibered equivalence");
  }

  const std::size_t n = e.base().size();
  std::vector<std::vector<Mask>> classes(n);
  std::vector<FinSet> fibers;
  std::vector<std::vector<std::size_t>> nat(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto& rel = s.fiber(x);
    const FinSet& fib = e.fiber(x);
    Mask assigned = 0;
    std::vector<Label> labels;
    nat[x].assign(fib.size(), 0);
    // fiber labels are sorted, so the first unassigned element is the least
    // member of its class
    for (std::size_t a = 0; a < fib.size(); ++a) {
      if (contains(assigned, a)) continue;
      const Mask cls = rel.row(a);
      assigned |= cls;
      classes[x].push_back(cls);
      labels.push_back(fib[a]);
    }
    FinSet quotient_fiber(labels);
    for (Mask cls : classes[x]) {
      const std::size_t label = quotient_fiber.index_of(fib[static_cast<std::size_t>(std::countr_zero(cls))]);
      for_each_bit(cls, [&](std::size_t a) { nat[x][a] = label; });
    }
    fibers.push_back(std::move(quotient_fiber));
  }

  Bundle shell(e.name() + "/S", e.base(), fibers, std::nullopt, e.base_topology());
  std::optional<FiniteTopology> qtop;
  if (e.total_topology()) {
    FiberedMorphism provisional(e, shell, nat);
    const auto map = provisional.total_map();
    const FinSet qpoints = shell.total_space().set;
    if (qpoints.size() > kMaxFilterPoints) {
      fail(ErrorCode::CapacityExceeded, "quotient topology limited to 20 points");
    }
    std::vector<Mask> opens;
    for (Mask v = 0; v <= qpoints.all(); ++v)
      if (e.total_topology()->is_open(preimage(map, v))) opens.push_back(v);
    qtop.emplace(qpoints, std::move(opens));
  }
  Bundle quotient(e.name() + "/S", e.base(), std::move(fibers), std::nullopt,
                  e.base_topology(), qtop);
  FiberedMorphism nat_morphism(e, quotient, std::move(nat));
  return QuotientResult{std::move(quotient), std::move(nat_morphism), std::move(classes),
                        std::move(qtop)};
}

ReducedFiberedCorrespondence kernel_equivalence(const FiberedMorphism& f) {
  std::map<std::size_t, Correspondence> fibers;
  for (std::size_t x = 0; x < f.maps().size(); ++x) {
    const auto& m = f.maps()[x];
    std::vector<Mask> rows(m.size(), Mask{0});
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = 0; b < m.size(); ++b)
        if (m[a] == m[b]) rows[a] |= bit(b);
    fibers.emplace(x, Correspondence(f.source().fiber(x), f.source().fiber(x), std::move(rows)));
  }
  ReducedFiberedCorrespondence s(f.source(), f.source(), f.source().base().all(),
                                 std::move(fibers));
  if (!classify(s).equivalence) {
    fail(ErrorCode::InvariantViolation, "kernel of a morphism is not an equivalence");
  }
  return s;
}

Factorization factorize(const FiberedMorphism& f) {
  const Bundle& a = f.source();
  const Bundle& b = f.target();
  const std::size_t n = a.base().size();
  QuotientResult q = quotient_bundle(a, kernel_equivalence(f));

  // image bundle f(A): the values actually taken in each fiber
  std::vector<FinSet> image_fibers;
  std::vector<Mask> image_masks;
  for (std::size_t x = 0; x < n; ++x) {
    Mask m = 0;
    for (std::size_t v : f.maps()[x]) m |= bit(v);
    image_masks.push_back(m);
    image_fibers.emplace_back(b.fiber(x).labels_of(m));
  }
  Bundle image_bundle("f(" + a.name() + ")", a.base(), std::move(image_fibers));

  std::vector<std::vector<std::size_t>> t_maps(n);
  std::vector<std::vector<std::size_t>> i_maps(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (Mask cls : q.classes[x]) {
      const auto rep = static_cast<std::size_t>(std::countr_zero(cls));
      t_maps[x].push_back(image_bundle.fiber(x).index_of(b.fiber(x)[f(x, rep)]));
    }
    for (const auto& label : image_bundle.fiber(x)) i_maps[x].push_back(b.fiber(x).index_of(label));
  }
  Factorization out{q.nat, FiberedMorphism(q.quotient, image_bundle, std::move(t_maps)),
                    FiberedMorphism(image_bundle, b, std::move(i_maps))};

  if (!out.j.surjective() || !out.t.bijective() || !out.i.injective() ||
      !(compose(out.i, compose(out.t, out.j)).maps() == f.maps())) {
    fail(ErrorCode::InvariantViolation, "factorization does not reproduce the morphism");
  }
  return out;
}

}  // namespace fibra
