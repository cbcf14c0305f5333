#include "fibra/fibered.hpp"

#include <algorithm>

#include "fibra/error.hpp"

namespace fibra {

namespace {

std::string pair_text(const FinSet& m, const FinSet& n, BasePair p) {
  return "(" + m[p.first] + "," + n[p.second] + ")";
}

}  // namespace

FiberedCorrespondence::FiberedCorrespondence(Bundle source, Bundle target,
                                             Correspondence base,
                                             std::map<BasePair, Correspondence> fibers)
    : source_(std::move(source)), target_(std::move(target)), base_(std::move(base)),
      fibers_(std::move(fibers)) {
  if (base_.source() != source_.base() || base_.target() != target_.base()) {
    fail(ErrorCode::InvariantViolation,
         "base correspondence must run from the source base to the target base");
  }
  for (const auto& [key, rel] : fibers_) {
    if (key.first >= source_.base().size() || key.second >= target_.base().size() ||
        !base_.relates(key.first, key.second)) {
      fail(ErrorCode::InvariantViolation, "fiber relation without its base pair");
    }
    if (rel.source() != source_.fiber(key.first) || rel.target() != target_.fiber(key.second)) {
      fail(ErrorCode::InvariantViolation,
           "fiber relation over " + pair_text(source_.base(), target_.base(), key) +
               " does not join the fibers over that pair");
    }
  }
  for (const auto& [x, y] : base_.pairs()) {
    fibers_.try_emplace({x, y}, source_.fiber(x), target_.fiber(y));
  }
}

const Correspondence& FiberedCorrespondence::fiber(std::size_t x, std::size_t y) const {
  const auto it = fibers_.find({x, y});
  if (it == fibers_.end()) {
    fail(ErrorCode::LabelMismatch, "no base pair at the requested indices");
  }
  return it->second;
}

ReducedFiberedCorrespondence::ReducedFiberedCorrespondence(
    Bundle source, Bundle target, Mask domain, std::map<std::size_t, Correspondence> fibers)
    : source_(std::move(source)), target_(std::move(target)), domain_(domain),
      fibers_(std::move(fibers)) {
  if (source_.base() != target_.base()) {
    fail(ErrorCode::BaseMismatch, "reduced correspondences join bundles over one base");
  }
  if (!is_subset(domain_, source_.base().all())) {
    fail(ErrorCode::InvariantViolation, "domain leaves the base");
  }
  for (const auto& [x, rel] : fibers_) {
    if (!contains(domain_, x)) {
      fail(ErrorCode::InvariantViolation, "fiber relation outside the domain");
    }
    if (rel.source() != source_.fiber(x) || rel.target() != target_.fiber(x)) {
      fail(ErrorCode::InvariantViolation,
           "fiber relation over '" + base()[x] + "' does not join the fibers there");
    }
  }
  for_each_bit(domain_, [&](std::size_t x) {
    fibers_.try_emplace(x, source_.fiber(x), target_.fiber(x));
  });
}

const Correspondence& ReducedFiberedCorrespondence::fiber(std::size_t x) const {
  const auto it = fibers_.find(x);
  if (it == fibers_.end()) {
    fail(ErrorCode::LabelMismatch, "point is outside the domain");
  }
  return it->second;
}

FiberedRelation::FiberedRelation(Bundle bundle, std::size_t arity,
                                 std::vector<std::set<Tuple>> tuples)
    : bundle_(std::move(bundle)), arity_(arity), tuples_(std::move(tuples)) {
  if (arity_ == 0) fail(ErrorCode::ArityMismatch, "fibered relations have arity at least 1");
  tuples_.resize(bundle_.base().size());
  for (std::size_t x = 0; x < tuples_.size(); ++x) {
    for (const auto& t : tuples_[x]) {
      if (t.size() != arity_) {
        fail(ErrorCode::ArityMismatch, "tuple over '" + bundle_.base()[x] + "' has " +
                                           std::to_string(t.size()) + " entries, expected " +
                                           std::to_string(arity_));
      }
      for (std::size_t e : t) {
        if (e >= bundle_.fiber(x).size()) {
          fail(ErrorCode::LabelMismatch, "tuple leaves the fiber over '" + bundle_.base()[x] + "'");
        }
      }
    }
  }
}

bool base_is_injective_map(const FiberedCorrespondence& fc) {
  Mask seen = 0;
  for (Mask row : fc.base().rows()) {
    if (popcount(row) > 1) return false;
    if ((row & seen) != 0) return false;
    seen |= row;
  }
  return true;
}

namespace {

void require_injective(const FiberedCorrespondence& fc, const char* role) {
  if (!base_is_injective_map(fc)) {
    fail(ErrorCode::NonInjectiveBase,
         std::string("base of the ") + role + " fibered correspondence is not an injective map");
  }
}

}  // namespace

FiberedCorrespondence fibered_compose(const FiberedCorrespondence& h,
                                      const FiberedCorrespondence& f) {
  if (!(f.target() == h.source())) {
    fail(ErrorCode::BundleMismatch, "inner target '" + f.target().name() +
                                        "' is not the outer source '" + h.source().name() + "'");
  }
  require_injective(f, "inner");
  require_injective(h, "outer");
  Correspondence base = compose(h.base(), f.base());
  std::map<BasePair, Correspondence> fibers;
  for (const auto& [x, y] : f.base().pairs()) {
    for_each_bit(h.base().row(y), [&](std::size_t z) {
      fibers.emplace(BasePair{x, z}, compose(h.fiber(y, z), f.fiber(x, y)));
    });
  }
  return FiberedCorrespondence(f.source(), h.target(), std::move(base), std::move(fibers));
}

FiberedCorrespondence fibered_inverse(const FiberedCorrespondence& f) {
  require_injective(f, "given");
  std::map<BasePair, Correspondence> fibers;
  for (const auto& [key, rel] : f.fibers()) fibers.emplace(BasePair{key.second, key.first}, inverse(rel));
  return FiberedCorrespondence(f.target(), f.source(), inverse(f.base()), std::move(fibers));
}

FiberedCorrespondence fibered_diagonal(const Bundle& a) {
  std::map<BasePair, Correspondence> fibers;
  for (std::size_t x = 0; x < a.base().size(); ++x) fibers.emplace(BasePair{x, x}, diagonal(a.fiber(x)));
  return FiberedCorrespondence(a, a, diagonal(a.base()), std::move(fibers));
}

namespace {

/// F_{(x,y)} carried to typical(source) x typical(target) through the charts.
Correspondence transport(const FiberedCorrespondence& f, std::size_t x, std::size_t y) {
  const auto& ts = f.source().trivialization()->typical;
  const auto& tt = f.target().trivialization()->typical;
  const auto& k = f.source().chart(x);
  const auto& l = f.target().chart(y);
  std::vector<Mask> rows(ts.size(), Mask{0});
  for (const auto& [a, b] : f.fiber(x, y).pairs()) rows[k[a]] |= bit(l[b]);
  return Correspondence(ts, tt, std::move(rows));
}

Mask transport_subset(const std::vector<std::size_t>& chart, Mask m) {
  Mask out = 0;
  for_each_bit(m, [&](std::size_t i) { out |= bit(chart[i]); });
  return out;
}

}  // namespace

Bundle image_of_subbundle(const FiberedCorrespondence& f, const SubbundleWitness& witness) {
  if (!(witness.super == f.source())) {
    fail(ErrorCode::BundleMismatch, "subbundle '" + witness.sub.name() +
                                        "' is not witnessed inside '" + f.source().name() + "'");
  }
  if (!witness.valid()) {
    fail(ErrorCode::InvariantViolation, "subbundle witness is not a pair of injections");
  }
  require_injective(f, "given");
  if (!f.source().trivialization() || !f.target().trivialization()) {
    fail(ErrorCode::MissingTrivialization,
         "image of a subbundle needs trivializations of both bundles");
  }

  const FinSet& src_base = f.source().base();
  const FinSet& dst_base = f.target().base();
  const auto pairs = f.base().pairs();

  std::optional<Correspondence> uniform;
  for (const auto& p : pairs) {
    auto t = transport(f, p.first, p.second);
    if (!uniform) {
      uniform = std::move(t);
    } else if (t != *uniform) {
      fail(ErrorCode::SingularFiber, "fiber relation over " + pair_text(src_base, dst_base, p) +
                                         " differs from the others in the typical fibers");
    }
  }

  // D_y = F_{(x,y)} C_x for every base point x of the subbundle with a partner y
  std::vector<std::pair<std::size_t, Mask>> image_fibers;  // (y, D_y)
  for (std::size_t cx = 0; cx < witness.sub.base().size(); ++cx) {
    const std::size_t x = witness.base_injection[cx];
    Mask c_fiber = 0;
    for (std::size_t a : witness.fiber_injections[cx]) c_fiber |= bit(a);
    for_each_bit(f.base().row(x), [&](std::size_t y) {
      image_fibers.emplace_back(y, image(f.fiber(x, y), c_fiber));
    });
  }

  std::optional<Mask> typical_image;
  std::optional<std::size_t> first_y;
  for (const auto& [y, d] : image_fibers) {
    const Mask t = transport_subset(f.target().chart(y), d);
    if (!typical_image) {
      typical_image = t;
      first_y = y;
    } else if (t != *typical_image) {
      fail(ErrorCode::SingularFiber, "image fibers over '" + dst_base[*first_y] + "' and '" +
                                         dst_base[y] + "' are not identified by the charts");
    }
  }

  const auto& target_typical = f.target().trivialization()->typical;
  const FinSet typical(target_typical.labels_of(typical_image.value_or(0)));
  std::vector<Label> base_labels;
  for (const auto& [y, d] : image_fibers) base_labels.push_back(dst_base[y]);
  FinSet base(std::move(base_labels));

  std::vector<FinSet> fibers(base.size());
  Trivialization triv{typical, std::vector<std::optional<std::vector<std::size_t>>>(base.size())};
  for (const auto& [y, d] : image_fibers) {
    const std::size_t i = base.index_of(dst_base[y]);
    fibers[i] = FinSet(f.target().fiber(y).labels_of(d));
    std::vector<std::size_t> chart;
    const auto& l = f.target().chart(y);
    for_each_bit(d, [&](std::size_t b) {
      chart.push_back(typical.index_of(target_typical[l[b]]));
    });
    triv.charts[i] = std::move(chart);
  }
  return Bundle("image(" + witness.sub.name() + ")", std::move(base), std::move(fibers),
                std::move(triv));
}

ReducedFiberedCorrespondence reduced_compose(const ReducedFiberedCorrespondence& h,
                                             const ReducedFiberedCorrespondence& f) {
  if (!(f.target() == h.source())) {
    fail(ErrorCode::BundleMismatch, "inner target '" + f.target().name() +
                                        "' is not the outer source '" + h.source().name() + "'");
  }
  const Mask domain = f.domain() & h.domain();
  std::map<std::size_t, Correspondence> fibers;
  for_each_bit(domain, [&](std::size_t x) {
    fibers.emplace(x, compose(h.fiber(x), f.fiber(x)));
  });
  return ReducedFiberedCorrespondence(f.source(), h.target(), domain, std::move(fibers));
}

ReducedFiberedCorrespondence reduced_inverse(const ReducedFiberedCorrespondence& f) {
  std::map<std::size_t, Correspondence> fibers;
  for (const auto& [x, rel] : f.fibers()) fibers.emplace(x, inverse(rel));
  return ReducedFiberedCorrespondence(f.target(), f.source(), f.domain(), std::move(fibers));
}

ReducedFiberedCorrespondence reduced_diagonal(const Bundle& a) {
  std::map<std::size_t, Correspondence> fibers;
  for (std::size_t x = 0; x < a.base().size(); ++x) fibers.emplace(x, diagonal(a.fiber(x)));
  return ReducedFiberedCorrespondence(a, a, a.base().all(), std::move(fibers));
}

FiberedCorrespondence lift_of_diagonal(const ReducedFiberedCorrespondence& f) {
  std::vector<Mask> rows(f.base().size(), Mask{0});
  for_each_bit(f.domain(), [&](std::size_t x) { rows[x] = bit(x); });
  std::map<BasePair, Correspondence> fibers;
  for (const auto& [x, rel] : f.fibers()) fibers.emplace(BasePair{x, x}, rel);
  return FiberedCorrespondence(f.source(), f.target(),
                               Correspondence(f.base(), f.base(), std::move(rows)),
                               std::move(fibers));
}

ReducedFiberedCorrespondence reduce(const FiberedCorrespondence& f) {
  if (f.source().base() != f.target().base()) {
    fail(ErrorCode::BaseMismatch, "only correspondences over one base reduce");
  }
  Mask domain = 0;
  for (const auto& [x, y] : f.base().pairs()) {
    if (x != y) {
      fail(ErrorCode::BaseMismatch, "base pair " + pair_text(f.source().base(), f.target().base(), {x, y}) +
                                        " is off the diagonal");
    }
    domain |= bit(x);
  }
  std::map<std::size_t, Correspondence> fibers;
  for (const auto& [key, rel] : f.fibers()) fibers.emplace(key.first, rel);
  return ReducedFiberedCorrespondence(f.source(), f.target(), domain, std::move(fibers));
}

Correspondence sections_correspondence(const ReducedFiberedCorrespondence& f,
                                       std::size_t max_enum, ExecPolicy policy) {
  if (!f.full_domain()) {
    fail(ErrorCode::PartialDomain, "section correspondence needs F_x at every base point");
  }
  const auto src = sections(f.source(), max_enum);
  const auto dst = sections(f.target(), max_enum);
  if (!dst.empty() && src.size() > max_enum / dst.size()) {
    fail(ErrorCode::EnumerationBound, "section pairs exceed the bound " + std::to_string(max_enum));
  }
  std::vector<Label> src_labels;
  for (const auto& s : src) src_labels.push_back(section_label(f.source(), s));
  std::vector<Label> dst_labels;
  for (const auto& t : dst) dst_labels.push_back(section_label(f.target(), t));
  const FinSet src_set(std::move(src_labels));
  const FinSet dst_set(std::move(dst_labels));

  // section order and label order can differ; map positions to indices once
  std::vector<std::size_t> src_pos(src.size());
  std::vector<std::size_t> dst_pos(dst.size());
  for (std::size_t i = 0; i < src.size(); ++i)
    src_pos[i] = src_set.index_of(section_label(f.source(), src[i]));
  for (std::size_t j = 0; j < dst.size(); ++j)
    dst_pos[j] = dst_set.index_of(section_label(f.target(), dst[j]));

  std::vector<const Correspondence*> rel(f.base().size());
  for (std::size_t x = 0; x < rel.size(); ++x) rel[x] = &f.fiber(x);

  std::vector<Mask> rows(src.size(), Mask{0});
  const auto row_of = [&](std::size_t i) {
    Mask row = 0;
    for (std::size_t j = 0; j < dst.size(); ++j) {
      bool related = true;
      for (std::size_t x = 0; x < rel.size() && related; ++x)
        related = rel[x]->relates(src[i].choice[x], dst[j].choice[x]);
      if (related) row |= bit(dst_pos[j]);
    }
    rows[src_pos[i]] = row;
  };
  const auto n = static_cast<std::ptrdiff_t>(src.size());
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) row_of(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) row_of(static_cast<std::size_t>(i));
  }
  return Correspondence(src_set, dst_set, std::move(rows));
}

std::optional<RelationProperty> parse_property(const std::string& name) {
  if (name == "transitive") return RelationProperty::transitive;
  if (name == "symmetric") return RelationProperty::symmetric;
  if (name == "antisymmetric") return RelationProperty::antisymmetric;
  if (name == "reflexive") return RelationProperty::reflexive;
  return std::nullopt;
}

std::string to_string(RelationProperty p) {
  switch (p) {
    case RelationProperty::transitive: return "transitive";
    case RelationProperty::symmetric: return "symmetric";
    case RelationProperty::antisymmetric: return "antisymmetric";
    case RelationProperty::reflexive: return "reflexive";
  }
  return "unknown";
}

namespace {

void require_endorelation(const ReducedFiberedCorrespondence& r) {
  if (!(r.source() == r.target())) {
    fail(ErrorCode::NotEndorelation, "relation properties need a correspondence in one bundle");
  }
  if (!r.full_domain()) {
    fail(ErrorCode::PartialDomain, "relation properties are defined over the full base");
  }
}

}  // namespace

bool relation_is(const ReducedFiberedCorrespondence& r, RelationProperty property) {
  require_endorelation(r);
  const std::size_t n = r.base().size();
  switch (property) {
    case RelationProperty::transitive: {
      const auto rr = reduced_compose(r, r);
      for (std::size_t x = 0; x < n; ++x)
        if (!is_subrelation(rr.fiber(x), r.fiber(x))) return false;
      return true;
    }
    case RelationProperty::symmetric:
      return reduced_inverse(r) == r;
    case RelationProperty::antisymmetric: {
      const auto inv = reduced_inverse(r);
      const auto delta = reduced_diagonal(r.source());
      for (std::size_t x = 0; x < n; ++x)
        if (!is_subrelation(intersect(r.fiber(x), inv.fiber(x)), delta.fiber(x))) return false;
      return true;
    }
    case RelationProperty::reflexive: {
      const auto delta = reduced_diagonal(r.source());
      for (std::size_t x = 0; x < n; ++x)
        if (!is_subrelation(delta.fiber(x), r.fiber(x))) return false;
      return true;
    }
  }
  return false;
}

std::optional<Counterexample> find_counterexample(const ReducedFiberedCorrespondence& r,
                                                  RelationProperty property) {
  require_endorelation(r);
  for (std::size_t x = 0; x < r.base().size(); ++x) {
    const auto& rel = r.fiber(x);
    const FinSet& fib = rel.source();
    const std::size_t m = fib.size();
    for (std::size_t a = 0; a < m; ++a) {
      if (property == RelationProperty::reflexive && !rel.relates(a, a)) {
        return Counterexample{r.base()[x], {fib[a]}};
      }
      for (std::size_t b = 0; b < m; ++b) {
        if (!rel.relates(a, b)) continue;
        switch (property) {
          case RelationProperty::symmetric:
            if (!rel.relates(b, a)) return Counterexample{r.base()[x], {fib[a], fib[b]}};
            break;
          case RelationProperty::antisymmetric:
            if (a != b && rel.relates(b, a)) return Counterexample{r.base()[x], {fib[a], fib[b]}};
            break;
          case RelationProperty::transitive:
            for (std::size_t c = 0; c < m; ++c)
              if (rel.relates(b, c) && !rel.relates(a, c))
                return Counterexample{r.base()[x], {fib[a], fib[b], fib[c]}};
            break;
          case RelationProperty::reflexive:
            break;
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<std::string> Classification::names() const {
  std::vector<std::string> out;
  if (equivalence) out.emplace_back("equivalence");
  if (ordering) out.emplace_back("ordering");
  if (out.empty()) out.emplace_back(preordering ? "preordering" : "none");
  return out;
}

namespace {

Classification classify_unchecked(const ReducedFiberedCorrespondence& r) {
  Classification c;
  c.transitive = relation_is(r, RelationProperty::transitive);
  c.symmetric = relation_is(r, RelationProperty::symmetric);
  c.antisymmetric = relation_is(r, RelationProperty::antisymmetric);
  c.reflexive = relation_is(r, RelationProperty::reflexive);
  c.preordering = c.transitive && c.reflexive;
  c.ordering = c.preordering && c.antisymmetric;
  c.equivalence = c.preordering && c.symmetric;
  return c;
}

}  // namespace

Classification classify(const ReducedFiberedCorrespondence& r) {
  Classification c = classify_unchecked(r);
  if (c.preordering && !classify_unchecked(reduced_inverse(r)).preordering) {
    fail(ErrorCode::InvariantViolation, "opposite of a preordering is not a preordering");
  }
  return c;
}

ReducedFiberedCorrespondence to_reduced(const FiberedRelation& r) {
  if (r.arity() != 2) {
    fail(ErrorCode::ArityMismatch, "only 2-ary fibered relations are correspondences");
  }
  const Bundle& b = r.bundle();
  std::map<std::size_t, Correspondence> fibers;
  for (std::size_t x = 0; x < b.base().size(); ++x) {
    std::vector<Mask> rows(b.fiber(x).size(), Mask{0});
    for (const auto& t : r.tuples()[x]) rows[t[0]] |= bit(t[1]);
    fibers.emplace(x, Correspondence(b.fiber(x), b.fiber(x), std::move(rows)));
  }
  return ReducedFiberedCorrespondence(b, b, b.base().all(), std::move(fibers));
}

FiberedRelation to_binary_relation(const ReducedFiberedCorrespondence& r) {
  require_endorelation(r);
  std::vector<std::set<FiberedRelation::Tuple>> tuples(r.base().size());
  for (const auto& [x, rel] : r.fibers())
    for (const auto& [a, b] : rel.pairs()) tuples[x].insert({a, b});
  return FiberedRelation(r.source(), 2, std::move(tuples));
}

NaryReport nary_relation_check(const FiberedRelation& r) {
  NaryReport report;
  report.arity = r.arity();
  for (const auto& t : r.tuples()) report.tuple_count += t.size();
  if (r.arity() == 2) {
    auto reduced = to_reduced(r);
    if (!(to_binary_relation(reduced) == r)) {
      fail(ErrorCode::InvariantViolation, "2-ary relation does not round-trip");
    }
    report.binary = std::move(reduced);
  }
  return report;
}

}  // namespace fibra
