#include "fibra/bundle.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "fibra/error.hpp"

namespace fibra {

Bundle::Bundle(Label name, FinSet base, std::vector<FinSet> fibers,
               std::optional<Trivialization> trivialization,
               std::optional<FiniteTopology> base_topology,
               std::optional<FiniteTopology> total_topology)
    : name_(std::move(name)), base_(std::move(base)), fibers_(std::move(fibers)),
      trivialization_(std::move(trivialization)),
      base_topology_(std::move(base_topology)),
      total_topology_(std::move(total_topology)) {
  if (fibers_.size() != base_.size()) {
    fail(ErrorCode::InvalidBundle, "bundle '" + name_ + "' needs one fiber per base point");
  }
  if (trivialization_) {
    const auto& t = *trivialization_;
    if (t.charts.size() != base_.size()) {
      fail(ErrorCode::InvalidBundle, "bundle '" + name_ + "' has a chart table of wrong size");
    }
    for (std::size_t x = 0; x < base_.size(); ++x) {
      if (!t.charts[x]) continue;
      const auto& chart = *t.charts[x];
      std::vector<bool> hit(t.typical.size(), false);
      bool ok = chart.size() == fibers_[x].size() && chart.size() == t.typical.size();
      for (std::size_t v : chart) {
        if (!ok) break;
        if (v >= hit.size() || hit[v]) ok = false;
        else hit[v] = true;
      }
      if (!ok) {
        fail(ErrorCode::InvalidBundle, "chart of bundle '" + name_ + "' at '" + base_[x] +
                                           "' is not a bijection onto the typical fiber");
      }
    }
  }
  if (base_topology_ && base_topology_->points() != base_) {
    fail(ErrorCode::InvalidBundle, "base topology of '" + name_ + "' is on another set");
  }
  if (total_topology_ && total_topology_->points() != total_space().set) {
    fail(ErrorCode::InvalidBundle, "total-space topology of '" + name_ + "' is on another set");
  }
}

const std::vector<std::size_t>& Bundle::chart(std::size_t x) const {
  if (!trivialization_ || !trivialization_->charts.at(x)) {
    fail(ErrorCode::MissingTrivialization,
         "bundle '" + name_ + "' has no chart at '" + base_[x] + "'");
  }
  return *trivialization_->charts[x];
}

TotalSpace Bundle::total_space() const {
  std::vector<Label> labels;
  for (std::size_t x = 0; x < base_.size(); ++x)
    for (const auto& a : fibers_[x]) labels.push_back(pair_label(base_[x], a));
  TotalSpace out{FinSet(std::move(labels)), {}, {}, {}};
  out.points.resize(out.set.size());
  out.projection.resize(out.set.size());
  out.index.resize(base_.size());
  for (std::size_t x = 0; x < base_.size(); ++x) {
    for (std::size_t a = 0; a < fibers_[x].size(); ++a) {
      const std::size_t i = out.set.index_of(pair_label(base_[x], fibers_[x][a]));
      out.points[i] = {x, a};
      out.projection[i] = x;
      out.index[x].push_back(i);
    }
  }
  return out;
}

Bundle Bundle::renamed(Label name) const {
  Bundle out = *this;
  out.name_ = std::move(name);
  return out;
}

bool operator==(const Bundle& a, const Bundle& b) {
  return a.base_ == b.base_ && a.fibers_ == b.fibers_ &&
         a.trivialization_ == b.trivialization_ &&
         a.base_topology_ == b.base_topology_ && a.total_topology_ == b.total_topology_;
}

Label section_label(const Bundle& b, const Section& s) {
  std::vector<Label> parts;
  for (std::size_t x = 0; x < s.choice.size(); ++x) parts.push_back(b.fiber(x)[s.choice[x]]);
  return tuple_label(parts);
}

bool SubbundleWitness::valid() const {
  const auto injective = [](const std::vector<std::size_t>& m, std::size_t range) {
    std::vector<bool> hit(range, false);
    for (std::size_t v : m) {
      if (v >= range || hit[v]) return false;
      hit[v] = true;
    }
    return true;
  };
  if (base_injection.size() != sub.base().size()) return false;
  if (!injective(base_injection, super.base().size())) return false;
  if (fiber_injections.size() != sub.base().size()) return false;
  for (std::size_t x = 0; x < sub.base().size(); ++x) {
    // the fiber over x must land in the fiber over its image point
    if (fiber_injections[x].size() != sub.fiber(x).size()) return false;
    if (!injective(fiber_injections[x], super.fiber(base_injection[x]).size())) return false;
  }
  return true;
}

SubbundleWitness is_subbundle(const Bundle& sub, const Bundle& super) {
  SubbundleWitness w{sub, super, {}, {}};
  for (std::size_t x = 0; x < sub.base().size(); ++x) {
    const auto y = super.base().find(sub.base()[x]);
    if (!y) {
      fail(ErrorCode::NotContained, "base point '" + sub.base()[x] + "' of '" +
                                        sub.name() + "' is not in '" + super.name() + "'");
    }
    w.base_injection.push_back(*y);
    std::vector<std::size_t> inj;
    for (const auto& a : sub.fiber(x)) {
      const auto b = super.fiber(*y).find(a);
      if (!b) {
        fail(ErrorCode::NotContained, "fiber element '" + a + "' over '" + sub.base()[x] +
                                          "' is not in '" + super.name() + "'");
      }
      inj.push_back(*b);
    }
    w.fiber_injections.push_back(std::move(inj));
  }
  return w;
}

SubbundleWitness compose_witness(const SubbundleWitness& outer,
                                 const SubbundleWitness& inner) {
  if (!(inner.super == outer.sub)) {
    fail(ErrorCode::BundleMismatch, "witnesses do not chain");
  }
  SubbundleWitness w{inner.sub, outer.super, {}, {}};
  for (std::size_t x = 0; x < inner.base_injection.size(); ++x) {
    const std::size_t mid = inner.base_injection[x];
    w.base_injection.push_back(outer.base_injection[mid]);
    std::vector<std::size_t> inj;
    for (std::size_t a : inner.fiber_injections[x]) inj.push_back(outer.fiber_injections[mid][a]);
    w.fiber_injections.push_back(std::move(inj));
  }
  return w;
}

namespace {

std::optional<Trivialization> product_trivialization(const Bundle& a, const Bundle& b,
                                                     const ProductSet& base,
                                                     const std::vector<FinSet>& fibers,
                                                     bool reduced) {
  if (!a.trivialization() || !b.trivialization()) return std::nullopt;
  const auto typical = product_set(a.trivialization()->typical, b.trivialization()->typical);
  Trivialization t{typical.set, std::vector<std::optional<std::vector<std::size_t>>>(fibers.size())};
  const auto fill = [&](std::size_t point, std::size_t x, std::size_t y) {
    const auto& ca = a.trivialization()->charts[x];
    const auto& cb = b.trivialization()->charts[y];
    if (!ca || !cb) return;
    const auto fib = product_set(a.fiber(x), b.fiber(y));
    std::vector<std::size_t> chart(fibers[point].size());
    for (std::size_t i = 0; i < a.fiber(x).size(); ++i)
      for (std::size_t j = 0; j < b.fiber(y).size(); ++j)
        chart[fib.index[i][j]] = typical.index[(*ca)[i]][(*cb)[j]];
    t.charts[point] = std::move(chart);
  };
  if (reduced) {
    for (std::size_t x = 0; x < a.base().size(); ++x) fill(x, x, x);
  } else {
    for (std::size_t x = 0; x < a.base().size(); ++x)
      for (std::size_t y = 0; y < b.base().size(); ++y) fill(base.index[x][y], x, y);
  }
  return t;
}

}  // namespace

Bundle product(const Bundle& a, const Bundle& b) {
  const auto base = product_set(a.base(), b.base());
  std::vector<FinSet> fibers(base.set.size());
  for (std::size_t x = 0; x < a.base().size(); ++x)
    for (std::size_t y = 0; y < b.base().size(); ++y)
      fibers[base.index[x][y]] = product_set(a.fiber(x), b.fiber(y)).set;
  auto triv = product_trivialization(a, b, base, fibers, false);
  return Bundle(a.name() + "*" + b.name(), base.set, std::move(fibers), std::move(triv));
}

Bundle reduced_product(const Bundle& a, const Bundle& b) {
  if (a.base() != b.base()) {
    fail(ErrorCode::BaseMismatch, "reduced product needs a shared base");
  }
  std::vector<FinSet> fibers;
  for (std::size_t x = 0; x < a.base().size(); ++x)
    fibers.push_back(product_set(a.fiber(x), b.fiber(x)).set);
  auto triv = product_trivialization(a, b, ProductSet{}, fibers, true);
  return Bundle(a.name() + "*" + b.name(), a.base(), std::move(fibers), std::move(triv),
                a.base_topology());
}

std::size_t section_count(const Bundle& a) {
  std::size_t n = 1;
  for (const auto& f : a.fibers()) {
    if (f.empty()) return 0;
    if (n > std::numeric_limits<std::size_t>::max() / f.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    n *= f.size();
  }
  return n;
}

std::vector<Section> sections(const Bundle& a, std::size_t max_enum) {
  for (std::size_t x = 0; x < a.base().size(); ++x) {
    if (a.fiber(x).empty()) {
      fail(ErrorCode::EmptyFiber, "fiber over '" + a.base()[x] + "' of '" + a.name() +
                                      "' is empty, so there are no sections");
    }
  }
  const std::size_t count = section_count(a);
  if (count > max_enum) {
    fail(ErrorCode::EnumerationBound, "bundle '" + a.name() + "' has " +
                                          std::to_string(count) + " sections, above the bound " +
                                          std::to_string(max_enum));
  }
  std::vector<Section> out;
  out.reserve(count);
  Section s{std::vector<std::size_t>(a.base().size(), 0)};
  while (true) {
    out.push_back(s);
    // last base point varies fastest: lexicographic order
    std::size_t k = s.choice.size();
    while (k > 0) {
      --k;
      if (++s.choice[k] < a.fiber(k).size()) break;
      s.choice[k] = 0;
      if (k == 0) return out;
    }
    if (s.choice.empty()) return out;
  }
}

Mask degenerate_fibers(const Bundle& a) {
  const std::size_t n = a.base().size();
  std::map<std::size_t, std::size_t> counts;
  for (const auto& f : a.fibers()) ++counts[f.size()];
  Mask out = 0;
  std::optional<std::size_t> majority;
  for (const auto& [size, count] : counts)
    if (2 * count > n) majority = size;
  for (std::size_t x = 0; x < n; ++x) {
    if (!majority || a.fiber(x).size() != *majority) out |= bit(x);
    if (a.trivialization() && !a.trivialization()->charts[x]) out |= bit(x);
  }
  return out;
}

}  // namespace fibra
