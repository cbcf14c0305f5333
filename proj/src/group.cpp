#include "fibra/group.hpp"

#include <map>

#include "fibra/error.hpp"

namespace fibra {

FiniteGroup::FiniteGroup(FinSet elements, std::vector<std::vector<std::size_t>> table,
                         std::size_t identity)
    : elements_(std::move(elements)), table_(std::move(table)), identity_(identity) {
  const std::size_t n = elements_.size();
  if (n == 0) fail(ErrorCode::InvalidGroup, "a group has at least the identity");
  if (identity_ >= n) fail(ErrorCode::InvalidGroup, "identity is not an element");
  if (table_.size() != n) fail(ErrorCode::InvalidGroup, "multiplication table is not total");
  for (const auto& row : table_) {
    if (row.size() != n) fail(ErrorCode::InvalidGroup, "multiplication table is not total");
    for (std::size_t v : row)
      if (v >= n) fail(ErrorCode::InvalidGroup, "multiplication leaves the group");
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (table_[identity_][g] != g || table_[g][identity_] != g) {
      fail(ErrorCode::InvalidGroup, "'" + elements_[identity_] + "' is not an identity");
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
          fail(ErrorCode::InvalidGroup, "multiplication is not associative at (" +
                                            elements_[a] + "," + elements_[b] + "," +
                                            elements_[c] + ")");
        }
  inverse_.assign(n, n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h)
      if (table_[g][h] == identity_ && table_[h][g] == identity_) inverse_[g] = h;
    if (inverse_[g] == n) {
      fail(ErrorCode::InvalidGroup, "'" + elements_[g] + "' has no inverse");
    }
  }
}

bool FiniteGroup::is_subgroup(Mask m) const {
  if (!contains(m, identity_)) return false;
  bool ok = true;
  for_each_bit(m, [&](std::size_t g) {
    if (!contains(m, inverse_[g])) ok = false;
    for_each_bit(m, [&](std::size_t h) {
      if (!contains(m, table_[g][h])) ok = false;
    });
  });
  return ok;
}

FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0 || n > 10) fail(ErrorCode::InvalidGroup, "cyclic_group supports orders 1..10");
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return FiniteGroup(FinSet(std::move(labels)), std::move(table), 0);
}

TstarRepresentation::TstarRepresentation(
    FiberedGroup group_bundle, Bundle space,
    std::vector<std::vector<std::vector<std::size_t>>> action)
    : group_bundle_(std::move(group_bundle)), space_(std::move(space)),
      action_(std::move(action)) {
  const auto& base = space_.base();
  const auto& g = group_bundle_.group;
  if (group_bundle_.base != base) {
    fail(ErrorCode::BaseMismatch, "group bundle and space have different bases");
  }
  if (action_.size() != base.size()) {
    fail(ErrorCode::InvalidAction, "one action table per base point is required");
  }
  for (std::size_t x = 0; x < base.size(); ++x) {
    const std::size_t m = space_.fiber(x).size();
    const auto where = [&](const std::string& what) {
      fail(ErrorCode::InvalidAction, what + " at '" + base[x] + "'");
    };
    if (action_[x].size() != g.size()) where("action is not defined for every group element");
    for (std::size_t a = 0; a < g.size(); ++a) {
      if (action_[x][a].size() != m) where("action of '" + g.elements()[a] + "' is not total");
      Mask hit = 0;
      for (std::size_t v : action_[x][a]) {
        if (v >= m) where("action leaves the fiber");
        hit |= bit(v);
      }
      if (hit != space_.fiber(x).all()) {
        where("'" + g.elements()[a] + "' does not act bijectively");
      }
    }
    for (std::size_t e = 0; e < m; ++e) {
      if (action_[x][g.identity()][e] != e) where("identity acts nontrivially");
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
          if (action_[x][a][action_[x][b][e]] != action_[x][g.mul(a, b)][e]) {
            where("action is not compatible with the group law");
          }
    }
  }
}

Mask stabilizer(const TstarRepresentation& rep, std::size_t x, std::size_t e) {
  if (x >= rep.space().base().size()) fail(ErrorCode::UnknownPoint, "no such base point");
  if (e >= rep.space().fiber(x).size()) fail(ErrorCode::UnknownElement, "no such fiber element");
  Mask out = 0;
  for (std::size_t g = 0; g < rep.group().size(); ++g)
    if (rep.act(x, g, e) == e) out |= bit(g);
  if (!rep.group().is_subgroup(out)) {
    fail(ErrorCode::InvariantViolation, "stabilizer is not a subgroup");
  }
  return out;
}

std::vector<GroupSection> little_group(const TstarRepresentation& rep, const Section& h,
                                       std::size_t max_enum, ExecPolicy policy) {
  const std::size_t n = rep.space().base().size();
  if (h.choice.size() != n) fail(ErrorCode::SectionMismatch, "section has the wrong length");
  for (std::size_t x = 0; x < n; ++x) {
    if (h.choice[x] >= rep.space().fiber(x).size()) {
      fail(ErrorCode::SectionMismatch, "section leaves the fiber over '" +
                                           rep.space().base()[x] + "'");
    }
  }
  const std::size_t order = rep.group().size();
  std::size_t total = 1;
  for (std::size_t x = 0; x < n; ++x) {
    if (total > max_enum / order) {
      fail(ErrorCode::EnumerationBound,
           "|G|^|M| exceeds the enumeration bound " + std::to_string(max_enum));
    }
    total *= order;
  }
  if (total > max_enum) {
    fail(ErrorCode::EnumerationBound,
         "|G|^|M| exceeds the enumeration bound " + std::to_string(max_enum));
  }

  const auto decode = [&](std::size_t k) {
    GroupSection g(n);
    for (std::size_t x = n; x-- > 0;) {
      g[x] = k % order;
      k /= order;
    }
    return g;
  };
  const auto fixes = [&](std::size_t k) {
    for (std::size_t x = n; x-- > 0;) {
      if (rep.act(x, k % order, h.choice[x]) != h.choice[x]) return false;
      k /= order;
    }
    return true;
  };

  std::vector<char> keep(total, 0);
  const auto count = static_cast<std::ptrdiff_t>(total);
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) keep[k] = fixes(static_cast<std::size_t>(k));
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) keep[k] = fixes(static_cast<std::size_t>(k));
  }
  std::vector<GroupSection> out;
  for (std::size_t k = 0; k < total; ++k)
    if (keep[k]) out.push_back(decode(k));

  // every fiber of the little group sits in the pointwise stabilizer, and
  // the little group is exactly their product
  std::size_t product = 1;
  std::vector<Mask> stab(n);
  for (std::size_t x = 0; x < n; ++x) {
    stab[x] = stabilizer(rep, x, h.choice[x]);
    product *= static_cast<std::size_t>(popcount(stab[x]));
  }
  for (const auto& g : out)
    for (std::size_t x = 0; x < n; ++x)
      if (!contains(stab[x], g[x])) {
        fail(ErrorCode::InvariantViolation, "little group leaves a pointwise stabilizer");
      }
  if (out.size() != product) {
    fail(ErrorCode::InvariantViolation, "little group is not the product of stabilizers");
  }
  return out;
}

bool is_free(const TstarRepresentation& rep) {
  const Mask trivial = bit(rep.group().identity());
  for (std::size_t x = 0; x < rep.space().base().size(); ++x)
    for (std::size_t e = 0; e < rep.space().fiber(x).size(); ++e)
      if (stabilizer(rep, x, e) != trivial) return false;
  return true;
}

ReducedFiberedCorrespondence orbit_equivalence(const TstarRepresentation& rep,
                                               ExecPolicy policy) {
  const Bundle& space = rep.space();
  const std::size_t n = space.base().size();
  std::vector<std::vector<Mask>> rows(n);
  const auto orbit_rows = [&](std::size_t x) {
    const std::size_t m = space.fiber(x).size();
    rows[x].assign(m, 0);
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t g = 0; g < rep.group().size(); ++g) rows[x][p] |= bit(rep.act(x, g, p));
  };
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t x = 0; x < count; ++x) orbit_rows(static_cast<std::size_t>(x));
  } else {
    for (std::ptrdiff_t x = 0; x < count; ++x) orbit_rows(static_cast<std::size_t>(x));
  }
  std::map<std::size_t, Correspondence> fibers;
  for (std::size_t x = 0; x < n; ++x)
    fibers.emplace(x, Correspondence(space.fiber(x), space.fiber(x), std::move(rows[x])));
  ReducedFiberedCorrespondence s(space, space, space.base().all(), std::move(fibers));
  if (!classify(s).equivalence) {
    fail(ErrorCode::InvariantViolation, "orbit relation is not an equivalence");
  }
  return s;
}

Bundle level_bundle(const QuotientResult& q) {
  const Bundle& lower = q.quotient;
  const TotalSpace total = lower.total_space();
  std::vector<FinSet> fibers(total.set.size());
  const Bundle& e = q.nat.source();
  for (std::size_t x = 0; x < q.classes.size(); ++x) {
    for (std::size_t c = 0; c < q.classes[x].size(); ++c) {
      fibers[total.index[x][c]] = FinSet(e.fiber(x).labels_of(q.classes[x][c]));
    }
  }
  return Bundle(e.name() + "->" + lower.name(), total.set, std::move(fibers));
}

OrbitQuotient orbit_quotient(const TstarRepresentation& rep, ExecPolicy policy) {
  OrbitQuotient out{quotient_bundle(rep.space(), orbit_equivalence(rep, policy)), {}, false, {}, {}, 0};
  const auto& q = out.quotient;
  out.level2.levels = {q.quotient, level_bundle(q)};
  out.free = is_free(rep);
  const std::size_t order = rep.group().size();
  for (std::size_t x = 0; x < q.classes.size(); ++x) {
    const FinSet& fib = rep.space().fiber(x);
    for (Mask cls : q.classes[x]) {
      const auto least = static_cast<std::size_t>(std::countr_zero(cls));
      const auto size = static_cast<std::size_t>(popcount(cls));
      if (size != order) out.degenerate.push_back({x, fib[least], size});
      if (!out.free) continue;
      OrbitBijection b{x, fib[least], {}};
      Mask hit = 0;
      for (std::size_t g = 0; g < order; ++g) {
        const std::size_t e = rep.act(x, g, least);
        b.element_of.push_back(e);
        hit |= bit(e);
      }
      if (hit != cls || size != order) {
        fail(ErrorCode::InvariantViolation, "free orbit is not in bijection with the group");
      }
      out.bijections.push_back(std::move(b));
    }
  }
  out.degenerate_points = degenerate_fibers(q.quotient);
  tower_validate(out.level2);
  return out;
}

void tower_validate(const Tower& t) {
  for (std::size_t k = 1; k < t.levels.size(); ++k) {
    if (t.levels[k].base() != t.levels[k - 1].total_space().set) {
      fail(ErrorCode::BrokenChain, "level " + std::to_string(k + 1) + " ('" +
                                       t.levels[k].name() +
                                       "') does not lie over the total space of level " +
                                       std::to_string(k));
    }
  }
}

std::vector<std::size_t> tower_project(const Tower& t, std::size_t from, std::size_t to) {
  tower_validate(t);
  if (from > t.levels.size() || to >= from) {
    fail(ErrorCode::BrokenChain, "projection must go from a higher level to a lower one");
  }
  std::vector<std::size_t> map = t.levels[from - 1].total_space().projection;
  for (std::size_t k = from - 1; k > to; --k) {
    const auto step = t.levels[k - 1].total_space().projection;
    for (auto& v : map) v = step[v];
  }
  return map;
}

}  // namespace fibra
