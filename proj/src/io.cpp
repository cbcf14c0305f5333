#include "fibra/io.hpp"

#include <set>
#include <utility>

#include "fibra/error.hpp"

namespace fibra::io {

namespace {

using Ptr = Json::json_pointer;

std::string where(const Ptr& p) {
  const std::string s = p.to_string();
  return s.empty() ? "/" : s;
}

[[noreturn]] void parse_error(const Ptr& p, const std::string& msg) {
  fail(ErrorCode::ParseError, where(p) + ": " + msg);
}

[[noreturn]] void invalid(const Ptr& p, const std::string& msg) {
  fail(ErrorCode::InvariantViolation, where(p) + ": " + msg);
}

/// Runs `fn`, reporting any library error as an invariant violation at `p`.
template <class Fn>
auto at(const Ptr& p, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvariantViolation) throw;
    invalid(p, std::string(to_string(e.code())) + ": " + e.what());
  }
}

const Json& object(const Json& j, const Ptr& p) {
  if (!j.is_object()) parse_error(p, "expected an object");
  return j;
}

const Json& array(const Json& j, const Ptr& p) {
  if (!j.is_array()) parse_error(p, "expected an array");
  return j;
}

std::string string(const Json& j, const Ptr& p) {
  if (!j.is_string()) parse_error(p, "expected a string");
  return j.get<std::string>();
}

const Json& field(const Json& j, const Ptr& p, const std::string& key) {
  object(j, p);
  const auto it = j.find(key);
  if (it == j.end()) parse_error(p / key, "missing field");
  return *it;
}

void allow_fields(const Json& j, const Ptr& p, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) parse_error(p / k, "unknown field");
  }
}

void check_kind(const Json& j, const Ptr& p, const char* kind) {
  if (j.contains("kind") && string(j["kind"], p / "kind") != kind) {
    parse_error(p / "kind", std::string("expected \"") + kind + "\"");
  }
}

std::vector<Label> label_list(const Json& j, const Ptr& p) {
  array(j, p);
  std::vector<Label> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string(j[i], p / i));
  return out;
}

FinSet label_set(const Json& j, const Ptr& p) {
  auto labels = label_list(j, p);
  return at(p, [&] { return FinSet(std::move(labels)); });
}

std::pair<Label, Label> label_pair(const Json& j, const Ptr& p) {
  if (!j.is_array() || j.size() != 2) parse_error(p, "expected a pair [a, b]");
  return {string(j[0], p / 0), string(j[1], p / 1)};
}

std::vector<std::pair<Label, Label>> pair_list(const Json& j, const Ptr& p) {
  array(j, p);
  std::vector<std::pair<Label, Label>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(label_pair(j[i], p / i));
  return out;
}

/// Splits "a|b|c"; the number of parts must equal `arity`.
std::vector<Label> split_key(const std::string& key, std::size_t arity, const Ptr& p) {
  std::vector<Label> parts;
  if (arity == 0) {
    if (!key.empty()) parse_error(p, "a nullary entry has the empty key");
    return parts;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = key.find('|', start);
    parts.push_back(key.substr(start, bar - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  if (parts.size() != arity) {
    parse_error(p, "key '" + key + "' needs " + std::to_string(arity) + " '|'-separated parts");
  }
  return parts;
}

std::string join_key(const std::vector<Label>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "|" : "") + parts[i];
  return out;
}

std::size_t index_in(const FinSet& s, const Label& l, const Ptr& p) {
  const auto i = s.find(l);
  if (!i) invalid(p, "'" + l + "' is not an element of " + to_json(s).dump());
  return *i;
}

std::vector<Mask> opens_of(const FinSet& points, const Json& j, const Ptr& p) {
  array(j, p);
  std::vector<Mask> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Mask m = 0;
    const auto labels = label_list(j[i], p / i);
    for (std::size_t k = 0; k < labels.size(); ++k) m |= bit(index_in(points, labels[k], p / i / k));
    out.push_back(m);
  }
  return out;
}

Json opens_json(const FiniteTopology& t) {
  std::set<std::vector<Label>> opens;
  for (Mask m : t.opens()) opens.insert(t.points().labels_of(m));
  Json out = Json::array();
  for (const auto& o : opens) out.push_back(o);
  return out;
}

Json pairs_json(const Correspondence& c) {
  Json out = Json::array();
  for (const auto& [a, b] : c.label_pairs()) out.push_back(Json::array({a, b}));
  return out;
}

class Loader {
 public:
  explicit Loader(Universe& u) : u_(u) {}

  void run(const Json& doc) {
    const Ptr root;
    object(doc, root);
    allow_fields(doc, root,
                 {"sets", "topologies", "algebras", "correspondences", "bundles", "groups",
                  "fibered", "reduced", "morphisms", "representations", "relations", "towers"});
    each(doc, "sets", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.sets.emplace(n, label_set(j, p));
    });
    each(doc, "topologies", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.topologies.emplace(n, topology(j, p));
    });
    each(doc, "algebras", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.algebras.emplace(n, algebra(j, p));
    });
    each(doc, "correspondences", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.correspondences.emplace(n, correspondence(j, p));
    });
    each(doc, "bundles", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.bundles.emplace(n, bundle(n, j, p));
    });
    each(doc, "groups", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.groups.emplace(n, group(j, p));
    });
    each(doc, "fibered", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.fibered.emplace(n, fibered(j, p));
    });
    each(doc, "reduced", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.reduced.emplace(n, reduced(j, p));
    });
    each(doc, "morphisms", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.morphisms.emplace(n, morphism(j, p));
    });
    each(doc, "representations", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.representations.emplace(n, representation(j, p));
    });
    each(doc, "relations", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.relations.emplace(n, relation(j, p));
    });
    each(doc, "towers", [&](const std::string& n, const Json& j, const Ptr& p) {
      u_.towers.emplace(n, tower(j, p));
    });
  }

 private:
  template <class Fn>
  void each(const Json& doc, const char* collection, Fn&& fn) {
    const auto it = doc.find(collection);
    if (it == doc.end()) return;
    const Ptr p = Ptr() / collection;
    object(*it, p);
    for (const auto& [name, value] : it->items()) {
      if (!names_.insert(name).second) invalid(p / name, "name '" + name + "' is already used");
      fn(name, value, p / name);
    }
  }

  FinSet set_ref(const Json& j, const Ptr& p) {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      const auto it = u_.sets.find(name);
      if (it == u_.sets.end()) invalid(p, "no set named '" + name + "'");
      return it->second;
    }
    return label_set(j, p);
  }

  const Bundle& bundle_ref(const Json& j, const Ptr& p) {
    const auto name = string(j, p);
    const auto it = u_.bundles.find(name);
    if (it == u_.bundles.end()) invalid(p, "no bundle named '" + name + "'");
    return it->second;
  }

  FiniteTopology topology(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"points", "opens"});
    const FinSet points = set_ref(field(j, p, "points"), p / "points");
    const auto opens = opens_of(points, field(j, p, "opens"), p / "opens");
    return at(p, [&] { return FiniteTopology(points, opens); });
  }

  FiniteAlgebra algebra(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"carrier", "ops"});
    const FinSet carrier = set_ref(field(j, p, "carrier"), p / "carrier");
    const Ptr ops_p = p / "ops";
    const Json& ops = object(field(j, p, "ops"), ops_p);
    std::vector<Operation> out;
    for (const auto& [name, spec] : ops.items()) {
      const Ptr op_p = ops_p / name;
      allow_fields(object(spec, op_p), op_p, {"arity", "table"});
      const Json& arity_j = field(spec, op_p, "arity");
      if (!arity_j.is_number_unsigned()) parse_error(op_p / "arity", "expected a count");
      const auto arity = arity_j.get<std::size_t>();
      std::size_t cells = 1;
      for (std::size_t k = 0; k < arity; ++k) {
        if (cells > 1'000'000 / std::max<std::size_t>(carrier.size(), 1)) {
          invalid(op_p, "operation table is too large");
        }
        cells *= carrier.size();
      }
      const Ptr table_p = op_p / "table";
      const Json& table = object(field(spec, op_p, "table"), table_p);
      std::vector<std::size_t> values(cells, carrier.size());
      for (const auto& [key, value] : table.items()) {
        const auto args = split_key(key, arity, table_p / key);
        std::size_t cell = 0;
        for (const auto& a : args) cell = cell * carrier.size() + index_in(carrier, a, table_p / key);
        values[cell] = index_in(carrier, string(value, table_p / key), table_p / key);
      }
      for (std::size_t v : values)
        if (v == carrier.size()) invalid(table_p, "table is not total");
      out.push_back(Operation{name, arity, std::move(values)});
    }
    return at(p, [&] { return FiniteAlgebra(carrier, std::move(out)); });
  }

  Correspondence correspondence(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"source", "target", "pairs"});
    const FinSet src = set_ref(field(j, p, "source"), p / "source");
    const FinSet dst = set_ref(field(j, p, "target"), p / "target");
    const auto pairs = pair_list(field(j, p, "pairs"), p / "pairs");
    return at(p / "pairs", [&] { return Correspondence(src, dst, pairs); });
  }

  Bundle bundle(const std::string& name, const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p,
                 {"base", "fibers", "trivialization", "base_topology", "total_topology"});
    const FinSet base = set_ref(field(j, p, "base"), p / "base");
    const Ptr fp = p / "fibers";
    const Json& fj = object(field(j, p, "fibers"), fp);
    std::vector<FinSet> fibers;
    for (const auto& x : base.labels()) {
      if (!fj.contains(x)) invalid(fp, "no fiber over '" + x + "'");
      fibers.push_back(label_set(fj[x], fp / x));
    }
    for (const auto& [x, v] : fj.items())
      if (!base.has(x)) invalid(fp / x, "'" + x + "' is not a base point");

    std::optional<Trivialization> triv;
    if (j.contains("trivialization")) {
      const Ptr tp = p / "trivialization";
      const Json& tj = j["trivialization"];
      allow_fields(object(tj, tp), tp, {"typical", "charts"});
      Trivialization t{label_set(field(tj, tp, "typical"), tp / "typical"), {}};
      t.charts.resize(base.size());
      const Ptr cp = tp / "charts";
      const Json& charts = object(field(tj, tp, "charts"), cp);
      for (const auto& [x, chart] : charts.items()) {
        const std::size_t xi = index_in(base, x, cp / x);
        object(chart, cp / x);
        std::vector<std::size_t> map(fibers[xi].size(), t.typical.size());
        for (const auto& [a, target] : chart.items()) {
          const std::size_t ai = index_in(fibers[xi], a, cp / x / a);
          map[ai] = index_in(t.typical, string(target, cp / x / a), cp / x / a);
        }
        for (std::size_t ai = 0; ai < map.size(); ++ai)
          if (map[ai] == t.typical.size()) invalid(cp / x, "no chart value for '" + fibers[xi][ai] + "'");
        t.charts[xi] = std::move(map);
      }
      triv = std::move(t);
    }

    std::optional<FiniteTopology> base_top;
    if (j.contains("base_topology")) {
      const Ptr bp = p / "base_topology";
      const auto opens = opens_of(base, j["base_topology"], bp);
      base_top = at(bp, [&] { return FiniteTopology(base, opens); });
    }
    std::optional<FiniteTopology> total_top;
    if (j.contains("total_topology")) {
      const Ptr tp = p / "total_topology";
      const FinSet total = at(p, [&] { return Bundle(name, base, fibers).total_space().set; });
      const auto opens = opens_of(total, j["total_topology"], tp);
      total_top = at(tp, [&] { return FiniteTopology(total, opens); });
    }
    return at(p, [&] {
      return Bundle(name, base, std::move(fibers), std::move(triv), std::move(base_top),
                    std::move(total_top));
    });
  }

  FiniteGroup group(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"elements", "table", "identity"});
    const FinSet elements = set_ref(field(j, p, "elements"), p / "elements");
    const Ptr tp = p / "table";
    const Json& table = object(field(j, p, "table"), tp);
    const std::size_t n = elements.size();
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n, n));
    for (const auto& [key, value] : table.items()) {
      const auto gh = split_key(key, 2, tp / key);
      t[index_in(elements, gh[0], tp / key)][index_in(elements, gh[1], tp / key)] =
          index_in(elements, string(value, tp / key), tp / key);
    }
    for (const auto& row : t)
      for (std::size_t v : row)
        if (v == n) invalid(tp, "table is not total");
    const std::size_t e =
        index_in(elements, string(field(j, p, "identity"), p / "identity"), p / "identity");
    return at(p, [&] { return FiniteGroup(elements, std::move(t), e); });
  }

  FiberedCorrespondence fibered(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"kind", "source", "target", "base_pairs", "fibers"});
    check_kind(j, p, "fibered");
    const Bundle& a = bundle_ref(field(j, p, "source"), p / "source");
    const Bundle& b = bundle_ref(field(j, p, "target"), p / "target");
    const auto base_pairs = pair_list(field(j, p, "base_pairs"), p / "base_pairs");
    const Correspondence base =
        at(p / "base_pairs", [&] { return Correspondence(a.base(), b.base(), base_pairs); });
    std::map<BasePair, Correspondence> fibers;
    if (j.contains("fibers")) {
      const Ptr fp = p / "fibers";
      for (const auto& [key, rel] : object(j["fibers"], fp).items()) {
        const auto xy = split_key(key, 2, fp / key);
        const std::size_t x = index_in(a.base(), xy[0], fp / key);
        const std::size_t y = index_in(b.base(), xy[1], fp / key);
        if (!base.relates(x, y)) invalid(fp / key, "fiber relation without its base pair");
        const auto pairs = pair_list(rel, fp / key);
        fibers.emplace(BasePair{x, y},
                       at(fp / key, [&] { return Correspondence(a.fiber(x), b.fiber(y), pairs); }));
      }
    }
    return at(p, [&] { return FiberedCorrespondence(a, b, base, std::move(fibers)); });
  }

  ReducedFiberedCorrespondence reduced(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"kind", "source", "target", "domain", "fibers"});
    check_kind(j, p, "reduced");
    const Bundle& a = bundle_ref(field(j, p, "source"), p / "source");
    const Bundle& b = bundle_ref(field(j, p, "target"), p / "target");
    if (a.base() != b.base()) invalid(p, "source and target have different bases");
    Mask domain = a.base().all();
    if (j.contains("domain")) {
      domain = 0;
      const auto labels = label_list(j["domain"], p / "domain");
      for (std::size_t i = 0; i < labels.size(); ++i)
        domain |= bit(index_in(a.base(), labels[i], p / "domain" / i));
    }
    std::map<std::size_t, Correspondence> fibers;
    if (j.contains("fibers")) {
      const Ptr fp = p / "fibers";
      for (const auto& [x, rel] : object(j["fibers"], fp).items()) {
        const std::size_t xi = index_in(a.base(), x, fp / x);
        if (!contains(domain, xi)) invalid(fp / x, "'" + x + "' is outside the domain");
        const auto pairs = pair_list(rel, fp / x);
        fibers.emplace(xi, at(fp / x, [&] { return Correspondence(a.fiber(xi), b.fiber(xi), pairs); }));
      }
    }
    return at(p, [&] { return ReducedFiberedCorrespondence(a, b, domain, std::move(fibers)); });
  }

  FiberedMorphism morphism(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"kind", "source", "target", "map"});
    check_kind(j, p, "morphism");
    const Bundle& a = bundle_ref(field(j, p, "source"), p / "source");
    const Bundle& b = bundle_ref(field(j, p, "target"), p / "target");
    if (a.base() != b.base()) invalid(p, "source and target have different bases");
    const Ptr mp = p / "map";
    const Json& mj = object(field(j, p, "map"), mp);
    std::vector<std::vector<std::size_t>> maps(a.base().size());
    for (std::size_t x = 0; x < a.base().size(); ++x) {
      const Label& xl = a.base()[x];
      const std::size_t n = a.fiber(x).size();
      maps[x].assign(n, b.fiber(x).size());
      if (!mj.contains(xl)) {
        if (n == 0) continue;
        invalid(mp, "no map over '" + xl + "'");
      }
      for (const auto& [el, v] : object(mj[xl], mp / xl).items())
        maps[x][index_in(a.fiber(x), el, mp / xl / el)] =
            index_in(b.fiber(x), string(v, mp / xl / el), mp / xl / el);
      for (std::size_t e = 0; e < n; ++e)
        if (maps[x][e] == b.fiber(x).size()) invalid(mp / xl, "no image for '" + a.fiber(x)[e] + "'");
    }
    for (const auto& [xl, v] : mj.items()) index_in(a.base(), xl, mp / xl);
    return at(p, [&] { return FiberedMorphism(a, b, std::move(maps)); });
  }

  TstarRepresentation representation(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"group", "space", "action"});
    const Json& gj = field(j, p, "group");
    std::optional<FiniteGroup> g;
    if (gj.is_string()) {
      const auto it = u_.groups.find(gj.get<std::string>());
      if (it == u_.groups.end()) invalid(p / "group", "no group named '" + gj.get<std::string>() + "'");
      g = it->second;
    } else {
      g = group(gj, p / "group");
    }
    const Bundle& e = bundle_ref(field(j, p, "space"), p / "space");
    const Ptr ap = p / "action";
    const Json& aj = object(field(j, p, "action"), ap);
    std::vector<std::vector<std::vector<std::size_t>>> action(e.base().size());
    for (std::size_t x = 0; x < e.base().size(); ++x) {
      const Label& xl = e.base()[x];
      const std::size_t n = e.fiber(x).size();
      action[x].assign(g->size(), std::vector<std::size_t>(n, n));
      if (!aj.contains(xl)) {
        if (n == 0) continue;
        invalid(ap, "no action over '" + xl + "'");
      }
      for (const auto& [key, v] : object(aj[xl], ap / xl).items()) {
        const auto ge = split_key(key, 2, ap / xl / key);
        action[x][index_in(g->elements(), ge[0], ap / xl / key)]
              [index_in(e.fiber(x), ge[1], ap / xl / key)] =
                  index_in(e.fiber(x), string(v, ap / xl / key), ap / xl / key);
      }
      for (const auto& row : action[x])
        for (std::size_t v : row)
          if (v == n) invalid(ap / xl, "action table is not total");
    }
    for (const auto& [xl, v] : aj.items()) index_in(e.base(), xl, ap / xl);
    return at(p, [&] {
      return TstarRepresentation(FiberedGroup{e.base(), *g}, e, std::move(action));
    });
  }

  FiberedRelation relation(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"bundle", "arity", "tuples"});
    const Bundle& a = bundle_ref(field(j, p, "bundle"), p / "bundle");
    const Json& arity_j = field(j, p, "arity");
    if (!arity_j.is_number_unsigned()) parse_error(p / "arity", "expected a count");
    const auto arity = arity_j.get<std::size_t>();
    std::vector<std::set<FiberedRelation::Tuple>> tuples(a.base().size());
    if (j.contains("tuples")) {
      const Ptr tp = p / "tuples";
      for (const auto& [xl, list] : object(j["tuples"], tp).items()) {
        const std::size_t x = index_in(a.base(), xl, tp / xl);
        array(list, tp / xl);
        for (std::size_t i = 0; i < list.size(); ++i) {
          const auto labels = label_list(list[i], tp / xl / i);
          FiberedRelation::Tuple t;
          for (std::size_t k = 0; k < labels.size(); ++k)
            t.push_back(index_in(a.fiber(x), labels[k], tp / xl / i / k));
          tuples[x].insert(std::move(t));
        }
      }
    }
    return at(p, [&] { return FiberedRelation(a, arity, std::move(tuples)); });
  }

  TowerSpec tower(const Json& j, const Ptr& p) {
    allow_fields(object(j, p), p, {"levels"});
    const auto levels = label_list(field(j, p, "levels"), p / "levels");
    for (std::size_t i = 0; i < levels.size(); ++i) bundle_ref(Json(levels[i]), p / "levels" / i);
    return TowerSpec{levels};
  }

  Universe& u_;
  std::set<std::string> names_;
};

}  // namespace

std::string Universe::kind_of(const std::string& name) const {
  if (sets.count(name)) return "sets";
  if (topologies.count(name)) return "topologies";
  if (algebras.count(name)) return "algebras";
  if (correspondences.count(name)) return "correspondences";
  if (bundles.count(name)) return "bundles";
  if (groups.count(name)) return "groups";
  if (fibered.count(name)) return "fibered";
  if (reduced.count(name)) return "reduced";
  if (morphisms.count(name)) return "morphisms";
  if (representations.count(name)) return "representations";
  if (relations.count(name)) return "relations";
  if (towers.count(name)) return "towers";
  return "";
}

Tower Universe::tower(const std::string& name) const {
  Tower t;
  for (const auto& level : towers.at(name).levels) t.levels.push_back(bundles.at(level));
  return t;
}

Universe load(const Json& doc) {
  Universe u;
  Loader(u).run(doc);
  return u;
}

Universe load_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("/: ") + e.what());
  }
  return load(doc);
}

Json to_json(const FinSet& s) { return Json(s.labels()); }

Json to_json(const FiniteTopology& t) {
  return Json{{"points", to_json(t.points())}, {"opens", opens_json(t)}};
}

Json to_json(const FiniteAlgebra& a) {
  const FinSet& c = a.carrier();
  Json ops = Json::object();
  for (const auto& op : a.operations()) {
    Json table = Json::object();
    for (std::size_t cell = 0; cell < op.table.size(); ++cell) {
      std::vector<Label> args(op.arity);
      std::size_t rest = cell;
      for (std::size_t k = op.arity; k-- > 0;) {
        args[k] = c[rest % c.size()];
        rest /= c.size();
      }
      table[join_key(args)] = c[op.table[cell]];
    }
    ops[op.name] = Json{{"arity", op.arity}, {"table", std::move(table)}};
  }
  return Json{{"carrier", to_json(c)}, {"ops", std::move(ops)}};
}

Json to_json(const Correspondence& c) {
  return Json{{"source", to_json(c.source())}, {"target", to_json(c.target())},
              {"pairs", pairs_json(c)}};
}

Json to_json(const Bundle& b) {
  Json fibers = Json::object();
  for (std::size_t x = 0; x < b.base().size(); ++x) fibers[b.base()[x]] = to_json(b.fiber(x));
  Json out{{"base", to_json(b.base())}, {"fibers", std::move(fibers)}};
  if (const auto& t = b.trivialization()) {
    Json charts = Json::object();
    for (std::size_t x = 0; x < t->charts.size(); ++x) {
      if (!t->charts[x]) continue;
      Json chart = Json::object();
      for (std::size_t a = 0; a < b.fiber(x).size(); ++a)
        chart[b.fiber(x)[a]] = t->typical[(*t->charts[x])[a]];
      charts[b.base()[x]] = std::move(chart);
    }
    out["trivialization"] = Json{{"typical", to_json(t->typical)}, {"charts", std::move(charts)}};
  }
  if (b.base_topology()) out["base_topology"] = opens_json(*b.base_topology());
  if (b.total_topology()) out["total_topology"] = opens_json(*b.total_topology());
  return out;
}

Json to_json(const FiniteGroup& g) {
  Json table = Json::object();
  const FinSet& el = g.elements();
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) table[el[a] + "|" + el[b]] = el[g.mul(a, b)];
  return Json{{"elements", to_json(el)}, {"table", std::move(table)},
              {"identity", el[g.identity()]}};
}

Json to_json(const FiberedCorrespondence& f) {
  Json fibers = Json::object();
  for (const auto& [key, rel] : f.fibers())
    fibers[f.source().base()[key.first] + "|" + f.target().base()[key.second]] = pairs_json(rel);
  return Json{{"kind", "fibered"},
              {"source", f.source().name()},
              {"target", f.target().name()},
              {"base_pairs", pairs_json(f.base())},
              {"fibers", std::move(fibers)}};
}

Json to_json(const ReducedFiberedCorrespondence& r) {
  Json fibers = Json::object();
  for (const auto& [x, rel] : r.fibers()) fibers[r.base()[x]] = pairs_json(rel);
  return Json{{"kind", "reduced"},
              {"source", r.source().name()},
              {"target", r.target().name()},
              {"domain", Json(r.base().labels_of(r.domain()))},
              {"fibers", std::move(fibers)}};
}

Json to_json(const FiberedMorphism& m) {
  Json map = Json::object();
  const auto& a = m.source();
  const auto& b = m.target();
  for (std::size_t x = 0; x < a.base().size(); ++x) {
    Json fiber = Json::object();
    for (std::size_t e = 0; e < a.fiber(x).size(); ++e) fiber[a.fiber(x)[e]] = b.fiber(x)[m(x, e)];
    map[a.base()[x]] = std::move(fiber);
  }
  return Json{{"kind", "morphism"}, {"source", a.name()}, {"target", b.name()}, {"map", std::move(map)}};
}

Json to_json(const TstarRepresentation& r) {
  Json action = Json::object();
  const auto& e = r.space();
  const FinSet& el = r.group().elements();
  for (std::size_t x = 0; x < e.base().size(); ++x) {
    Json fiber = Json::object();
    for (std::size_t g = 0; g < el.size(); ++g)
      for (std::size_t p = 0; p < e.fiber(x).size(); ++p)
        fiber[el[g] + "|" + e.fiber(x)[p]] = e.fiber(x)[r.act(x, g, p)];
    action[e.base()[x]] = std::move(fiber);
  }
  return Json{{"group", to_json(r.group())}, {"space", e.name()}, {"action", std::move(action)}};
}

Json to_json(const FiberedRelation& r) {
  Json tuples = Json::object();
  const auto& a = r.bundle();
  for (std::size_t x = 0; x < a.base().size(); ++x) {
    Json list = Json::array();
    for (const auto& t : r.tuples()[x]) {
      Json labels = Json::array();
      for (std::size_t i : t) labels.push_back(a.fiber(x)[i]);
      list.push_back(std::move(labels));
    }
    tuples[a.base()[x]] = std::move(list);
  }
  return Json{{"bundle", a.name()}, {"arity", r.arity()}, {"tuples", std::move(tuples)}};
}

Json to_json(const TowerSpec& t) { return Json{{"levels", t.levels}}; }

Json emit(const Universe& u) {
  Json out = Json::object();
  const auto put = [&](const char* key, const auto& collection) {
    if (collection.empty()) return;
    Json c = Json::object();
    for (const auto& [name, value] : collection) c[name] = to_json(value);
    out[key] = std::move(c);
  };
  put("sets", u.sets);
  put("topologies", u.topologies);
  put("algebras", u.algebras);
  put("correspondences", u.correspondences);
  put("bundles", u.bundles);
  put("groups", u.groups);
  put("fibered", u.fibered);
  put("reduced", u.reduced);
  put("morphisms", u.morphisms);
  put("representations", u.representations);
  put("relations", u.relations);
  put("towers", u.towers);
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace fibra::io
