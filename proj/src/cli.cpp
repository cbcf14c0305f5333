#include "fibra/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fibra/error.hpp"
#include "fibra/io.hpp"

namespace fibra::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t max_enum_from_env() {
  const char* raw = std::getenv("FIBRA_MAX_ENUM");
  if (!raw || !*raw) return kDefaultMaxEnum;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) throw UsageError("FIBRA_MAX_ENUM must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<Label> split_labels(const std::string& s) {
  std::vector<Label> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

Json classes_json(const Bundle& e, const QuotientResult& q) {
  Json out = Json::object();
  for (std::size_t x = 0; x < q.classes.size(); ++x) {
    Json fiber = Json::object();
    for (std::size_t c = 0; c < q.classes[x].size(); ++c)
      fiber[q.quotient.fiber(x)[c]] = e.fiber(x).labels_of(q.classes[x][c]);
    out[e.base()[x]] = std::move(fiber);
  }
  return out;
}

Json named_bundle(const Bundle& b) { return Json{{"name", b.name()}, {"bundle", io::to_json(b)}}; }

class Runner {
 public:
  Runner(const io::Universe& u, std::size_t max_enum) : u_(u), max_enum_(max_enum) {}

  Json check(const std::string& obj, const std::string& property) {
    const auto p = parse_property(property);
    if (!p) throw UsageError("unknown property '" + property + "'");
    const auto r = endorelation(obj);
    Json out{{"property", to_string(*p)}, {"holds", relation_is(r, *p)}};
    if (const auto cx = find_counterexample(r, *p)) {
      out["counterexample"] = Json{{"point", cx->point}, {"elements", cx->elements}};
    }
    return out;
  }

  Json compose(const std::string& h, const std::string& f) {
    const std::string kind = kind_of(h);
    if (kind_of(f) != kind) throw UsageError("'" + h + "' and '" + f + "' are of different kinds");
    if (kind == "correspondences")
      return Json{{"correspondence", io::to_json(fibra::compose(u_.correspondences.at(h),
                                                                u_.correspondences.at(f)))}};
    if (kind == "fibered")
      return Json{{"fibered", io::to_json(fibered_compose(u_.fibered.at(h), u_.fibered.at(f)))}};
    if (kind == "reduced")
      return Json{{"reduced", io::to_json(reduced_compose(u_.reduced.at(h), u_.reduced.at(f)))}};
    if (kind == "morphisms")
      return Json{{"morphism", io::to_json(fibra::compose(u_.morphisms.at(h), u_.morphisms.at(f)))}};
    throw UsageError("compose takes correspondences, fibered, reduced or morphisms");
  }

  Json inverse(const std::string& f) {
    const std::string kind = kind_of(f);
    if (kind == "correspondences")
      return Json{{"correspondence", io::to_json(fibra::inverse(u_.correspondences.at(f)))}};
    if (kind == "fibered") return Json{{"fibered", io::to_json(fibered_inverse(u_.fibered.at(f)))}};
    if (kind == "reduced") return Json{{"reduced", io::to_json(reduced_inverse(u_.reduced.at(f)))}};
    throw UsageError("inverse takes correspondences, fibered or reduced");
  }

  Json image(const std::string& f, const std::string& sub) {
    const std::string kind = kind_of(f);
    if (kind == "fibered") {
      const auto& fc = u_.fibered.at(f);
      const auto img = image_of_subbundle(fc, is_subbundle(bundle(sub), fc.source()));
      Json out = named_bundle(img);
      out["subbundle_of"] = fc.target().name();
      out["verified"] = is_subbundle(img, fc.target()).valid();
      return out;
    }
    if (kind == "correspondences") {
      const auto& c = u_.correspondences.at(f);
      const Mask a = subset(c.source(), sub);
      return Json{{"of", c.source().labels_of(a)}, {"image", c.target().labels_of(fibra::image(c, a))}};
    }
    throw UsageError("image takes a fibered correspondence or a correspondence");
  }

  Json quotient(const std::string& b, const std::string& equiv) {
    const Bundle& e = bundle(b);
    const auto q = quotient_bundle(e, endorelation(equiv));
    Json out = named_bundle(q.quotient);
    out["classes"] = classes_json(e, q);
    out["nat"] = io::to_json(q.nat);
    return out;
  }

  Json factorize(const std::string& m) {
    const auto& f = lookup(u_.morphisms, m, "morphism");
    const auto [j, t, i] = fibra::factorize(f);
    Json bundles = Json::object();
    bundles[j.target().name()] = io::to_json(j.target());
    bundles[t.target().name()] = io::to_json(t.target());
    return Json{{"bundles", std::move(bundles)},
                {"j", io::to_json(j)},
                {"t", io::to_json(t)},
                {"i", io::to_json(i)},
                {"verified", fibra::compose(i, fibra::compose(t, j)) == f}};
  }

  Json orbits(const std::string& r) {
    const auto& rep = lookup(u_.representations, r, "representation");
    const auto oq = orbit_quotient(rep);
    const Bundle& e = rep.space();
    const FinSet& g = rep.group().elements();
    Json degenerate = Json::array();
    for (const auto& d : oq.degenerate)
      degenerate.push_back(Json{{"point", e.base()[d.point]}, {"class", d.label}, {"size", d.size}});
    Json bijections = Json::object();
    for (const auto& b : oq.bijections) {
      Json map = Json::object();
      for (std::size_t k = 0; k < g.size(); ++k) map[g[k]] = e.fiber(b.point)[b.element_of[k]];
      bijections[e.base()[b.point]][b.label] = std::move(map);
    }
    Json levels = Json::array();
    Json level_bundles = Json::object();
    for (const auto& level : oq.level2.levels) {
      levels.push_back(level.name());
      level_bundles[level.name()] = io::to_json(level);
    }
    return Json{{"free", oq.free},
                {"classes", classes_json(e, oq.quotient)},
                {"degenerate_classes", std::move(degenerate)},
                {"degenerate_points", oq.quotient.quotient.base().labels_of(oq.degenerate_points)},
                {"bijections", std::move(bijections)},
                {"quotient", named_bundle(oq.quotient.quotient)},
                {"level2", Json{{"levels", std::move(levels)}, {"bundles", std::move(level_bundles)}}}};
  }

  Json continuity(const std::string& c, const std::string& src, const std::string& dst,
                  const std::optional<std::string>& on) {
    const auto& phi = lookup(u_.correspondences, c, "correspondence");
    const auto& s = lookup(u_.topologies, src, "topology");
    const auto& t = lookup(u_.topologies, dst, "topology");
    if (!on) {
      Json at = Json::object();
      for (std::size_t a = 0; a < phi.source().size(); ++a)
        at[phi.source()[a]] = is_continuous_on(phi, s, t, bit(a));
      return Json{{"continuous", is_continuous(phi, s, t)}, {"continuous_at", std::move(at)}};
    }
    const Mask a = subset(phi.source(), *on);
    Json out{{"on", phi.source().labels_of(a)}, {"continuous", is_continuous_on(phi, s, t, a)}};
    if (a == 0) {
      out["limit"] = nullptr;
    } else {
      const Mask img = fibra::image(phi, a);
      const Filter nbhd = neighborhood_filter(s, a);
      out["limit"] = img == 0 ? limit_by_neighborhoods(phi, nbhd, t, img)
                              : limit_of_correspondence(phi, nbhd, t, img);
    }
    return out;
  }

  Json sections(const std::string& r) {
    const auto& f = lookup(u_.reduced, r, "reduced correspondence");
    const auto sc = sections_correspondence(f, max_enum_);
    Json pairs = Json::array();
    for (const auto& [a, b] : sc.label_pairs()) pairs.push_back(Json::array({a, b}));
    return Json{{"pairs", std::move(pairs)},
                {"source_sections", sc.source().size()},
                {"target_sections", sc.target().size()}};
  }

  Json classify(const std::string& r) {
    const auto c = fibra::classify(endorelation(r));
    return Json{{"classification", join(c.names(), ",")},
                {"transitive", c.transitive},
                {"symmetric", c.symmetric},
                {"antisymmetric", c.antisymmetric},
                {"reflexive", c.reflexive},
                {"preordering", c.preordering},
                {"ordering", c.ordering},
                {"equivalence", c.equivalence}};
  }

  Json tower(const std::string& name) {
    lookup(u_.towers, name, "tower");
    const Tower t = u_.tower(name);
    tower_validate(t);
    Json out{{"levels", u_.towers.at(name).levels}};
    if (t.levels.empty()) return out;
    const auto map = tower_project(t, t.levels.size(), 0);
    const FinSet top = t.levels.back().total_space().set;
    const FinSet& base = t.levels.front().base();
    Json projection = Json::object();
    for (std::size_t i = 0; i < map.size(); ++i) projection[top[i]] = base[map[i]];
    out["projection"] = std::move(projection);
    return out;
  }

  Json little_group(const std::string& r, const std::string& section) {
    const auto& rep = lookup(u_.representations, r, "representation");
    const Bundle& e = rep.space();
    const auto labels = split_labels(section);
    if (labels.size() != e.base().size()) {
      fail(ErrorCode::SectionMismatch, "section needs one element per base point");
    }
    Section h;
    for (std::size_t x = 0; x < labels.size(); ++x) {
      const auto i = e.fiber(x).find(labels[x]);
      if (!i) fail(ErrorCode::SectionMismatch, "'" + labels[x] + "' is not in the fiber over '" + e.base()[x] + "'");
      h.choice.push_back(*i);
    }
    const FinSet& g = rep.group().elements();
    Json stabilizers = Json::object();
    for (std::size_t x = 0; x < labels.size(); ++x)
      stabilizers[e.base()[x]] = g.labels_of(stabilizer(rep, x, h.choice[x]));
    Json sections = Json::array();
    const auto lg = fibra::little_group(rep, h, max_enum_);
    for (const auto& s : lg) {
      Json row = Json::array();
      for (std::size_t k : s) row.push_back(g[k]);
      sections.push_back(std::move(row));
    }
    return Json{{"section", labels},
                {"stabilizers", std::move(stabilizers)},
                {"sections", std::move(sections)},
                {"count", lg.size()}};
  }

  Json homomorphism(const std::string& c, const std::string& a, const std::string& b) {
    const auto& phi = lookup(u_.correspondences, c, "correspondence");
    return Json{{"homomorphism",
                 is_homomorphism_correspondence(phi, lookup(u_.algebras, a, "algebra"),
                                                lookup(u_.algebras, b, "algebra"))}};
  }

 private:
  std::string kind_of(const std::string& name) const {
    const std::string k = u_.kind_of(name);
    if (k.empty()) throw UsageError("no object named '" + name + "'");
    return k;
  }

  template <class Map>
  const typename Map::mapped_type& lookup(const Map& m, const std::string& name,
                                          const std::string& what) const {
    kind_of(name);
    const auto it = m.find(name);
    if (it == m.end()) throw UsageError("'" + name + "' is not a " + what);
    return it->second;
  }

  const Bundle& bundle(const std::string& name) const { return lookup(u_.bundles, name, "bundle"); }

  /// A reduced correspondence, or a binary fibered relation read as one.
  ReducedFiberedCorrespondence endorelation(const std::string& name) const {
    const std::string k = kind_of(name);
    if (k == "reduced") return u_.reduced.at(name);
    if (k == "relations") return to_reduced(u_.relations.at(name));
    throw UsageError("'" + name + "' is not a reduced correspondence or relation");
  }

  /// A named set or comma-separated labels, as a subset of `within`.
  Mask subset(const FinSet& within, const std::string& spec) const {
    const auto it = u_.sets.find(spec);
    const std::vector<Label> labels = it != u_.sets.end() ? it->second.labels() : split_labels(spec);
    return within.mask_of(labels);
  }

  const io::Universe& u_;
  std::size_t max_enum_;
};

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite bundles, fibered correspondences and group actions", "fibra"};
  std::string input;
  app.add_option("-u,--universe", input, "JSON document with the named objects ('-' for stdin)")
      ->required();
  app.require_subcommand(1);

  std::vector<std::string> operands;
  std::string property;
  std::optional<std::string> on;
  std::string section;
  const auto sub = [&](const char* name, const char* help,
                       std::initializer_list<const char*> positionals) {
    CLI::App* s = app.add_subcommand(name, help);
    for (const char* p : positionals) {
      s->add_option_function<std::string>(
           p, [&operands](const std::string& v) { operands.push_back(v); }, p)
          ->required();
    }
    return s;
  };
  sub("check", "Evaluate a relation property", {"object"})
      ->add_option("--property", property, "transitive, symmetric, antisymmetric or reflexive")
      ->required();
  sub("compose", "Compose: apply inner, then outer", {"outer", "inner"});
  sub("inverse", "Inverse correspondence", {"f"});
  sub("image", "Image of a subbundle (or of a subset)", {"f", "sub"});
  sub("quotient", "Quotient of a bundle by a fibered equivalence", {"bundle", "equivalence"});
  sub("factorize", "Factor a fibered morphism as i t j", {"morphism"});
  sub("orbits", "Orbit quotient of a representation", {"representation"});
  sub("continuity", "Continuity of a correspondence", {"correspondence", "source", "target"})
      ->add_option("--on", on, "named set or comma-separated labels");
  sub("sections", "Correspondence of sections", {"reduced"});
  sub("classify", "Preordering / ordering / equivalence", {"relation"});
  sub("tower", "Validate a tower and project to the base", {"tower"});
  sub("little-group", "Little group of a section", {"representation"})
      ->add_option("--section", section, "comma-separated fiber elements in base order")
      ->required();
  sub("homomorphism", "Correspondence of homomorphism check", {"correspondence", "source", "target"});
  sub("emit", "Print the canonical form of the document", {});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  Json report{{"command", command}, {"arguments", operands}};

  try {
    const std::size_t max_enum = max_enum_from_env();
    const io::Universe u = io::load_text(read_input(input));
    if (command == "emit") {
      out << io::dump(io::emit(u));
      return kOk;
    }
    Runner r(u, max_enum);
    const auto& a = operands;
    Json result;
    if (command == "check") {
      report["property"] = property;
      result = r.check(a[0], property);
    } else if (command == "compose") {
      result = r.compose(a[0], a[1]);
    } else if (command == "inverse") {
      result = r.inverse(a[0]);
    } else if (command == "image") {
      result = r.image(a[0], a[1]);
    } else if (command == "quotient") {
      result = r.quotient(a[0], a[1]);
    } else if (command == "factorize") {
      result = r.factorize(a[0]);
    } else if (command == "orbits") {
      result = r.orbits(a[0]);
    } else if (command == "continuity") {
      if (on) report["on"] = *on;
      result = r.continuity(a[0], a[1], a[2], on);
    } else if (command == "sections") {
      result = r.sections(a[0]);
    } else if (command == "classify") {
      result = r.classify(a[0]);
    } else if (command == "tower") {
      result = r.tower(a[0]);
    } else if (command == "little-group") {
      report["section"] = section;
      result = r.little_group(a[0], section);
    } else if (command == "homomorphism") {
      result = r.homomorphism(a[0], a[1], a[2]);
    }
    report["result"] = std::move(result);
    out << io::dump(report);
    return kOk;
  } catch (const UsageError& e) {
    err << "fibra: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    report["error"] = Json{{"code", to_string(e.code())}, {"message", e.what()}};
    out << io::dump(report);
    return kDomain;
  }
}

}  // namespace fibra::cli
