#pragma once

// JSON documents holding named objects. Every collection is a JSON object
// keyed by name; names are unique across collections. Fibered objects refer
// to bundles by name, everything else is written inline.

#include <map>
#include <string>

#include <json.hpp>

#include "fibra/bundle.hpp"
#include "fibra/fibered.hpp"
#include "fibra/group.hpp"
#include "fibra/quotient.hpp"
#include "fibra/relation.hpp"
#include "fibra/topology.hpp"

namespace fibra::io {

using Json = nlohmann::json;

/// Tower levels as bundle names, bottom-up. Chaining is checked by the
/// `tower` command, not on load.
struct TowerSpec {
  std::vector<std::string> levels;
};

struct Universe {
  std::map<std::string, FinSet> sets;
  std::map<std::string, FiniteTopology> topologies;
  std::map<std::string, FiniteAlgebra> algebras;
  std::map<std::string, Correspondence> correspondences;
  std::map<std::string, Bundle> bundles;
  std::map<std::string, FiniteGroup> groups;
  std::map<std::string, FiberedCorrespondence> fibered;
  std::map<std::string, ReducedFiberedCorrespondence> reduced;
  std::map<std::string, FiberedMorphism> morphisms;
  std::map<std::string, TstarRepresentation> representations;
  std::map<std::string, FiberedRelation> relations;
  std::map<std::string, TowerSpec> towers;

  /// Collection holding `name`, or empty.
  std::string kind_of(const std::string& name) const;
  Tower tower(const std::string& name) const;
};

/// Throws ParseError for malformed JSON or wrong shapes and
/// InvariantViolation for objects that fail validation; both messages start
/// with the JSON pointer of the offending value.
Universe load(const Json& doc);
Universe load_text(const std::string& text);

/// Canonical document: keys and set elements sorted.
Json emit(const Universe& u);

Json to_json(const FinSet& s);
Json to_json(const FiniteTopology& t);
Json to_json(const FiniteAlgebra& a);
Json to_json(const Correspondence& c);
Json to_json(const Bundle& b);
Json to_json(const FiniteGroup& g);
Json to_json(const FiberedCorrespondence& f);
Json to_json(const ReducedFiberedCorrespondence& r);
Json to_json(const FiberedMorphism& m);
Json to_json(const TstarRepresentation& r);
Json to_json(const FiberedRelation& r);
Json to_json(const TowerSpec& t);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace fibra::io
