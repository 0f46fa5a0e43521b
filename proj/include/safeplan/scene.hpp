#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "safeplan/atom.hpp"
#include "safeplan/pddl.hpp"

namespace safeplan {

struct SceneObject {
  std::string name;
  std::string type = "object";
  /// flag name -> value, in file order
  std::vector<std::pair<std::string, bool>> attributes;
};

struct SceneRelation {
  std::string subject;
  std::string relation;
  std::string object;
};

struct SceneGraph {
  std::vector<SceneObject> objects;
  std::vector<SceneRelation> relations;
};

/// Reads `{"objects": [{"name", "type", "attributes": {flag: bool}}],
/// "relations": [{"subject", "relation", "object"}]}`. Throws Error on
/// malformed input or duplicate object names.
SceneGraph parse_scene(std::string_view json_text);

struct SceneInit {
  std::vector<TypedName> objects;
  AtomSet init;
};

/// A true flag `a` on object `o` becomes `a(o)`; a relation `r` from `s` to
/// `o` becomes `r(s, o)`. False flags produce nothing. Throws
/// UnknownRelationEndpoint when a relation names an undeclared object.
SceneInit scene_to_init(const SceneGraph& scene);

}  // namespace safeplan
