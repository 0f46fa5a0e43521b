#include "safeplan/scene.hpp"

#include <set>

#include <json.hpp>

#include "safeplan/error.hpp"

namespace safeplan {

SceneGraph parse_scene(std::string_view json_text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("scene: ") + e.what());
  }
  if (!doc.is_object()) throw Error("scene: top level must be an object");
  SceneGraph g;
  std::set<std::string> names;
  try {
    for (const auto& o : doc.value("objects", nlohmann::ordered_json::array())) {
      SceneObject obj;
      obj.name = o.at("name").get<std::string>();
      obj.type = o.value("type", std::string("object"));
      if (!is_identifier(obj.name)) throw Error("scene: invalid object name '" + obj.name + "'");
      if (!names.insert(obj.name).second) throw Error("scene: duplicate object '" + obj.name + "'");
      if (o.contains("attributes")) {
        for (const auto& [flag, value] : o.at("attributes").items()) {
          if (!is_identifier(flag)) throw Error("scene: invalid attribute name '" + flag + "'");
          obj.attributes.emplace_back(flag, value.get<bool>());
        }
      }
      g.objects.push_back(std::move(obj));
    }
    for (const auto& r : doc.value("relations", nlohmann::ordered_json::array())) {
      g.relations.push_back(
          {r.at("subject").get<std::string>(), r.at("relation").get<std::string>(), r.at("object").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("scene: ") + e.what());
  }
  return g;
}

SceneInit scene_to_init(const SceneGraph& scene) {
  SceneInit out;
  std::set<std::string> declared;
  for (const auto& o : scene.objects) {
    declared.insert(o.name);
    out.objects.push_back({o.name, o.type});
    for (const auto& [flag, value] : o.attributes) {
      if (value) out.init.insert(Atom(flag, {o.name}));
    }
  }
  for (const auto& r : scene.relations) {
    for (const auto* endpoint : {&r.subject, &r.object}) {
      if (!declared.contains(*endpoint))
        throw UnknownRelationEndpoint("relation '" + r.relation + "' refers to unknown object '" + *endpoint + "'");
    }
    out.init.insert(Atom(r.relation, {r.subject, r.object}));
  }
  return out;
}

}  // namespace safeplan
