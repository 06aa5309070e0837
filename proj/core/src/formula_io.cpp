#include <nlohmann/json.hpp>

#include "roembed/errors.hpp"
#include "roembed/formula.hpp"

namespace roembed {

using json = nlohmann::ordered_json;

namespace {

json node_to_json(const CanonicalNode& n) {
  json j = json::object();
  if (n.is_leaf()) {
    j["var"] = n.var;
    j["neg"] = n.negated;
    return j;
  }
  j["gate"] = std::string(to_string(n.gate));
  json kids = json::array();
  for (const auto& c : n.children) kids.push_back(node_to_json(c));
  j["children"] = std::move(kids);
  return j;
}

CanonicalNode node_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("tree node must be a JSON object");
  if (j.size() == 2 && j.contains("var") && j.contains("neg")) {
    if (!j["var"].is_string() || !j["neg"].is_boolean())
      throw MalformedInput("leaf needs a string \"var\" and a boolean \"neg\"");
    return CanonicalNode::leaf(j["var"].get<std::string>(), j["neg"].get<bool>());
  }
  if (j.size() == 2 && j.contains("gate") && j.contains("children")) {
    const json& g = j["gate"];
    GateKind kind;
    if (g == "AND") {
      kind = GateKind::And;
    } else if (g == "OR") {
      kind = GateKind::Or;
    } else {
      throw MalformedInput("gate must be \"AND\" or \"OR\"");
    }
    if (!j["children"].is_array()) throw MalformedInput("\"children\" must be an array");
    std::vector<CanonicalNode> kids;
    for (const auto& c : j["children"]) kids.push_back(node_from_json(c));
    return CanonicalNode::make_gate(kind, std::move(kids));
  }
  throw MalformedInput("tree node must be {\"gate\",\"children\"} or {\"var\",\"neg\"}");
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void write_dot(const CanonicalNode& n, std::size_t& next_id, std::string& out) {
  const std::size_t id = next_id++;
  const std::string name = "n" + std::to_string(id);
  if (n.is_leaf()) {
    out += "  " + name + " [label=\"" + (n.negated ? "\xC2\xAC" : "") + dot_escape(n.var) +
           "\", shape=plaintext];\n";
    return;
  }
  out += "  " + name + " [label=\"" + std::string(to_string(n.gate)) + "\"];\n";
  for (const auto& c : n.children) {
    const std::size_t child_id = next_id;
    write_dot(c, next_id, out);
    out += "  " + name + " -> n" + std::to_string(child_id) + ";\n";
  }
}

}  // namespace

std::string to_json(const CanonicalTree& t) { return node_to_json(t.root()).dump(); }

CanonicalTree canonical_tree_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("invalid JSON: ") + e.what());
  }
  return CanonicalTree(node_from_json(j));
}

std::string to_dot(const CanonicalTree& t) {
  std::string out = "digraph canonical_tree {\n";
  std::size_t next_id = 0;
  write_dot(t.root(), next_id, out);
  out += "}\n";
  return out;
}

}  // namespace roembed
