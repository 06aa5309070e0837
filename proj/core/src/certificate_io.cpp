#include <nlohmann/json.hpp>

#include "json_detail.hpp"
#include "roembed/errors.hpp"
#include "roembed/two_party.hpp"

namespace roembed {

namespace detail {

namespace {

json entry_to_json(const CoordEntry& e) {
  json j = json::object();
  if (e.is_copy) {
    j["copy"] = e.slot;
    j["neg"] = e.negated;
  } else {
    j["fixed"] = e.bit ? 1 : 0;
  }
  return j;
}

CoordEntry entry_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("coordinate entry must be an object");
  if (j.size() == 1 && j.contains("fixed")) {
    const json& f = j["fixed"];
    if (!f.is_number_unsigned() || f.get<unsigned>() > 1) throw MalformedInput("\"fixed\" must be 0 or 1");
    return CoordEntry::fixed(f.get<unsigned>() == 1);
  }
  if (j.size() == 2 && j.contains("copy") && j.contains("neg")) {
    const json& s = j["copy"];
    if (!s.is_number_unsigned() || s.get<std::uint64_t>() == 0 || s.get<std::uint64_t>() > 0xffffffffULL)
      throw MalformedInput("\"copy\" must be a positive slot index");
    if (!j["neg"].is_boolean()) throw MalformedInput("\"neg\" must be a boolean");
    return CoordEntry::copy(s.get<std::uint32_t>(), j["neg"].get<bool>());
  }
  throw MalformedInput("coordinate entry must be {\"fixed\":0|1} or {\"copy\":int,\"neg\":bool}");
}

CoordMap map_from_json(const json& j, const char* name) {
  if (!j.is_array()) throw MalformedInput(std::string("\"") + name + "\" must be an array");
  CoordMap out;
  for (const auto& e : j) out.push_back(entry_from_json(e));
  return out;
}

}  // namespace

json certificate_to_json(const EmbeddingCertificate& c) {
  json j = json::object();
  j["embedded"] = std::string(to_string(c.embedded));
  j["r"] = c.r;
  json ha = json::array();
  for (const auto& e : c.h_a) ha.push_back(entry_to_json(e));
  json hb = json::array();
  for (const auto& e : c.h_b) hb.push_back(entry_to_json(e));
  j["h_a"] = std::move(ha);
  j["h_b"] = std::move(hb);
  j["target_formula"] = c.target_formula;
  j["gadget"] = c.gadget ? json(std::string(to_string(*c.gadget))) : json(nullptr);
  return j;
}

EmbeddingCertificate certificate_from_json(const json& j) {
  static const char* const keys[] = {"embedded", "r", "h_a", "h_b", "target_formula", "gadget"};
  if (!j.is_object()) throw MalformedInput("certificate must be a JSON object");
  for (const char* k : keys)
    if (!j.contains(k)) throw MalformedInput(std::string("certificate is missing \"") + k + "\"");
  if (j.size() != std::size(keys)) throw MalformedInput("certificate has unexpected fields");

  EmbeddingCertificate c;
  if (j["embedded"] == "DISJ") {
    c.embedded = Embedded::Disj;
  } else if (j["embedded"] == "NDISJ") {
    c.embedded = Embedded::Ndisj;
  } else {
    throw MalformedInput("\"embedded\" must be \"DISJ\" or \"NDISJ\"");
  }
  if (!j["r"].is_number_unsigned() || j["r"].get<std::uint64_t>() == 0)
    throw MalformedInput("\"r\" must be a positive integer");
  c.r = j["r"].get<std::size_t>();
  c.h_a = map_from_json(j["h_a"], "h_a");
  c.h_b = map_from_json(j["h_b"], "h_b");
  if (!j["target_formula"].is_string()) throw MalformedInput("\"target_formula\" must be a string");
  c.target_formula = j["target_formula"].get<std::string>();
  const json& g = j["gadget"];
  if (g.is_null()) {
    c.gadget = std::nullopt;
  } else if (g == "OR") {
    c.gadget = Gadget::Or;
  } else if (g == "AND") {
    c.gadget = Gadget::And;
  } else {
    throw MalformedInput("\"gadget\" must be \"OR\", \"AND\" or null");
  }
  for (const CoordMap* map : {&c.h_a, &c.h_b})
    for (const auto& e : *map)
      if (e.is_copy && e.slot > c.r)
        throw MalformedCertificate("copy slot " + std::to_string(e.slot) + " exceeds r = " + std::to_string(c.r));
  return c;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace detail

std::string to_json(const EmbeddingCertificate& c) { return detail::certificate_to_json(c).dump(); }

EmbeddingCertificate certificate_from_json(std::string_view text) {
  return detail::certificate_from_json(detail::parse_json(text));
}

}  // namespace roembed
