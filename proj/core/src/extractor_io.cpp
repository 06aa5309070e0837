#include <nlohmann/json.hpp>

#include "json_detail.hpp"
#include "roembed/errors.hpp"
#include "roembed/extractor.hpp"

namespace roembed {

using detail::json;

namespace {

json result_to_json(const ExtractionResult& r) {
  json j = json::object();
  j["m0"] = r.m0;
  j["m1"] = r.m1;
  j["s"] = r.s;
  j["claim1_ok"] = r.claim1_ok;
  j["claim1_applicable"] = r.claim1_applicable;
  j["guarantee_met"] = r.guarantee_met;
  j["cert0"] = r.cert0 ? detail::certificate_to_json(*r.cert0) : json(nullptr);
  j["cert1"] = r.cert1 ? detail::certificate_to_json(*r.cert1) : json(nullptr);
  return j;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw MalformedInput(std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t get_count(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_unsigned()) throw MalformedInput(std::string("\"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

bool get_flag(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) throw MalformedInput(std::string("\"") + key + "\" must be a boolean");
  return v.get<bool>();
}

std::string get_text(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw MalformedInput(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::optional<EmbeddingCertificate> get_cert(const json& j, const char* key) {
  const json& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  return detail::certificate_from_json(v);
}

ExtractionResult result_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("extraction result must be a JSON object");
  ExtractionResult r;
  r.m0 = get_count(j, "m0");
  r.m1 = get_count(j, "m1");
  r.s = get_count(j, "s");
  r.claim1_ok = get_flag(j, "claim1_ok");
  r.claim1_applicable = get_flag(j, "claim1_applicable");
  r.guarantee_met = get_flag(j, "guarantee_met");
  r.cert0 = get_cert(j, "cert0");
  r.cert1 = get_cert(j, "cert1");
  if (r.cert0.has_value() != (r.m0 > 0) || (r.cert0 && r.cert0->r != r.m0))
    throw MalformedInput("cert0 must be present exactly when m0 >= 1 and have r = m0");
  if (r.cert1.has_value() != (r.m1 > 0) || (r.cert1 && r.cert1->r != r.m1))
    throw MalformedInput("cert1 must be present exactly when m1 >= 1 and have r = m1");
  return r;
}

constexpr const char* kResultKeys[] = {"m0", "m1", "s", "claim1_ok", "claim1_applicable",
                                       "guarantee_met", "cert0", "cert1"};

}  // namespace

std::string to_json(const ExtractionResult& r) { return result_to_json(r).dump(); }

ExtractionResult extraction_result_from_json(std::string_view text) {
  const json j = detail::parse_json(text);
  if (j.is_object() && j.size() != std::size(kResultKeys))
    throw MalformedInput("extraction result has unexpected fields");
  return result_from_json(j);
}

std::string to_json(const TheoremReport& r) {
  json j = result_to_json(r.result);
  j["side"] = std::string(to_string(r.side));
  j["n_kept"] = r.n_kept;
  json restriction = json::object();
  for (const auto& [var, bit] : r.restriction) restriction[var] = bit ? 1 : 0;
  j["restriction"] = std::move(restriction);
  j["bound_R"] = r.bound_r();
  j["bound_Q"] = r.bound_q();
  j["n"] = r.n;
  j["gadget"] = std::string(to_string(r.gadget));
  j["restricted_formula"] = r.restricted_formula;
  j["fallback"] = r.fallback;
  j["bound_target"] = r.bound_target;
  j["bound_asserted"] = r.bound_asserted;
  j["bound_met"] = r.bound_met;
  return j.dump();
}

TheoremReport theorem_report_from_json(std::string_view text) {
  const json j = detail::parse_json(text);
  if (!j.is_object()) throw MalformedInput("theorem report must be a JSON object");
  if (j.size() != std::size(kResultKeys) + 12) throw MalformedInput("theorem report has unexpected fields");
  TheoremReport r;
  r.result = result_from_json(j);
  const std::string side = get_text(j, "side");
  if (side == "odd") {
    r.side = LevelSide::Odd;
  } else if (side == "even") {
    r.side = LevelSide::Even;
  } else {
    throw MalformedInput("\"side\" must be \"odd\" or \"even\"");
  }
  r.n_kept = get_count(j, "n_kept");
  const json& restriction = field(j, "restriction");
  if (!restriction.is_object()) throw MalformedInput("\"restriction\" must be an object");
  for (const auto& [var, bit] : restriction.items()) {
    if (!bit.is_number_unsigned() || bit.get<unsigned>() > 1)
      throw MalformedInput("restriction values must be 0 or 1");
    r.restriction[var] = bit.get<unsigned>() == 1;
  }
  r.n = get_count(j, "n");
  const std::string gadget = get_text(j, "gadget");
  if (gadget == "OR") {
    r.gadget = Gadget::Or;
  } else if (gadget == "AND") {
    r.gadget = Gadget::And;
  } else {
    throw MalformedInput("\"gadget\" must be \"OR\" or \"AND\"");
  }
  r.restricted_formula = get_text(j, "restricted_formula");
  r.fallback = get_flag(j, "fallback");
  r.bound_target = get_count(j, "bound_target");
  r.bound_asserted = get_flag(j, "bound_asserted");
  r.bound_met = get_flag(j, "bound_met");
  if (get_text(j, "bound_R") != r.bound_r() || get_text(j, "bound_Q") != r.bound_q())
    throw MalformedInput("bound strings disagree with m0/m1");
  return r;
}

}  // namespace roembed
