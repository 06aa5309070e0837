#pragma once

// Internal JSON helpers shared by the serializers. Private to the library;
// callers use the string-based functions in the module headers.

#include <string_view>

#include <nlohmann/json.hpp>

#include "roembed/two_party.hpp"

namespace roembed::detail {

using json = nlohmann::ordered_json;

json parse_json(std::string_view text);
json certificate_to_json(const EmbeddingCertificate& c);
EmbeddingCertificate certificate_from_json(const json& j);

}  // namespace roembed::detail
