#pragma once

// JSON encoding of the domain types. Decoding validates through the domain
// constructors; unknown fields are ignored, missing required fields throw
// Errc::InvalidValue with the field name.

#include <json.hpp>

#include "zblinks/model.hpp"

namespace zblinks {

using Json = nlohmann::json;

// Field helpers shared by the decoders.
const Json& require_field(const Json& obj, const char* name);
std::string require_string(const Json& obj, const char* name);
std::vector<std::string> string_list(const Json& obj, const char* name, bool required);
std::optional<std::string> optional_string(const Json& obj, const char* name);

}  // namespace zblinks

namespace nlohmann {

template <>
struct adl_serializer<zblinks::Date> {
    static void to_json(json& j, const zblinks::Date& d) { j = d.iso(); }
    static zblinks::Date from_json(const json& j);
};

template <>
struct adl_serializer<zblinks::ZbRecord> {
    static void to_json(json& j, const zblinks::ZbRecord& r);
    static zblinks::ZbRecord from_json(const json& j);
};

template <>
struct adl_serializer<zblinks::ArxivRecord> {
    static void to_json(json& j, const zblinks::ArxivRecord& r);
    static zblinks::ArxivRecord from_json(const json& j);
};

template <>
struct adl_serializer<zblinks::Partner> {
    static void to_json(json& j, const zblinks::Partner& p);
    static zblinks::Partner from_json(const json& j);
};

template <>
struct adl_serializer<zblinks::Link> {
    static void to_json(json& j, const zblinks::Link& l);
    static zblinks::Link from_json(const json& j);
};

template <>
struct adl_serializer<zblinks::FeatureVector> {
    static void to_json(json& j, const zblinks::FeatureVector& fv);
    static zblinks::FeatureVector from_json(const json& j);
};

template <>
struct adl_serializer<zblinks::GroundTruthPair> {
    static void to_json(json& j, const zblinks::GroundTruthPair& p);
    static zblinks::GroundTruthPair from_json(const json& j);
};

template <>
struct adl_serializer<zblinks::EvalReport> {
    static void to_json(json& j, const zblinks::EvalReport& r);
    static zblinks::EvalReport from_json(const json& j);
};

}  // namespace nlohmann
