#pragma once

// Scholix 3.0 shaped link-information packages. The partner anchor is the
// Source, the zbMATH record the Target; MSC codes go into Target.Type.SubType
// joined by single spaces.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zblinks/model.hpp"

namespace zblinks {

inline constexpr std::string_view kLinkProviderName = "zbMATH Open";
inline constexpr std::string_view kZblUrlPrefix = "https://zbmath.org/?q=an%3A";
inline constexpr std::string_view kMscSchema = "msc2020";

struct ScholixIdentifier {
    std::string id;
    std::string id_scheme;
    std::string id_url;
};

struct ScholixType {
    std::string name;
    std::optional<std::string> sub_type;
    std::optional<std::string> sub_type_schema;
};

struct ScholixObject {
    std::vector<ScholixIdentifier> identifiers;
    ScholixType type;
    std::string title;
    std::vector<std::string> creators;
    std::optional<std::string> publication_date;  // YYYY, YYYY-MM or YYYY-MM-DD
    std::optional<std::string> publisher;
};

struct ScholixLinkPackage {
    Date link_publication_date;
    std::vector<std::string> link_providers;
    std::string relationship_type;
    std::optional<std::string> license_url;
    ScholixObject source;
    ScholixObject target;

    nlohmann::json to_json() const;
};

std::string join_msc_codes(const std::vector<std::string>& codes);

ScholixLinkPackage to_scholix(const Link& link, const ZbRecord& record, const Partner& partner);

struct SchemaViolation {
    std::string path;  // JSON pointer style, e.g. /Target/Identifier/0/ID
    std::string message;

    bool operator==(const SchemaViolation&) const = default;
};

// Checks a package against the bundled structural schema. Empty when the
// document conforms.
std::vector<SchemaViolation> validate_scholix(const nlohmann::json& doc);

// The bundled schema document.
const nlohmann::json& scholix_schema();

// Generic structural check used by validate_scholix. Supports type,
// required, properties, items, minItems, minLength, enum, local $ref and the formats
// "date" (YYYY-MM-DD), "partial-date" (YYYY[-MM[-DD]]) and "uri".
std::vector<SchemaViolation> validate_structure(const nlohmann::json& doc, const nlohmann::json& schema);

}  // namespace zblinks
