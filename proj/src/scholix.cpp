#include "zblinks/scholix.hpp"

namespace zblinks {

namespace {

nlohmann::json object_json(const ScholixObject& o) {
    auto ids = nlohmann::json::array();
    for (const auto& id : o.identifiers) {
        ids.push_back({{"ID", id.id}, {"IDScheme", id.id_scheme}, {"IDURL", id.id_url}});
    }
    nlohmann::json type{{"Name", o.type.name}};
    if (o.type.sub_type) type["SubType"] = *o.type.sub_type;
    if (o.type.sub_type_schema) type["SubTypeSchema"] = *o.type.sub_type_schema;
    auto creators = nlohmann::json::array();
    for (const auto& c : o.creators) creators.push_back({{"Name", c}});

    nlohmann::json out{{"Identifier", std::move(ids)},
                       {"Type", std::move(type)},
                       {"Title", o.title},
                       {"Creator", std::move(creators)}};
    if (o.publication_date) out["PublicationDate"] = *o.publication_date;
    if (o.publisher) out["Publisher"] = {{"Name", *o.publisher}};
    return out;
}

}  // namespace

nlohmann::json ScholixLinkPackage::to_json() const {
    auto providers = nlohmann::json::array();
    for (const auto& p : link_providers) providers.push_back({{"Name", p}});
    nlohmann::json out{{"LinkPublicationDate", link_publication_date.iso()},
                       {"LinkProvider", std::move(providers)},
                       {"RelationshipType", {{"Name", relationship_type}}},
                       {"Source", object_json(source)},
                       {"Target", object_json(target)}};
    if (license_url) out["LicenseURL"] = *license_url;
    return out;
}

std::string join_msc_codes(const std::vector<std::string>& codes) {
    std::string out;
    for (const auto& c : codes) {
        if (!out.empty()) out.push_back(' ');
        out += c;
    }
    return out;
}

ScholixLinkPackage to_scholix(const Link& link, const ZbRecord& record, const Partner& partner) {
    ScholixLinkPackage pkg;
    pkg.link_publication_date = link.date_added();
    pkg.link_providers = {std::string(kLinkProviderName)};
    pkg.relationship_type = link.relation();

    const std::string scheme = partner.id_scheme().empty() ? partner.name() : partner.id_scheme();
    pkg.source.identifiers = {{link.source_id(), scheme, partner.url_for(link.source_id())}};
    pkg.source.type = {"literature", std::nullopt, std::nullopt};
    pkg.source.title = link.anchor_title();
    pkg.source.creators = {partner.display_name()};
    pkg.source.publisher = partner.display_name();

    pkg.target.identifiers = {{record.zbl_id(), "zbl", std::string(kZblUrlPrefix) + record.zbl_id()}};
    if (record.doi()) pkg.target.identifiers.push_back({*record.doi(), "doi", "https://doi.org/" + *record.doi()});
    pkg.target.type = {"literature", join_msc_codes(record.msc_codes()), std::string(kMscSchema)};
    pkg.target.title = record.title();
    pkg.target.creators = record.authors();
    pkg.target.publication_date = std::to_string(record.year());
    if (!record.source_text().empty()) pkg.target.publisher = record.source_text();
    return pkg;
}

}  // namespace zblinks
