#include "zblinks/serialize.hpp"

#include "zblinks/error.hpp"

namespace zblinks {

const Json& require_field(const Json& obj, const char* name) {
    if (!obj.is_object()) throw Error(Errc::InvalidValue, "expected a JSON object");
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) {
        throw Error(Errc::InvalidValue, std::string("missing field '") + name + "'");
    }
    return *it;
}

std::string require_string(const Json& obj, const char* name) {
    const Json& v = require_field(obj, name);
    if (!v.is_string()) throw Error(Errc::InvalidValue, std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

std::vector<std::string> string_list(const Json& obj, const char* name, bool required) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) {
        if (required) throw Error(Errc::InvalidValue, std::string("missing field '") + name + "'");
        return {};
    }
    if (!it->is_array()) throw Error(Errc::InvalidValue, std::string("field '") + name + "' must be an array");
    std::vector<std::string> out;
    out.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw Error(Errc::InvalidValue, std::string("field '") + name + "' must contain strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::optional<std::string> optional_string(const Json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw Error(Errc::InvalidValue, std::string("field '") + name + "' must be a string");
    return it->get<std::string>();
}

namespace {

int require_int(const Json& obj, const char* name) {
    const Json& v = require_field(obj, name);
    if (!v.is_number_integer()) {
        throw Error(Errc::InvalidValue, std::string("field '") + name + "' must be an integer");
    }
    return v.get<int>();
}

Json doi_json(const std::optional<std::string>& doi) { return doi ? Json(*doi) : Json(nullptr); }

}  // namespace

}  // namespace zblinks

namespace nlohmann {

using zblinks::Json;

zblinks::Date adl_serializer<zblinks::Date>::from_json(const json& j) {
    if (!j.is_string()) throw zblinks::Error(zblinks::Errc::InvalidValue, "date must be a string");
    return zblinks::Date::parse(j.get<std::string>());
}

void adl_serializer<zblinks::ZbRecord>::to_json(json& j, const zblinks::ZbRecord& r) {
    j = json{{"zbl_id", r.zbl_id()},       {"title", r.title()},
             {"authors", r.authors()},     {"msc_codes", r.msc_codes()},
             {"year", r.year()},           {"doi", zblinks::doi_json(r.doi())},
             {"source_text", r.source_text()}, {"keywords", r.keywords()}};
}

zblinks::ZbRecord adl_serializer<zblinks::ZbRecord>::from_json(const json& j) {
    using namespace zblinks;
    ZbRecordFields f;
    f.zbl_id = require_string(j, "zbl_id");
    f.title = require_string(j, "title");
    f.authors = string_list(j, "authors", true);
    f.msc_codes = string_list(j, "msc_codes", true);
    f.year = require_int(j, "year");
    f.doi = optional_string(j, "doi");
    f.source_text = optional_string(j, "source_text").value_or("");
    f.keywords = string_list(j, "keywords", false);
    return ZbRecord(std::move(f));
}

void adl_serializer<zblinks::ArxivRecord>::to_json(json& j, const zblinks::ArxivRecord& r) {
    j = json{{"arxiv_id", r.arxiv_id()}, {"title", r.title()},
             {"authors", r.authors()},   {"year", r.year()},
             {"doi", zblinks::doi_json(r.doi())}, {"categories", r.categories()}};
}

zblinks::ArxivRecord adl_serializer<zblinks::ArxivRecord>::from_json(const json& j) {
    using namespace zblinks;
    ArxivRecordFields f;
    f.arxiv_id = require_string(j, "arxiv_id");
    f.title = require_string(j, "title");
    f.authors = string_list(j, "authors", true);
    f.year = require_int(j, "year");
    f.doi = optional_string(j, "doi");
    f.categories = string_list(j, "categories", false);
    return ArxivRecord(std::move(f));
}

void adl_serializer<zblinks::Partner>::to_json(json& j, const zblinks::Partner& p) {
    j = json{{"name", p.name()},
             {"display_name", p.display_name()},
             {"base_url_template", p.base_url_template()},
             {"id_scheme", p.id_scheme()}};
}

zblinks::Partner adl_serializer<zblinks::Partner>::from_json(const json& j) {
    using namespace zblinks;
    PartnerFields f;
    f.name = require_string(j, "name");
    f.display_name = optional_string(j, "display_name").value_or(f.name);
    f.base_url_template = require_string(j, "base_url_template");
    f.id_scheme = optional_string(j, "id_scheme").value_or("");
    return Partner(std::move(f));
}

void adl_serializer<zblinks::Link>::to_json(json& j, const zblinks::Link& l) {
    j = json{{"partner", l.partner()},       {"source_id", l.source_id()},
             {"target_zbl", l.target_zbl()}, {"relation", l.relation()},
             {"date_added", l.date_added()}, {"anchor_title", l.anchor_title()}};
}

zblinks::Link adl_serializer<zblinks::Link>::from_json(const json& j) {
    using namespace zblinks;
    LinkFields f;
    f.partner = require_string(j, "partner");
    f.source_id = require_string(j, "source_id");
    f.target_zbl = require_string(j, "target_zbl");
    f.relation = optional_string(j, "relation").value_or(std::string(kDefaultRelation));
    f.date_added = require_field(j, "date_added").get<Date>();
    f.anchor_title = optional_string(j, "anchor_title").value_or("");
    return Link(std::move(f));
}

void adl_serializer<zblinks::FeatureVector>::to_json(json& j, const zblinks::FeatureVector& fv) {
    j = json::array({fv.title_dissim(), fv.author_dissim(), fv.year_dissim()});
}

zblinks::FeatureVector adl_serializer<zblinks::FeatureVector>::from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw zblinks::Error(zblinks::Errc::InvalidValue, "feature vector must be an array of 3 numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void adl_serializer<zblinks::GroundTruthPair>::to_json(json& j, const zblinks::GroundTruthPair& p) {
    j = json{{"zbl_id", p.zbl_id}, {"arxiv_id", p.arxiv_id}, {"label", p.label}};
}

zblinks::GroundTruthPair adl_serializer<zblinks::GroundTruthPair>::from_json(const json& j) {
    using namespace zblinks;
    GroundTruthPair p;
    p.zbl_id = require_string(j, "zbl_id");
    p.arxiv_id = require_string(j, "arxiv_id");
    const Json& label = require_field(j, "label");
    if (!label.is_boolean()) throw Error(Errc::InvalidValue, "field 'label' must be a boolean");
    p.label = label.get<bool>();
    return p;
}

void adl_serializer<zblinks::EvalReport>::to_json(json& j, const zblinks::EvalReport& r) {
    j = json{{"true_positives", r.true_positives},
             {"false_positives", r.false_positives},
             {"false_negatives", r.false_negatives},
             {"precision", r.precision},
             {"recall", r.recall}};
}

zblinks::EvalReport adl_serializer<zblinks::EvalReport>::from_json(const json& j) {
    using namespace zblinks;
    return EvalReport::from_counts(require_field(j, "true_positives").get<std::size_t>(),
                                   require_field(j, "false_positives").get<std::size_t>(),
                                   require_field(j, "false_negatives").get<std::size_t>());
}

}  // namespace nlohmann
