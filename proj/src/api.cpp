#include "zblinks/api.hpp"

#include <charconv>
#include <exception>

#include "zblinks/scholix.hpp"
#include "zblinks/serialize.hpp"
#include "zblinks/xfield.hpp"

namespace zblinks {

namespace {

using nlohmann::json;

const ParamSpec kPartnerFilter{"partner", "query", false, "string", "Restrict to links of this partner"};
const ParamSpec kXFieldQuery{"x-field", "query", false, "string", "Projection such as {Source{Identifier{ID}}}"};
const ParamSpec kXFieldHeader{"X-Field", "header", false, "string", "Projection; the query parameter wins"};

std::optional<std::string> param(const ApiRequest& req, const std::string& name) {
    auto it = req.params.find(name);
    if (it == req.params.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::string required_param(const ApiRequest& req, const std::string& name) {
    auto v = param(req, name);
    if (!v) throw Error(Errc::BadRequest, "missing query parameter '" + name + "'");
    return *v;
}

std::size_t count_param(const ApiRequest& req, const std::string& name, std::size_t fallback) {
    auto v = param(req, name);
    if (!v) return fallback;
    std::size_t out = 0;
    const auto* end = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw Error(Errc::BadRequest, "parameter '" + name + "' must be a non-negative integer");
    }
    return out;
}

std::optional<Projection> projection_of(const ApiRequest& req) {
    auto expr = param(req, "x-field");
    if (!expr) {
        if (auto it = req.headers.find("x-field"); it != req.headers.end() && !it->second.empty()) expr = it->second;
    }
    if (!expr) return std::nullopt;
    return parse_xfield(*expr);
}

json parse_body(const ApiRequest& req) {
    try {
        json body = json::parse(req.body);
        if (!body.is_object()) throw Error(Errc::BadRequest, "request body must be a JSON object");
        return body;
    } catch (const json::exception& e) {
        throw Error(Errc::BadRequest, std::string("request body is not valid JSON: ") + e.what());
    }
}

json package_json(const ResolvedLink& r) { return to_scholix(r.link, r.record, r.partner).to_json(); }

std::string url_encode(std::string_view s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '.' ||
            c == '_' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 15]);
        }
    }
    return out;
}

json schema_ref(const std::string& name) { return {{"$ref", "#/components/schemas/" + name}}; }

std::string status_text(int status) {
    switch (status) {
        case 200: return "OK";
        case 201: return "Created";
        case 400: return "Bad request (malformed filter, parameter, body or X-Field)";
        case 404: return "Unknown partner, record or link";
        case 409: return "Conflict with an existing partner or link";
        default: return "Internal error";
    }
}

}  // namespace

json ApiError::to_json() const { return {{"status", status}, {"code", code}, {"message", message}}; }

ApiError to_api_error(const Error& e) {
    int status = 500;
    switch (e.code()) {
        case Errc::BadFilter:
        case Errc::SyntaxError:
        case Errc::BadRequest:
        case Errc::InvalidValue:
        case Errc::MalformedLine:
        case Errc::Format: status = 400; break;
        case Errc::UnknownPartner:
        case Errc::UnknownZbl:
        case Errc::NotFound:
        case Errc::ReadOnly: status = 404; break;
        case Errc::PartnerExists:
        case Errc::DuplicateLink: status = 409; break;
        default: status = 500; break;
    }
    if (status == 500) return {500, "InternalError", "internal error"};
    return {status, std::string(errc_name(e.code())), e.what()};
}

const std::vector<RouteSpec>& route_table() {
    static const std::vector<RouteSpec> routes = {
        {"get", "/partner", "List all partners", {}, std::nullopt, "PartnerList", 200, {500}},
        {"put",
         "/partner",
         "Edit a selected partner",
         {{"name", "query", true, "string", "Current partner name"}},
         "Partner",
         "Partner",
         200,
         {400, 404, 409, 500}},
        {"get",
         "/link",
         "Retrieve links for zbMATH objects",
         {{"author", "query", false, "string", "Author name tokens the target must contain"},
          {"msc", "query", false, "string", "2-digit area (primary code) or 5-character MSC code"},
          kPartnerFilter,
          {"offset", "query", false, "integer", "Links to skip"},
          {"limit", "query", false, "integer", "Page size, default 100"},
          kXFieldQuery,
          kXFieldHeader},
         std::nullopt,
         "ScholixLinkPackageList",
         200,
         {400, 500}},
        {"get",
         "/link/item",
         "Check the relation between a source identifier and a zbMATH object",
         {{"source", "query", true, "string", "Partner-local source identifier, e.g. 2.10#iv.p2"},
          {"zbl", "query", true, "string", "Zbl code, e.g. 0982.41018"},
          {"partner", "query", true, "string", "Partner name"},
          kXFieldQuery,
          kXFieldHeader},
         std::nullopt,
         "ScholixLinkPackage",
         200,
         {400, 404, 500}},
        {"post",
         "/link",
         "Create a new link for a partner",
         {},
         "LinkRequest",
         "ScholixLinkPackage",
         201,
         {400, 404, 409, 500}},
        {"get", "/source", "List all source identifiers with their link counts", {kPartnerFilter}, std::nullopt,
         "SourceList", 200, {500}},
        {"get", "/statistics/msc", "Occurrence of primary MSC codes (2-digit level)", {kPartnerFilter},
         std::nullopt, "CountMap", 200, {500}},
        {"get", "/statistics/year", "Occurrence of publication years of referenced records", {kPartnerFilter},
         std::nullopt, "CountMap", 200, {500}},
    };
    return routes;
}

json openapi_document() {
    json paths = json::object();
    for (const auto& r : route_table()) {
        json op{{"summary", r.summary}, {"operationId", r.method + r.path}};
        auto params = json::array();
        for (const auto& p : r.params) {
            params.push_back({{"name", p.name},
                              {"in", p.in},
                              {"required", p.required},
                              {"description", p.description},
                              {"schema", {{"type", p.type}}}});
        }
        op["parameters"] = std::move(params);
        if (r.request_schema) {
            op["requestBody"] = {{"required", true},
                                 {"content", {{"application/json", {{"schema", schema_ref(*r.request_schema)}}}}}};
        }
        json responses = json::object();
        responses[std::to_string(r.success_status)] = {
            {"description", status_text(r.success_status)},
            {"content", {{"application/json", {{"schema", schema_ref(r.response_schema)}}}}}};
        for (int s : r.error_statuses) {
            responses[std::to_string(s)] = {
                {"description", status_text(s)},
                {"content", {{"application/json", {{"schema", schema_ref("ApiError")}}}}}};
        }
        op["responses"] = std::move(responses);
        paths[r.path][r.method] = std::move(op);
    }

    const json string_t{{"type", "string"}};
    json schemas{
        {"Partner",
         {{"type", "object"},
          {"required", {"name", "base_url_template"}},
          {"properties",
           {{"name", string_t}, {"display_name", string_t}, {"base_url_template", string_t}, {"id_scheme", string_t}}}}},
        {"PartnerList", {{"type", "array"}, {"items", schema_ref("Partner")}}},
        {"LinkRequest",
         {{"type", "object"},
          {"required", {"zbl", "source", "partner"}},
          {"properties",
           {{"zbl", string_t},
            {"source", string_t},
            {"partner", string_t},
            {"relation", string_t},
            {"date_added", {{"type", "string"}, {"format", "date"}}},
            {"anchor_title", string_t}}}}},
        {"ScholixLinkPackage", {{"type", "object"}, {"description", "Scholix 3.0 link information package"}}},
        {"ScholixLinkPackageList", {{"type", "array"}, {"items", schema_ref("ScholixLinkPackage")}}},
        {"SourceList",
         {{"type", "array"},
          {"items",
           {{"type", "object"},
            {"properties", {{"source_id", string_t}, {"count", {{"type", "integer"}}}}}}}}},
        {"CountMap", {{"type", "object"}, {"additionalProperties", {{"type", "integer"}}}}},
        {"ApiError",
         {{"type", "object"},
          {"properties", {{"status", {{"type", "integer"}}}, {"code", string_t}, {"message", string_t}}}}},
    };
    return {{"openapi", "3.0.3"},
            {"info", {{"title", "zbMATH Links API"}, {"version", "1.0.0"}}},
            {"paths", std::move(paths)},
            {"components", {{"schemas", std::move(schemas)}}}};
}

ApiService::ApiService(LinkStore& store, ApiOptions options) : store_(store), options_(options) {}

ApiResponse ApiService::handle(const ApiRequest& request) const {
    try {
        return dispatch(request);
    } catch (const Error& e) {
        const auto err = to_api_error(e);
        return {err.status, err.to_json(), {}};
    } catch (const std::exception&) {
        return {500, ApiError{500, "InternalError", "internal error"}.to_json(), {}};
    }
}

ApiResponse ApiService::dispatch(const ApiRequest& req) const {
    const bool write = req.method == "PUT" || req.method == "POST";
    if (write && options_.read_only) throw Error(Errc::ReadOnly, "server is read-only");

    if (req.path == "/openapi.json" && req.method == "GET") return {200, openapi_document(), {}};

    if (req.path == "/partner") {
        if (req.method == "GET") {
            json out = json::array();
            for (const auto& p : store_.list_partners()) out.push_back(p);
            return {200, std::move(out), {}};
        }
        if (req.method == "PUT") {
            const auto name = required_param(req, "name");
            const json body = parse_body(req);
            const auto partner = body.get<Partner>();
            store_.update_partner(name, partner);
            return {200, partner, {}};
        }
    }

    if (req.path == "/link") {
        if (req.method == "GET") {
            const auto projection = projection_of(req);
            LinkFilter filter{param(req, "author"), param(req, "msc"), param(req, "partner")};
            PageRequest page{count_param(req, "offset", 0), count_param(req, "limit", kDefaultPageLimit)};
            json out = json::array();
            for (const auto& r : store_.resolve_links(filter, page)) out.push_back(package_json(r));
            if (projection) out = project(out, *projection);
            return {200, std::move(out), {}};
        }
        if (req.method == "POST") {
            const json body = parse_body(req);
            LinkFields f;
            f.target_zbl = require_string(body, "zbl");
            f.source_id = require_string(body, "source");
            f.partner = require_string(body, "partner");
            f.relation = optional_string(body, "relation").value_or(std::string(kDefaultRelation));
            f.date_added = body.contains("date_added") ? body.at("date_added").get<Date>() : Date::today_utc();
            f.anchor_title = optional_string(body, "anchor_title").value_or("");
            const Link link(std::move(f));
            store_.add_link(link);
            const auto resolved = store_.resolve_link_item(link.source_id(), link.target_zbl(), link.partner());
            if (!resolved) throw Error(Errc::NotFound, "link vanished after insertion");
            ApiResponse resp{201, package_json(*resolved), {}};
            resp.headers["Location"] = "/link/item?source=" + url_encode(link.source_id()) +
                                       "&zbl=" + url_encode(link.target_zbl()) +
                                       "&partner=" + url_encode(link.partner());
            return resp;
        }
    }

    if (req.path == "/link/item" && req.method == "GET") {
        const auto projection = projection_of(req);
        const auto source = required_param(req, "source");
        const auto zbl = required_param(req, "zbl");
        const auto partner = required_param(req, "partner");
        const auto resolved = store_.resolve_link_item(source, zbl, partner);
        if (!resolved) throw Error(Errc::NotFound, "no link " + partner + " " + source + " -> " + zbl);
        json out = package_json(*resolved);
        if (projection) out = project(out, *projection);
        return {200, std::move(out), {}};
    }

    if (req.path == "/source" && req.method == "GET") {
        json out = json::array();
        for (const auto& s : store_.list_sources(param(req, "partner"))) {
            out.push_back({{"source_id", s.source_id}, {"count", s.count}});
        }
        return {200, std::move(out), {}};
    }

    if (req.path == "/statistics/msc" && req.method == "GET") {
        json out = json::object();
        for (const auto& [code, n] : store_.msc_stats(param(req, "partner"))) out[code] = n;
        return {200, std::move(out), {}};
    }

    if (req.path == "/statistics/year" && req.method == "GET") {
        json out = json::object();
        for (const auto& [year, n] : store_.year_stats(param(req, "partner"))) out[std::to_string(year)] = n;
        return {200, std::move(out), {}};
    }

    throw Error(Errc::NotFound, "no route " + req.method + " " + req.path);
}

}  // namespace zblinks
