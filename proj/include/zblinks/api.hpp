#pragma once

// HTTP-independent request handling for the eight link API routes, plus the
// OpenAPI description generated from the same route table. server.hpp binds
// this to a socket.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zblinks/error.hpp"
#include "zblinks/linksdb.hpp"

namespace zblinks {

struct ApiRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> params;
    std::map<std::string, std::string> headers;  // names lowercased
    std::string body;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
    std::map<std::string, std::string> headers;
};

struct ApiError {
    int status = 500;  // 400, 404, 409 or 500
    std::string code;
    std::string message;

    nlohmann::json to_json() const;
};

ApiError to_api_error(const Error& e);

struct ParamSpec {
    std::string name;
    std::string in;  // "query" or "header"
    bool required = false;
    std::string type = "string";
    std::string description;
};

struct RouteSpec {
    std::string method;  // lowercase: get, put, post
    std::string path;
    std::string summary;
    std::vector<ParamSpec> params;
    std::optional<std::string> request_schema;   // components/schemas entry
    std::string response_schema;
    int success_status = 200;
    std::vector<int> error_statuses;
};

const std::vector<RouteSpec>& route_table();

nlohmann::json openapi_document();

struct ApiOptions {
    bool read_only = false;
};

class ApiService {
public:
    explicit ApiService(LinkStore& store, ApiOptions options = {});

    // Never throws; unexpected failures become 500 with an opaque message.
    ApiResponse handle(const ApiRequest& request) const;

private:
    ApiResponse dispatch(const ApiRequest& request) const;

    LinkStore& store_;
    ApiOptions options_;
};

}  // namespace zblinks
