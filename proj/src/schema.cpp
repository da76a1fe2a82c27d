#include <string_view>

#include "zblinks/error.hpp"
#include "zblinks/model.hpp"
#include "zblinks/scholix.hpp"

namespace zblinks {

namespace detail {
extern const std::string_view kScholixSchemaText;
}

namespace {

using nlohmann::json;

std::string type_name(const json& v) {
    switch (v.type()) {
        case json::value_t::object: return "object";
        case json::value_t::array: return "array";
        case json::value_t::string: return "string";
        case json::value_t::boolean: return "boolean";
        case json::value_t::null: return "null";
        case json::value_t::number_integer:
        case json::value_t::number_unsigned: return "integer";
        case json::value_t::number_float: return "number";
        default: return "unknown";
    }
}

bool type_matches(const json& v, const std::string& expected) {
    const auto actual = type_name(v);
    if (expected == "number") return actual == "integer" || actual == "number";
    return actual == expected;
}

bool all_digits(std::string_view s) {
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return !s.empty();
}

bool partial_date_ok(const std::string& s) {
    if (s.size() == 4) return all_digits(s);
    if (s.size() == 7) {
        if (!all_digits(s.substr(0, 4)) || s[4] != '-' || !all_digits(s.substr(5, 2))) return false;
        const int m = std::stoi(s.substr(5, 2));
        return m >= 1 && m <= 12;
    }
    return Date::try_parse(s).has_value();
}

bool uri_ok(const std::string& s) {
    if (s.rfind("http://", 0) != 0 && s.rfind("https://", 0) != 0) return false;
    return s.find_first_of(" \t\r\n") == std::string::npos;
}

class Validator {
public:
    explicit Validator(const json& root) : root_(root) {}

    void check(const json& v, const json& schema, const std::string& path) {
        if (auto ref = schema.find("$ref"); ref != schema.end()) {
            check(v, resolve(ref->get<std::string>()), path);
            return;
        }
        if (auto t = schema.find("type"); t != schema.end() && !type_matches(v, t->get<std::string>())) {
            fail(path, "expected " + t->get<std::string>() + ", found " + type_name(v));
            return;
        }
        if (v.is_object()) {
            if (auto req = schema.find("required"); req != schema.end()) {
                for (const auto& name : *req) {
                    if (!v.contains(name.get<std::string>())) {
                        fail(path + "/" + name.get<std::string>(), "required field missing");
                    }
                }
            }
            if (auto props = schema.find("properties"); props != schema.end()) {
                for (const auto& [name, sub] : props->items()) {
                    if (auto it = v.find(name); it != v.end()) check(*it, sub, path + "/" + name);
                }
            }
        }
        if (v.is_array()) {
            if (auto min = schema.find("minItems"); min != schema.end() && v.size() < min->get<std::size_t>()) {
                fail(path, "expected at least " + std::to_string(min->get<std::size_t>()) + " items");
            }
            if (auto items = schema.find("items"); items != schema.end()) {
                for (std::size_t i = 0; i < v.size(); ++i) check(v[i], *items, path + "/" + std::to_string(i));
            }
        }
        if (v.is_string()) {
            const auto& s = v.get_ref<const std::string&>();
            if (auto min = schema.find("minLength"); min != schema.end() && s.size() < min->get<std::size_t>()) {
                fail(path, "string shorter than " + std::to_string(min->get<std::size_t>()));
            }
            if (auto en = schema.find("enum"); en != schema.end()) {
                bool found = false;
                for (const auto& option : *en) found = found || option == v;
                if (!found) fail(path, "value '" + s + "' not in enumeration");
            }
            if (auto fmt = schema.find("format"); fmt != schema.end()) {
                const auto& f = fmt->get_ref<const std::string&>();
                if (f == "date" && !Date::try_parse(s)) fail(path, "invalid date '" + s + "'");
                if (f == "partial-date" && !partial_date_ok(s)) fail(path, "invalid date '" + s + "'");
                if (f == "uri" && !uri_ok(s)) fail(path, "invalid URI '" + s + "'");
            }
        }
    }

    std::vector<SchemaViolation> take() { return std::move(violations_); }

private:
    const json& resolve(const std::string& ref) {
        if (ref.rfind("#/", 0) != 0) throw Error(Errc::Format, "unsupported schema reference " + ref);
        return root_.at(json::json_pointer(ref.substr(1)));
    }

    void fail(const std::string& path, std::string message) {
        violations_.push_back({path.empty() ? "/" : path, std::move(message)});
    }

    const json& root_;
    std::vector<SchemaViolation> violations_;
};

}  // namespace

const nlohmann::json& scholix_schema() {
    static const json schema = json::parse(detail::kScholixSchemaText);
    return schema;
}

std::vector<SchemaViolation> validate_structure(const nlohmann::json& doc, const nlohmann::json& schema) {
    Validator v(schema);
    v.check(doc, schema, "");
    return v.take();
}

std::vector<SchemaViolation> validate_scholix(const nlohmann::json& doc) {
    return validate_structure(doc, scholix_schema());
}

}  // namespace zblinks
