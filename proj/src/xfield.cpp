#include "zblinks/xfield.hpp"

#include "zblinks/error.hpp"

namespace zblinks {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_name_char(char c) { return is_alpha(c) || (c >= '0' && c <= '9') || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void merge_into(std::vector<ProjectionField>& siblings, ProjectionField field) {
    for (auto& existing : siblings) {
        if (existing.name != field.name) continue;
        if (existing.leaf()) return;
        if (field.leaf()) {
            existing.children.clear();
            return;
        }
        for (auto& child : field.children) merge_into(existing.children, std::move(child));
        return;
    }
    siblings.push_back(std::move(field));
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Projection run() {
        Projection p;
        p.fields = block();
        skip_space();
        if (pos_ != text_.size()) throw XFieldSyntaxError(pos_, "end of input");
        return p;
    }

private:
    std::vector<ProjectionField> block() {
        skip_space();
        expect('{');
        std::vector<ProjectionField> fields;
        merge_into(fields, field());
        skip_space();
        while (peek() == ',') {
            ++pos_;
            merge_into(fields, field());
            skip_space();
        }
        expect('}');
        return fields;
    }

    ProjectionField field() {
        skip_space();
        if (pos_ >= text_.size() || !is_alpha(text_[pos_])) throw XFieldSyntaxError(pos_, "field name");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
        ProjectionField f{std::string(text_.substr(start, pos_ - start)), {}};
        skip_space();
        if (peek() == '{') f.children = block();
        return f;
    }

    void expect(char c) {
        if (peek() != c) throw XFieldSyntaxError(pos_, std::string("'") + c + "'");
        ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void render_fields(const std::vector<ProjectionField>& fields, std::string& out) {
    out.push_back('{');
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += fields[i].name;
        if (!fields[i].leaf()) render_fields(fields[i].children, out);
    }
    out.push_back('}');
}

nlohmann::json project_value(const nlohmann::json& v, const std::vector<ProjectionField>& fields) {
    if (v.is_array()) {
        auto out = nlohmann::json::array();
        for (const auto& item : v) out.push_back(project_value(item, fields));
        return out;
    }
    if (!v.is_object()) return v;
    auto out = nlohmann::json::object();
    for (const auto& f : fields) {
        auto it = v.find(f.name);
        if (it == v.end()) continue;
        out[f.name] = f.leaf() ? *it : project_value(*it, f.children);
    }
    return out;
}

}  // namespace

Projection parse_xfield(std::string_view expr) { return Parser(expr).run(); }

std::string render_xfield(const Projection& p) {
    std::string out;
    render_fields(p.fields, out);
    return out;
}

nlohmann::json project(const nlohmann::json& doc, const Projection& p) { return project_value(doc, p.fields); }

}  // namespace zblinks
