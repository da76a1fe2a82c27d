#pragma once

// X-Field projections select a subset of response fields:
//
//   Projection := "{" FieldList "}"
//   FieldList  := Field ("," Field)*
//   Field      := Name Projection?
//   Name       := [A-Za-z][A-Za-z0-9_]*
//
// Whitespace between tokens is ignored. Example: {Source{Identifier{ID}}}.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace zblinks {

struct ProjectionField {
    std::string name;
    std::vector<ProjectionField> children;  // empty: keep the whole subtree

    bool leaf() const noexcept { return children.empty(); }
    bool operator==(const ProjectionField&) const = default;
};

struct Projection {
    std::vector<ProjectionField> fields;  // first-appearance order, names unique

    bool operator==(const Projection&) const = default;
};

// Throws XFieldSyntaxError with the byte offset of the first deviation.
// Repeated sibling names are merged; a bare name absorbs any sub-projection.
Projection parse_xfield(std::string_view expr);

// Canonical text form; parse_xfield(render_xfield(p)) == p.
std::string render_xfield(const Projection& p);

// Keeps only named fields at each object level; arrays are projected element
// by element and scalars pass through unchanged.
nlohmann::json project(const nlohmann::json& doc, const Projection& p);

}  // namespace zblinks
