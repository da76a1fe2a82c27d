#pragma once

// Core domain types. Every type validates its invariants on construction, so a
// live object is always well-formed.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zblinks {

// Calendar date with day precision, ISO-8601 on the wire.
struct Date {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    static std::optional<Date> try_parse(std::string_view iso);
    static Date parse(std::string_view iso);  // throws Errc::InvalidValue
    static bool valid(int year, unsigned month, unsigned day);
    static Date today_utc();

    std::string iso() const;

    auto operator<=>(const Date&) const = default;
};

bool is_valid_zbl_id(std::string_view id);
bool is_valid_msc_code(std::string_view code);

struct ZbRecordFields {
    std::string zbl_id;
    std::string title;
    std::vector<std::string> authors;  // "Family, G." display form
    std::vector<std::string> msc_codes;  // first element is the primary code
    int year = 0;
    std::optional<std::string> doi;  // canonical
    std::string source_text;
    std::vector<std::string> keywords;

    bool operator==(const ZbRecordFields&) const = default;
};

class ZbRecord {
public:
    explicit ZbRecord(ZbRecordFields fields);

    const std::string& zbl_id() const noexcept { return f_.zbl_id; }
    const std::string& title() const noexcept { return f_.title; }
    const std::vector<std::string>& authors() const noexcept { return f_.authors; }
    const std::vector<std::string>& msc_codes() const noexcept { return f_.msc_codes; }
    int year() const noexcept { return f_.year; }
    const std::optional<std::string>& doi() const noexcept { return f_.doi; }
    const std::string& source_text() const noexcept { return f_.source_text; }
    const std::vector<std::string>& keywords() const noexcept { return f_.keywords; }
    const ZbRecordFields& fields() const noexcept { return f_; }

    bool operator==(const ZbRecord&) const = default;

private:
    ZbRecordFields f_;
};

// First two characters of the primary MSC code, e.g. "33" for 33C05.
std::string primary_msc_2digit(const ZbRecord& record);

struct ArxivRecordFields {
    std::string arxiv_id;  // "2101.01234" or legacy "math/0601001"
    std::string title;
    std::vector<std::string> authors;
    int year = 0;
    std::optional<std::string> doi;
    std::vector<std::string> categories;

    bool operator==(const ArxivRecordFields&) const = default;
};

class ArxivRecord {
public:
    explicit ArxivRecord(ArxivRecordFields fields);

    const std::string& arxiv_id() const noexcept { return f_.arxiv_id; }
    const std::string& title() const noexcept { return f_.title; }
    const std::vector<std::string>& authors() const noexcept { return f_.authors; }
    int year() const noexcept { return f_.year; }
    const std::optional<std::string>& doi() const noexcept { return f_.doi; }
    const std::vector<std::string>& categories() const noexcept { return f_.categories; }
    const ArxivRecordFields& fields() const noexcept { return f_; }

    bool operator==(const ArxivRecord&) const = default;

private:
    ArxivRecordFields f_;
};

struct PartnerFields {
    std::string name;
    std::string display_name;
    std::string base_url_template;  // contains "{id}" exactly once
    std::string id_scheme;

    bool operator==(const PartnerFields&) const = default;
};

class Partner {
public:
    explicit Partner(PartnerFields fields);

    const std::string& name() const noexcept { return f_.name; }
    const std::string& display_name() const noexcept { return f_.display_name; }
    const std::string& base_url_template() const noexcept { return f_.base_url_template; }
    const std::string& id_scheme() const noexcept { return f_.id_scheme; }
    const PartnerFields& fields() const noexcept { return f_; }

    // Expands the URL template with a partner-local identifier.
    std::string url_for(std::string_view source_id) const;

    bool operator==(const Partner&) const = default;

private:
    PartnerFields f_;
};

inline constexpr std::string_view kDefaultRelation = "references";

struct LinkFields {
    std::string partner;
    std::string source_id;
    std::string target_zbl;
    std::string relation{kDefaultRelation};
    Date date_added;
    std::string anchor_title;  // markup passed through verbatim

    bool operator==(const LinkFields&) const = default;
};

struct LinkKey {
    std::string partner;
    std::string source_id;
    std::string target_zbl;

    auto operator<=>(const LinkKey&) const = default;
};

class Link {
public:
    explicit Link(LinkFields fields);

    const std::string& partner() const noexcept { return f_.partner; }
    const std::string& source_id() const noexcept { return f_.source_id; }
    const std::string& target_zbl() const noexcept { return f_.target_zbl; }
    const std::string& relation() const noexcept { return f_.relation; }
    const Date& date_added() const noexcept { return f_.date_added; }
    const std::string& anchor_title() const noexcept { return f_.anchor_title; }
    const LinkFields& fields() const noexcept { return f_; }

    LinkKey key() const { return {f_.partner, f_.source_id, f_.target_zbl}; }

    bool operator==(const Link&) const = default;

private:
    LinkFields f_;
};

// Three dissimilarities in [0,1]; (0,0,0) means identical.
class FeatureVector {
public:
    static constexpr std::size_t kDims = 3;

    FeatureVector() = default;
    FeatureVector(double title_dissim, double author_dissim, double year_dissim);

    double title_dissim() const noexcept { return v_[0]; }
    double author_dissim() const noexcept { return v_[1]; }
    double year_dissim() const noexcept { return v_[2]; }
    double operator[](std::size_t i) const noexcept { return v_[i]; }

    double norm() const noexcept;

    bool operator==(const FeatureVector&) const = default;

private:
    std::array<double, kDims> v_{0.0, 0.0, 0.0};
};

struct GroundTruthPair {
    std::string zbl_id;
    std::string arxiv_id;
    bool label = false;

    bool operator==(const GroundTruthPair&) const = default;
};

struct EvalReport {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    double precision = 1.0;
    double recall = 1.0;

    static EvalReport from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

    bool operator==(const EvalReport&) const = default;
};

}  // namespace zblinks
