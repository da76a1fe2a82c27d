#include "zblinks/model.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "zblinks/error.hpp"
#include "zblinks/ingest.hpp"

namespace zblinks {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(Errc::InvalidValue, message);
}

bool is_canonical_doi(const std::string& doi) {
    auto norm = normalize_doi(doi);
    return norm && *norm == doi;
}

}  // namespace

bool Date::valid(int year, unsigned month, unsigned day) {
    using namespace std::chrono;
    return year_month_day{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}}.ok();
}

std::optional<Date> Date::try_parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (!is_digit(iso[i])) return std::nullopt;
    }
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (iso[i] - '0');
        return v;
    };
    Date d{num(0, 4), static_cast<unsigned>(num(5, 2)), static_cast<unsigned>(num(8, 2))};
    if (!valid(d.year, d.month, d.day)) return std::nullopt;
    return d;
}

Date Date::parse(std::string_view iso) {
    auto d = try_parse(iso);
    if (!d) throw Error(Errc::InvalidValue, "invalid date '" + std::string(iso) + "'");
    return *d;
}

Date Date::today_utc() {
    using namespace std::chrono;
    const year_month_day ymd{floor<days>(system_clock::now())};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
            static_cast<unsigned>(ymd.day())};
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
    return buf;
}

bool is_valid_zbl_id(std::string_view id) {
    if (id.size() != 10 || id[4] != '.') return false;
    for (std::size_t i = 0; i < id.size(); ++i) {
        if (i != 4 && !is_digit(id[i])) return false;
    }
    return true;
}

bool is_valid_msc_code(std::string_view code) {
    if (code.size() != 5) return false;
    if (!is_digit(code[0]) || !is_digit(code[1])) return false;
    if (!is_upper(code[2]) && code[2] != '-') return false;
    for (std::size_t i = 3; i < 5; ++i) {
        const char c = code[i];
        if (!is_digit(c) && !is_upper(c) && c != 'x' && c != '-') return false;
    }
    return true;
}

ZbRecord::ZbRecord(ZbRecordFields fields) : f_(std::move(fields)) {
    require(is_valid_zbl_id(f_.zbl_id), "invalid zbl_id '" + f_.zbl_id + "'");
    require(!f_.msc_codes.empty(), "record " + f_.zbl_id + " has no MSC codes");
    for (const auto& code : f_.msc_codes) {
        require(is_valid_msc_code(code), "invalid MSC code '" + code + "'");
    }
    require(f_.year >= 1500 && f_.year <= 2100, "year out of range: " + std::to_string(f_.year));
    if (f_.doi) require(is_canonical_doi(*f_.doi), "DOI not canonical: '" + *f_.doi + "'");
}

std::string primary_msc_2digit(const ZbRecord& record) {
    return record.msc_codes().front().substr(0, 2);
}

ArxivRecord::ArxivRecord(ArxivRecordFields fields) : f_(std::move(fields)) {
    require(!f_.arxiv_id.empty(), "empty arxiv_id");
    if (f_.doi) require(is_canonical_doi(*f_.doi), "DOI not canonical: '" + *f_.doi + "'");
}

Partner::Partner(PartnerFields fields) : f_(std::move(fields)) {
    require(!f_.name.empty(), "partner name is empty");
    const auto first = f_.base_url_template.find("{id}");
    require(first != std::string::npos &&
                f_.base_url_template.find("{id}", first + 1) == std::string::npos,
            "base_url_template must contain {id} exactly once");
}

std::string Partner::url_for(std::string_view source_id) const {
    std::string url = f_.base_url_template;
    url.replace(url.find("{id}"), 4, source_id);
    return url;
}

Link::Link(LinkFields fields) : f_(std::move(fields)) {
    require(!f_.partner.empty(), "link partner is empty");
    require(!f_.source_id.empty(), "link source_id is empty");
    require(is_valid_zbl_id(f_.target_zbl), "invalid target_zbl '" + f_.target_zbl + "'");
    require(!f_.relation.empty() && f_.relation.find_first_of(" \t\r\n") == std::string::npos,
            "relation must be a non-empty token");
    require(Date::valid(f_.date_added.year, f_.date_added.month, f_.date_added.day),
            "invalid date_added");
}

FeatureVector::FeatureVector(double title_dissim, double author_dissim, double year_dissim)
    : v_{title_dissim, author_dissim, year_dissim} {
    for (double x : v_) {
        require(x >= 0.0 && x <= 1.0, "feature component outside [0,1]");
    }
}

double FeatureVector::norm() const noexcept {
    return std::sqrt(v_[0] * v_[0] + v_[1] * v_[1] + v_[2] * v_[2]);
}

EvalReport EvalReport::from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    EvalReport r;
    r.true_positives = tp;
    r.false_positives = fp;
    r.false_negatives = fn;
    r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
    return r;
}

}  // namespace zblinks
