#include <gtest/gtest.h>

#include <set>

#include "synth.hpp"
#include "zblinks/api.hpp"
#include "zblinks/ingest.hpp"
#include "zblinks/scholix.hpp"
#include "zblinks/serialize.hpp"
#include "zblinks/xfield.hpp"

using namespace zblinks;
namespace zt = zblinks::testing;
using nlohmann::json;

namespace {

ApiRequest get(std::string path, std::map<std::string, std::string> params = {}) {
    return {"GET", std::move(path), std::move(params), {}, ""};
}

ApiRequest post_link(const json& body) { return {"POST", "/link", {}, {}, body.dump()}; }

struct Fixture {
    LinkStore store;
    ApiService api{store};
    Fixture() {
        store.register_partner(dlmf_partner());
        store.put_record(ZbRecord(ZbRecordFields{"0982.41018", "Asymptotics and special functions", {"Olver, F. W. J."},
                                                 {"41-02", "33-02"}, 1997, {}, "", {}}));
        store.put_record(ZbRecord(ZbRecordFields{"0171.38503", "Handbook of mathematical functions",
                                                 {"Abramowitz, M.", "Stegun, I. A."}, {"33-00"}, 1964, {}, "", {}}));
        store.add_link(Link(LinkFields{"DLMF", "5.2#i.p1", "0171.38503", "references", Date::parse("2009-03-01"), ""}));
    }
};

const json kPost = {{"zbl", "0982.41018"}, {"source", "2.10#iv.p2"}, {"partner", "DLMF"}, {"date_added", "2010-05-07"}};

}  // namespace

TEST(Api, RouteTableHasEightEndpoints) {
    std::set<std::pair<std::string, std::string>> routes;
    for (const auto& r : route_table()) routes.insert({r.method, r.path});
    EXPECT_EQ(routes, (std::set<std::pair<std::string, std::string>>{{"get", "/partner"},
                                                                      {"put", "/partner"},
                                                                      {"get", "/link"},
                                                                      {"get", "/link/item"},
                                                                      {"post", "/link"},
                                                                      {"get", "/source"},
                                                                      {"get", "/statistics/msc"},
                                                                      {"get", "/statistics/year"}}));
}

TEST(Api, OpenApiDocumentMirrorsRouteTable) {
    Fixture f;
    const auto resp = f.api.handle(get("/openapi.json"));
    ASSERT_EQ(resp.status, 200);
    const auto& doc = resp.body;
    EXPECT_EQ(doc.at("openapi"), "3.0.3");
    std::size_t operations = 0;
    for (const auto& [path, methods] : doc.at("paths").items()) operations += methods.size();
    EXPECT_EQ(operations, 8u);
    for (const auto& r : route_table()) {
        const auto& op = doc.at("paths").at(r.path).at(r.method);
        std::set<std::string> names;
        if (op.contains("parameters"))
            for (const auto& p : op.at("parameters")) names.insert(p.at("name").get<std::string>());
        std::set<std::string> want;
        for (const auto& p : r.params) want.insert(p.name);
        EXPECT_EQ(names, want) << r.method << " " << r.path;
        EXPECT_TRUE(op.at("responses").contains(std::to_string(r.success_status)));
        for (int s : r.error_statuses) EXPECT_TRUE(op.at("responses").contains(std::to_string(s))) << r.path << " " << s;
        EXPECT_TRUE(doc.at("components").at("schemas").contains(r.response_schema));
    }
    EXPECT_NO_THROW(json::parse(doc.dump()));
}

TEST(Api, PostThenGetItem) {
    Fixture f;
    const auto created = f.api.handle(post_link(kPost));
    ASSERT_EQ(created.status, 201) << created.body.dump();
    EXPECT_EQ(created.headers.at("Location"), "/link/item?source=2.10%23iv.p2&zbl=0982.41018&partner=DLMF");
    const auto item = f.api.handle(get("/link/item", {{"source", "2.10#iv.p2"}, {"zbl", "0982.41018"}, {"partner", "DLMF"}}));
    ASSERT_EQ(item.status, 200);
    EXPECT_EQ(item.body, created.body);
    EXPECT_EQ(item.body.at("Source").at("Identifier").at(0).at("ID"), "2.10#iv.p2");
    EXPECT_EQ(item.body.at("Target").at("Identifier").at(0).at("ID"), "0982.41018");
    EXPECT_EQ(item.body.at("RelationshipType").at("Name"), "references");
    EXPECT_TRUE(validate_scholix(item.body).empty());
}

TEST(Api, ErrorMapping) {
    Fixture f;
    ASSERT_EQ(f.api.handle(post_link(kPost)).status, 201);
    auto dup = f.api.handle(post_link(kPost));
    EXPECT_EQ(dup.status, 409);
    EXPECT_EQ(dup.body.at("code"), "DuplicateLink");

    auto p = kPost;
    p["partner"] = "OEIS";
    EXPECT_EQ(f.api.handle(post_link(p)).status, 404);
    p = kPost;
    p["zbl"] = "0123.45678";
    EXPECT_EQ(f.api.handle(post_link(p)).body.at("code"), "UnknownZbl");
    p = kPost;
    p["zbl"] = "123";
    EXPECT_EQ(f.api.handle(post_link(p)).status, 400);
    p = kPost;
    p.erase("source");
    EXPECT_EQ(f.api.handle(post_link(p)).status, 400);
    EXPECT_EQ(f.api.handle({"POST", "/link", {}, {}, "{not json"}).status, 400);
    EXPECT_EQ(f.api.handle({"POST", "/link", {}, {}, "[1]"}).status, 400);

    auto bad_x = f.api.handle(get("/link", {{"x-field", "{Source{"}}));
    EXPECT_EQ(bad_x.status, 400);
    EXPECT_EQ(bad_x.body.at("code"), "SyntaxError");
    EXPECT_EQ(f.api.handle(get("/link", {{"msc", "3"}})).status, 400);
    EXPECT_EQ(f.api.handle(get("/link", {{"limit", "0"}})).status, 400);
    EXPECT_EQ(f.api.handle(get("/link", {{"limit", "ten"}})).status, 400);
    EXPECT_EQ(f.api.handle(get("/link/item", {{"source", "x"}})).status, 400);
    EXPECT_EQ(f.api.handle(get("/link/item", {{"source", "x"}, {"zbl", "0982.41018"}, {"partner", "DLMF"}})).status, 404);
    EXPECT_EQ(f.api.handle(get("/nowhere")).status, 404);
    EXPECT_EQ(f.api.handle({"DELETE", "/link", {}, {}, ""}).status, 404);

    // opaque 500 for anything unexpected: an Error code outside the mapping never leaks text
    const auto e = to_api_error(Error(Errc::Io, "disk says /secret/path"));
    EXPECT_EQ(e.status, 500);
    EXPECT_EQ(e.message.find("secret"), std::string::npos);
}

TEST(Api, PartnerRoutes) {
    Fixture f;
    auto list = f.api.handle(get("/partner"));
    ASSERT_EQ(list.status, 200);
    ASSERT_EQ(list.body.size(), 1u);
    EXPECT_EQ(list.body[0].at("name"), "DLMF");

    json edited = list.body[0];
    edited["display_name"] = "DLMF (NIST)";
    auto put = f.api.handle({"PUT", "/partner", {{"name", "DLMF"}}, {}, edited.dump()});
    EXPECT_EQ(put.status, 200);
    EXPECT_EQ(f.store.partner("DLMF")->display_name(), "DLMF (NIST)");
    EXPECT_EQ(f.api.handle({"PUT", "/partner", {{"name", "OEIS"}}, {}, edited.dump()}).status, 404);
    EXPECT_EQ(f.api.handle({"PUT", "/partner", {}, {}, edited.dump()}).status, 400);
    edited["base_url_template"] = "no placeholder";
    EXPECT_EQ(f.api.handle({"PUT", "/partner", {{"name", "DLMF"}}, {}, edited.dump()}).status, 400);

    f.store.register_partner(Partner({"OEIS", "OEIS", "https://oeis.org/{id}", "oeis"}));
    json clash = list.body[0];
    clash["name"] = "OEIS";
    EXPECT_EQ(f.api.handle({"PUT", "/partner", {{"name", "DLMF"}}, {}, clash.dump()}).status, 409);
}

TEST(Api, ReadOnlyRejectsWrites) {
    Fixture f;
    ApiService ro(f.store, {.read_only = true});
    EXPECT_EQ(ro.handle(post_link(kPost)).body.at("code"), "ReadOnly");
    EXPECT_EQ(ro.handle(get("/partner")).status, 200);
    EXPECT_EQ(f.store.link_count(), 1u);
}

TEST(Api, SourcesAndStatisticsMatchStore) {
    Fixture f;
    f.api.handle(post_link(kPost));
    auto src = f.api.handle(get("/source", {{"partner", "DLMF"}}));
    EXPECT_EQ(src.body, json::parse(R"([{"source_id":"2.10#iv.p2","count":1},{"source_id":"5.2#i.p1","count":1}])"));
    EXPECT_EQ(f.api.handle(get("/statistics/msc")).body, json::parse(R"({"33":1,"41":1})"));
    EXPECT_EQ(f.api.handle(get("/statistics/year")).body, json::parse(R"({"1964":1,"1997":1})"));
    EXPECT_EQ(f.api.handle(get("/statistics/year", {{"partner", "OEIS"}})).body, json::object());
}

TEST(Api, ProjectionEquivalenceOnRandomStores) {
    zt::Gen g(12);
    for (int round = 0; round < 100; ++round) {
        LinkStore store;
        zt::fill_store(store, zt::random_store_contents(g));
        ApiService api(store);
        const auto full = api.handle(get("/link", {{"limit", "1000"}}));
        ASSERT_EQ(full.status, 200);
        EXPECT_EQ(full.body.size(), store.link_count());
        for (const auto& pkg : full.body) EXPECT_TRUE(validate_scholix(pkg).empty());
        const auto p = zt::random_projection(g, 3);
        const auto x = render_xfield(p);
        EXPECT_EQ(api.handle(get("/link", {{"limit", "1000"}, {"x-field", x}})).body, project(full.body, p));
        // header form is accepted too
        ApiRequest hdr = get("/link", {{"limit", "1000"}});
        hdr.headers["x-field"] = x;
        EXPECT_EQ(api.handle(hdr).body, project(full.body, p));
        json msc = json::object();
        for (const auto& [k, v] : store.msc_stats()) msc[k] = v;
        EXPECT_EQ(api.handle(get("/statistics/msc")).body, msc);
    }
}
