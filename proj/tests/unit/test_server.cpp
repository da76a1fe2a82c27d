#include <gtest/gtest.h>

#include <thread>

#include <httplib.h>

#include "zblinks/error.hpp"
#include "zblinks/ingest.hpp"
#include "zblinks/server.hpp"

using namespace zblinks;
using nlohmann::json;

namespace {

struct Running {
    LinkStore store;
    ApiService api{store};
    HttpServer server{api};
    int port = 0;
    std::thread thread;

    Running() {
        store.register_partner(dlmf_partner());
        store.put_record(ZbRecord(ZbRecordFields{"0982.41018", "Asymptotics and special functions", {"Olver, F. W. J."},
                                                 {"41-02", "33-02"}, 1997, {}, "", {}}));
        port = server.bind({"127.0.0.1", 0});
        thread = std::thread([this] { server.serve(); });
    }
    ~Running() {
        server.stop();
        thread.join();
    }
};

}  // namespace

TEST(Server, RoundTripOverHttp) {
    Running r;
    ASSERT_GT(r.port, 0);
    httplib::Client c("127.0.0.1", r.port);
    c.set_connection_timeout(5);

    const json body = {{"zbl", "0982.41018"}, {"source", "2.10#iv.p2"}, {"partner", "DLMF"}, {"date_added", "2010-05-07"}};
    auto post = c.Post("/link", body.dump(), "application/json");
    ASSERT_TRUE(post);
    EXPECT_EQ(post->status, 201);
    EXPECT_EQ(post->get_header_value("Content-Type"), "application/json");
    const auto location = post->get_header_value("Location");
    EXPECT_EQ(location, "/link/item?source=2.10%23iv.p2&zbl=0982.41018&partner=DLMF");

    auto item = c.Get(location);
    ASSERT_TRUE(item);
    EXPECT_EQ(item->status, 200);
    EXPECT_EQ(json::parse(item->body), json::parse(post->body));

    auto dup = c.Post("/link", body.dump(), "application/json");
    ASSERT_TRUE(dup);
    EXPECT_EQ(dup->status, 409);

    auto projected = c.Get("/link?x-field=%7BSource%7BIdentifier%7BID%7D%7D%7D");
    ASSERT_TRUE(projected);
    EXPECT_EQ(json::parse(projected->body), json::parse(R"([{"Source":{"Identifier":[{"ID":"2.10#iv.p2"}]}}])"));

    auto via_header = c.Get("/link", {{"X-Field", "{Target{Type{SubType}}}"}});
    ASSERT_TRUE(via_header);
    EXPECT_EQ(json::parse(via_header->body), json::parse(R"([{"Target":{"Type":{"SubType":"41-02 33-02"}}}])"));

    auto bad = c.Get("/link?x-field=%7BSource");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    EXPECT_EQ(json::parse(bad->body).at("code"), "SyntaxError");

    auto stats = c.Get("/statistics/msc");
    ASSERT_TRUE(stats);
    EXPECT_EQ(json::parse(stats->body), json::parse(R"({"41":1})"));

    auto doc = c.Get("/openapi.json");
    ASSERT_TRUE(doc);
    EXPECT_EQ(json::parse(doc->body).at("paths").size(), 6u);  // 8 operations on 6 paths

    auto missing = c.Get("/nope");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
}

TEST(Server, BindFailureIsIoError) {
    LinkStore store;
    ApiService api(store);
    HttpServer a(api);
    const int port = a.bind({"127.0.0.1", 0});
    HttpServer b(api);
    try {
        b.bind({"127.0.0.1", port});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Io);
    }
}
