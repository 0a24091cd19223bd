#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "support.hpp"
#include "wfreach/service.hpp"

using namespace wfreach;
using namespace wfreach::testing;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(WFREACH_FIXTURE_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string upload(Service& s, const std::string& text) {
    auto r = s.handle("POST", "/api/nets", text);
    EXPECT_EQ(r.status, 200) << r.body;
    return Json::parse(r.body)["netId"].get<std::string>();
}

}  // namespace

TEST(Service, UploadThenAnalyzeAdmissible) {
    Service s;
    auto id = upload(s, read_fixture("fig1.wfnet"));
    auto r = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[p9,p10]"})");
    ASSERT_EQ(r.status, 200) << r.body;
    auto j = Json::parse(r.body);
    EXPECT_EQ(j["admissibility"], "admissible");
    EXPECT_EQ(j["missing"].size(), 9u);
    EXPECT_EQ(j["verdict"], "not-reachable");
}

TEST(Service, UploadReportsStructureAndSoundness) {
    Service s;
    auto r = s.handle("POST", "/api/nets", read_fixture("fig1.wfnet"));
    auto j = Json::parse(r.body);
    EXPECT_EQ(j["structureReport"]["isWorkflowNet"], true);
    EXPECT_EQ(j["soundness"]["status"], "verified");
    EXPECT_EQ(j["netId"].get<std::string>().size(), 64u);
}

TEST(Service, UnknownPlaceIs400) {
    Service s;
    auto id = upload(s, read_fixture("fig1.wfnet"));
    auto r = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[p99]"})");
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(Json::parse(r.body)["error"]["code"], "UNKNOWN_PLACE");
    auto arr = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":["p99"]})");
    EXPECT_EQ(arr.status, 400);
    EXPECT_EQ(Json::parse(arr.body)["error"]["code"], "UNKNOWN_PLACE");
}

TEST(Service, BadRequests) {
    Service s;
    auto id = upload(s, read_fixture("fig1.wfnet"));
    EXPECT_EQ(s.handle("POST", "/api/nets/" + id + "/analyze", "{not json").status, 400);
    EXPECT_EQ(s.handle("POST", "/api/nets/" + id + "/analyze", R"({"mode":"exact"})").status, 400);
    EXPECT_EQ(s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[p1]","mode":"maybe"})").status, 400);
    auto parse = s.handle("POST", "/api/nets", "place i\nbogus line\n");
    EXPECT_EQ(parse.status, 400);
    EXPECT_EQ(Json::parse(parse.body)["error"]["code"], "PARSE_ERROR");
}

TEST(Service, IdenticalUploadsShareId) {
    Service s;
    auto a = upload(s, read_fixture("fig1.wfnet"));
    auto b = upload(s, read_fixture("fig1.wfnet"));
    EXPECT_EQ(a, b);
    EXPECT_EQ(s.session_count(), 1u);
    EXPECT_EQ(a, content_hash(dump_native(fixture("fig1.wfnet"))));
}

TEST(Service, UnknownIdIs404) {
    Service s;
    EXPECT_EQ(s.handle("GET", "/api/nets/deadbeef", "").status, 404);
    EXPECT_EQ(s.handle("POST", "/api/nets/deadbeef/analyze", R"({"marking":"[p1]"})").status, 404);
    EXPECT_EQ(s.handle("GET", "/nothing", "").status, 404);
}

TEST(Service, StructuralFailureIs422WithReport) {
    Service s;
    auto id = upload(s, read_fixture("deadend.wfnet"));
    auto r = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[o]"})");
    EXPECT_EQ(r.status, 422);
    auto j = Json::parse(r.body);
    EXPECT_EQ(j["structureReport"]["isWorkflowNet"], false);
    EXPECT_EQ(s.handle("GET", "/api/nets/" + id + "/concurrency", "").status, 422);
}

TEST(Service, UnsoundNetIs422) {
    Service s;
    auto id = upload(s, read_fixture("unsound.wfnet"));
    auto r = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[a]"})");
    EXPECT_EQ(r.status, 422);
    EXPECT_EQ(Json::parse(r.body)["error"]["code"], "UNSOUND");
}

TEST(Service, CapExceededNeedsAssumeSound) {
    ServiceOptions opts;
    opts.state_cap = 3;
    Service s(opts);
    auto r = s.handle("POST", "/api/nets", read_fixture("fig1.wfnet"));
    auto j = Json::parse(r.body);
    EXPECT_EQ(j["soundness"]["status"], "unverified");
    auto id = j["netId"].get<std::string>();
    auto denied = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[p1]"})");
    EXPECT_EQ(denied.status, 422);
    EXPECT_EQ(Json::parse(denied.body)["error"]["code"], "SOUNDNESS_UNVERIFIED");
    auto ok = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[p1]","assumeSound":true})");
    EXPECT_EQ(ok.status, 200);
    EXPECT_EQ(Json::parse(ok.body)["soundness"], "assumed");
    EXPECT_EQ(s.handle("GET", "/api/nets/" + id + "/concurrency?assumeSound=true", "").status, 200);
}

TEST(Service, GetNetAndConcurrency) {
    Service s;
    auto id = upload(s, read_fixture("fig1.wfnet"));
    auto net = Json::parse(s.handle("GET", "/api/nets/" + id, "").body);
    EXPECT_EQ(net["net"]["nodes"].size(), 31u);
    EXPECT_EQ(net["net"]["source"], "p1");
    auto conc = Json::parse(s.handle("GET", "/api/nets/" + id + "/concurrency", "").body);
    EXPECT_EQ(conc["concurrency"]["p15"], Json::parse(R"(["p6"])"));
}

TEST(Service, WitnessEndpoint) {
    Service s;
    auto id = upload(s, read_fixture("fig1.wfnet"));
    auto r = s.handle("POST", "/api/nets/" + id + "/witness", R"({"marking":{"p3":1,"p8":1,"p14":1,"p17":1}})");
    ASSERT_EQ(r.status, 200) << r.body;
    auto j = Json::parse(r.body);
    EXPECT_EQ(j["verdict"], "reachable");
    EXPECT_EQ(j["witness"]["sequence"][0], "t1");
    auto neg = s.handle("POST", "/api/nets/" + id + "/witness", R"({"marking":"[p3,p5]"})");
    EXPECT_EQ(neg.status, 422);
}

TEST(Service, ByteIdenticalResponses) {
    Service s;
    auto id = upload(s, read_fixture("fig1.wfnet"));
    auto body = R"({"marking":"[p3,p8,p14,p17]","mode":"exact"})";
    auto first = s.handle("POST", "/api/nets/" + id + "/analyze", body).body;
    auto second = s.handle("POST", "/api/nets/" + id + "/analyze", body).body;
    EXPECT_EQ(first, second);
    auto wf = fixture("fig1.wfnet");
    auto a = NetAnalysis::build(wf);
    auto direct = report_json(wf.net, is_reachable(a, parse_marking(wf.net, "[p3,p8,p14,p17]"), Mode::exact));
    EXPECT_EQ(first, direct.dump(2) + "\n");
}

TEST(Service, EvictionAndReuploadGiveSameReport) {
    ServiceOptions opts;
    opts.max_sessions = 1;
    Service s(opts);
    auto id = upload(s, read_fixture("fig1.wfnet"));
    auto body = R"({"marking":"[p9,p10]"})";
    auto before = s.handle("POST", "/api/nets/" + id + "/analyze", body).body;
    upload(s, read_fixture("fig5.wfnet"));
    EXPECT_EQ(s.session_count(), 1u);
    EXPECT_EQ(s.handle("GET", "/api/nets/" + id, "").status, 404);
    EXPECT_EQ(upload(s, read_fixture("fig1.wfnet")), id);
    EXPECT_EQ(s.handle("POST", "/api/nets/" + id + "/analyze", body).body, before);
}

TEST(Service, PnmlUpload) {
    Service s;
    EXPECT_EQ(upload(s, read_fixture("seq.pnml")), upload(s, read_fixture("seq.wfnet")));
}

TEST(Service, ConcurrentFirstRequests) {
    Service s;
    auto id = upload(s, read_fixture("fig1.wfnet"));
    std::vector<std::string> bodies(8);
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < bodies.size(); ++k)
        threads.emplace_back([&, k] {
            bodies[k] = s.handle("POST", "/api/nets/" + id + "/analyze", R"({"marking":"[p5,p12,p14]"})").body;
        });
    for (auto& t : threads) t.join();
    for (const auto& b : bodies) EXPECT_EQ(b, bodies[0]);
}

TEST(Service, HttpRoundTripWithCors) {
    Service s;
    int port = s.bind_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread server([&] { s.listen_after_bind(); });
    httplib::Client client("127.0.0.1", port);
    auto up = client.Post("/api/nets", read_fixture("fig1.wfnet"), "text/plain");
    ASSERT_TRUE(up);
    EXPECT_EQ(up->status, 200);
    EXPECT_EQ(up->get_header_value("Access-Control-Allow-Origin"), "*");
    auto id = Json::parse(up->body)["netId"].get<std::string>();
    auto res = client.Post("/api/nets/" + id + "/analyze", R"({"marking":"[p3,p5]"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(Json::parse(res->body)["conflicting"], Json::parse(R"(["p3","p5"])"));
    auto pre = client.Options("/api/nets");
    ASSERT_TRUE(pre);
    EXPECT_EQ(pre->status, 204);
    auto conc = client.Get("/api/nets/" + id + "/concurrency?assumeSound=true");
    ASSERT_TRUE(conc);
    EXPECT_EQ(conc->status, 200);
    s.stop();
    server.join();
}
