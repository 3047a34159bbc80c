#include <gtest/gtest.h>

#include "distort/server.hpp"
#include "distort/strings.hpp"
#include "httplib.h"
#include "support.hpp"

using namespace distort;
using nlohmann::json;
using testing_support::TempDir;

namespace {

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ServiceOptions options;
    options.config = ExperimentConfig::with_data_dir(testing_support::data_dir());
    options.log_dir = logs_.path();
    options.report_path = logs_.path() / "no-report.json";
    service_ = std::make_unique<SessionService>(options);
    server_ = std::make_unique<HttpServer>(*service_);
    port_ = server_->start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override { server_->stop(); }

  std::pair<int, json> post(const std::string& path, const json& body) {
    auto res = client_->Post(path, body.dump(), "application/json");
    if (!res) return {0, nullptr};
    return {res->status, json::parse(res->body)};
  }

  std::pair<int, json> get(const std::string& path) {
    auto res = client_->Get(path);
    if (!res) return {0, nullptr};
    return {res->status, json::parse(res->body)};
  }

  std::string new_session() {
    auto [status, body] = post("/sessions", json{{"seed", 5}});
    EXPECT_EQ(status, 200);
    return body["session_id"].get<std::string>();
  }

  TempDir logs_{"server-logs"};
  std::unique_ptr<SessionService> service_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

}  // namespace

TEST_F(ServerTest, QueryReturnsPageAndAds) {
  const auto id = new_session();
  auto [status, body] = post("/sessions/" + id + "/query",
                             json{{"intent", "buy a toyota 2014"}, {"pattern", "NITP"}});
  ASSERT_EQ(status, 200) << body.dump();
  EXPECT_EQ(body["query"]["segments"].size(), 4u);
  EXPECT_EQ(body["query"]["pattern"], "NITP");
  EXPECT_FALSE(body["result_page"]["hits"].empty());
  EXPECT_LE(body["result_page"]["hits"].size(), 100u);
  EXPECT_EQ(body["ads"].size(), 3u);
  const auto& hit = body["result_page"]["hits"][0];
  for (const auto* key : {"doc_id", "score", "title", "url", "snippet", "categories"}) {
    EXPECT_TRUE(hit.contains(key)) << key;
  }
}

TEST_F(ServerTest, PreviewDoesNotExecute) {
  const auto id = new_session();
  auto [status, body] = post("/sessions/" + id + "/query",
                             json{{"intent", "buy a toyota 2014"}, {"pattern", "NIT"}, {"preview", true}});
  ASSERT_EQ(status, 200);
  EXPECT_TRUE(body["preview"].get<bool>());
  EXPECT_FALSE(body.contains("result_page"));
  auto [s2, log] = get("/sessions/" + id + "/log");
  EXPECT_TRUE(log["events"].empty());
}

TEST_F(ServerTest, ClientSegmentsAreExecuted) {
  const auto id = new_session();
  auto [status, body] = post("/sessions/" + id + "/query",
                             json{{"segments", {"honda civic", "buy a toyota 2014"}}});
  ASSERT_EQ(status, 200) << body.dump();
  EXPECT_EQ(body["query"]["segments"][1], "buy a toyota 2014");
}

TEST_F(ServerTest, ClickOffPageIsBadRequest) {
  const auto id = new_session();
  post("/sessions/" + id + "/query", json{{"intent", "buy a toyota 2014"}, {"pattern", "NI"}});
  auto [status, body] = post("/sessions/" + id + "/click", json{{"target", "D9999"}, {"kind", "result"}});
  EXPECT_EQ(status, 400);
  EXPECT_EQ(body["error"]["kind"], "invalid_argument");
}

TEST_F(ServerTest, UnknownSessionIsNotFound) {
  auto [status, body] = get("/sessions/S999/profile");
  EXPECT_EQ(status, 404);
  EXPECT_TRUE(body["error"].contains("message"));
}

TEST_F(ServerTest, MalformedBodyIsBadRequest) {
  auto res = client_->Post("/sessions", "{oops", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServerTest, ClicksAccumulateInProfileAndLog) {
  const auto id = new_session();
  auto [status, body] = post("/sessions/" + id + "/query",
                             json{{"intent", "buy a toyota 2014"}, {"pattern", "NITP"}});
  ASSERT_EQ(status, 200);
  const auto& hits = body["result_page"]["hits"];
  ASSERT_GE(hits.size(), 2u);
  std::size_t expected = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    auto [s, r] = post("/sessions/" + id + "/click", json{{"target", hits[i]["doc_id"]}, {"kind", "result"}});
    EXPECT_EQ(s, 200);
    expected += hits[i]["categories"].size();
  }
  auto [s3, r3] = post("/sessions/" + id + "/click", json{{"target", body["ads"][0]["id"]}, {"kind", "ad"}});
  EXPECT_EQ(s3, 200);
  expected += 1;

  auto [ps, profile] = get("/sessions/" + id + "/profile");
  ASSERT_EQ(ps, 200);
  EXPECT_EQ(profile["profile"]["total"], expected);
  EXPECT_FALSE(profile["exposure"].is_null());

  auto [ls, log] = get("/sessions/" + id + "/log");
  std::size_t clicks = 0;
  for (const auto& ev : log["events"]) clicks += ev["type"] == "click";
  EXPECT_EQ(clicks, 3u);

  server_->stop();
  const auto lines = split(read_file((logs_.path() / (id + ".jsonl")).string()), '\n');
  std::size_t written = 0;
  for (const auto& l : lines) written += !l.empty();
  EXPECT_EQ(written, log["events"].size());
  server_ = std::make_unique<HttpServer>(*service_);
  server_->start("127.0.0.1", 0);
}

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status(ErrorKind::kInvalidArgument), 400);
  EXPECT_EQ(http_status(ErrorKind::kSchema), 400);
  EXPECT_EQ(http_status(ErrorKind::kNotFound), 404);
  EXPECT_EQ(http_status(ErrorKind::kUnimplemented), 501);
  EXPECT_EQ(http_status(ErrorKind::kIo), 500);
}
