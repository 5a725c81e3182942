#include "relx/remote.hpp"

#include <chrono>

#include <gtest/gtest.h>

#include "mock_server.hpp"
#include "thrown.hpp"

namespace relx {
namespace {

using namespace std::chrono_literals;
using testing::MockServer;
using testing::thrown;
using testing::thrown_code;

const RelationSchema& schema() { return default_schema(); }

std::vector<MarkedText> texts(std::initializer_list<const char*> raw) {
  std::vector<MarkedText> out;
  for (const char* t : raw) out.push_back(MarkedText{t, MarkerStrategy::kPreEntity, "id", {}});
  return out;
}

std::pair<int, std::string> reply(const nlohmann::json& probs, nlohmann::json labels) {
  return {200, nlohmann::json{{"probs", probs}, {"labels", std::move(labels)}}.dump()};
}

std::vector<double> uniform_row(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

TEST(EndpointTest, Parsing) {
  auto ep = parse_endpoint("http://localhost:8080");
  EXPECT_EQ(ep.host, "localhost");
  EXPECT_EQ(ep.port, 8080);
  EXPECT_EQ(ep.base_path, "");
  ep = parse_endpoint("http://model.internal/api/v1/");
  EXPECT_EQ(ep.host, "model.internal");
  EXPECT_EQ(ep.port, 80);
  EXPECT_EQ(ep.base_path, "/api/v1");
  for (const char* bad : {"https://localhost:8080", "localhost:8080", "http://:80", "http://h:0",
                          "http://h:99999", "http://h:8x"}) {
    EXPECT_EQ(thrown_code([&] { parse_endpoint(bad); }), ErrorCode::kTransport) << bad;
  }
}

TEST(RemoteTest, UniformEchoRoundTrip) {
  MockServer server(testing::uniform_responder(schema()));
  const auto in = texts({"PERS Ann works at ORG Acme", "ORG Acme bought ORG Beta"});
  const auto out = remote_predict_proba(server.endpoint(), in, 2000ms, schema());
  ASSERT_EQ(out.size(), 2u);
  for (const auto& d : out) {
    ASSERT_EQ(d.size(), 22u);
    for (double p : d.probs()) EXPECT_NEAR(p, 1.0 / 22.0, 1e-12);
  }
  const auto seen = server.requests();
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0], (std::vector<std::string>{"PERS Ann works at ORG Acme", "ORG Acme bought ORG Beta"}));
}

TEST(RemoteTest, BasePathIsPrefixed) {
  httplib::Server server;
  server.Post("/v2/predict", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(reply({uniform_row(22)}, testing::label_names(schema())).second, "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const auto out = remote_predict_proba("http://127.0.0.1:" + std::to_string(port) + "/v2/",
                                        texts({"x"}), 2000ms, schema());
  server.stop();
  t.join();
  EXPECT_EQ(out.size(), 1u);
}

TEST(RemoteTest, ShortRowIsProtocolError) {
  MockServer server([](const std::vector<std::string>&) {
    return reply(nlohmann::json::array({uniform_row(21)}), testing::label_names(schema()));
  });
  EXPECT_EQ(thrown_code([&] { remote_predict_proba(server.endpoint(), texts({"a"}), 2000ms, schema()); }),
            ErrorCode::kProtocol);
}

TEST(RemoteTest, SlightlyOffSumIsRenormalized) {
  MockServer server([](const std::vector<std::string>&) {
    auto row = uniform_row(22);
    for (double& p : row) p *= 1.00005;
    return reply(nlohmann::json::array({row}), testing::label_names(schema()));
  });
  const auto out = remote_predict_proba(server.endpoint(), texts({"a"}), 2000ms, schema());
  double sum = 0;
  for (double p : out[0].probs()) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(RemoteTest, InvalidDistributions) {
  MockServer far_off([](const std::vector<std::string>&) {
    auto row = uniform_row(22);
    for (double& p : row) p *= 1.01;
    return reply(nlohmann::json::array({row}), testing::label_names(schema()));
  });
  EXPECT_EQ(thrown_code([&] { remote_predict_proba(far_off.endpoint(), texts({"a"}), 2000ms, schema()); }),
            ErrorCode::kBadDistribution);

  MockServer negative([](const std::vector<std::string>&) {
    auto row = uniform_row(22);
    row[0] += 0.1;
    row[1] -= 0.1;
    return reply(nlohmann::json::array({row}), testing::label_names(schema()));
  });
  EXPECT_EQ(thrown_code([&] { remote_predict_proba(negative.endpoint(), texts({"a"}), 2000ms, schema()); }),
            ErrorCode::kBadDistribution);
}

TEST(RemoteTest, LabelOrderMismatch) {
  MockServer server([](const std::vector<std::string>&) {
    auto labels = testing::label_names(schema());
    std::swap(labels[3], labels[4]);
    return reply(nlohmann::json::array({uniform_row(22)}), labels);
  });
  const auto err = thrown([&] { remote_predict_proba(server.endpoint(), texts({"a"}), 2000ms, schema()); });
  ASSERT_TRUE(err);
  EXPECT_EQ(err->code(), ErrorCode::kProtocol);
  EXPECT_NE(err->message().find("index 3"), std::string::npos);
}

TEST(RemoteTest, CountMismatch) {
  MockServer server([](const std::vector<std::string>&) {
    return reply(nlohmann::json::array({uniform_row(22)}), testing::label_names(schema()));
  });
  EXPECT_EQ(thrown_code([&] { remote_predict_proba(server.endpoint(), texts({"a", "b"}), 2000ms, schema()); }),
            ErrorCode::kLengthMismatch);
}

TEST(RemoteTest, MalformedResponses) {
  for (const std::string body : {"not json", "[]", R"({"probs": []})", R"({"probs": 3, "labels": []})"}) {
    MockServer server([body](const std::vector<std::string>&) { return std::pair{200, body}; });
    EXPECT_EQ(thrown_code([&] { remote_predict_proba(server.endpoint(), texts({"a"}), 2000ms, schema()); }),
              ErrorCode::kProtocol)
        << body;
  }
  MockServer failing([](const std::vector<std::string>&) { return std::pair{500, std::string("boom")}; });
  EXPECT_EQ(thrown_code([&] { remote_predict_proba(failing.endpoint(), texts({"a"}), 2000ms, schema()); }),
            ErrorCode::kProtocol);
}

TEST(RemoteTest, ConnectionRefusedIsTransport) {
  std::string endpoint;
  {
    // Grab a free port, then release it.
    MockServer server(testing::uniform_responder(schema()));
    endpoint = server.endpoint();
  }
  EXPECT_EQ(thrown_code([&] { remote_predict_proba(endpoint, texts({"a"}), 500ms, schema()); }),
            ErrorCode::kTransport);
  EXPECT_EQ(thrown_code([&] { remote_predict_proba("https://127.0.0.1:1", texts({"a"}), 500ms, schema()); }),
            ErrorCode::kTransport);
}

TEST(RemoteTest, TimeoutIsTransport) {
  MockServer slow([](const std::vector<std::string>& in) {
    std::this_thread::sleep_for(600ms);
    return testing::uniform_responder(schema())(in);
  });
  EXPECT_EQ(thrown_code([&] { remote_predict_proba(slow.endpoint(), texts({"a"}), 100ms, schema()); }),
            ErrorCode::kTransport);
}

TEST(RemoteTest, BackendHandsBackClient) {
  MockServer server(testing::uniform_responder(schema()));
  const RemoteBackend backend(server.endpoint(), 2000ms, schema());
  EXPECT_EQ(backend.name(), "remote");
  const auto clf = backend.fit({}, {}, TrainingConfig::fine_tune_defaults());
  EXPECT_EQ(clf->predict_proba(texts({"a", "b", "c"})).size(), 3u);
  EXPECT_TRUE(server.requests().size() == 1u);
}

}  // namespace
}  // namespace relx
