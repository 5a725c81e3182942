#ifndef RELX_TESTS_MOCK_SERVER_HPP
#define RELX_TESTS_MOCK_SERVER_HPP

#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "relx/schema.hpp"

namespace relx::testing {

// In-process stand-in for the model server. The responder receives the
// request texts and returns (status, body).
class MockServer {
 public:
  using Responder = std::function<std::pair<int, std::string>(const std::vector<std::string>&)>;

  explicit MockServer(Responder responder) : responder_(std::move(responder)) {
    server_.Post("/predict", [this](const httplib::Request& req, httplib::Response& res) {
      std::vector<std::string> texts;
      try {
        const auto doc = nlohmann::json::parse(req.body);
        for (const auto& t : doc.at("texts")) texts.push_back(t.get<std::string>());
      } catch (const nlohmann::json::exception&) {
        res.status = 400;
        return;
      }
      std::pair<int, std::string> answer;
      {
        std::lock_guard lock(mutex_);
        requests_.push_back(texts);
        answer = responder_(texts);
      }
      res.status = answer.first;
      res.set_content(answer.second, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::vector<std::vector<std::string>> requests() {
    std::lock_guard lock(mutex_);
    return requests_;
  }

 private:
  httplib::Server server_;
  Responder responder_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mutex_;
  std::vector<std::vector<std::string>> requests_;
};

inline nlohmann::json label_names(const RelationSchema& schema) {
  nlohmann::json names = nlohmann::json::array();
  for (const auto& n : schema.names()) names.push_back(n);
  return names;
}

// Uniform distribution for every text.
inline MockServer::Responder uniform_responder(const RelationSchema& schema) {
  return [&schema](const std::vector<std::string>& texts) {
    nlohmann::json probs = nlohmann::json::array();
    for (std::size_t i = 0; i < texts.size(); ++i) {
      probs.push_back(std::vector<double>(schema.size(), 1.0 / static_cast<double>(schema.size())));
    }
    return std::pair{200, nlohmann::json{{"probs", probs}, {"labels", label_names(schema)}}.dump()};
  };
}

}  // namespace relx::testing

#endif  // RELX_TESTS_MOCK_SERVER_HPP
