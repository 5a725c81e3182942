#include "relx/remote.hpp"

#include <charconv>

#include <httplib.h>
#include <json.hpp>

#include "relx/error.hpp"

namespace relx {

Endpoint parse_endpoint(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw Error(ErrorCode::kTransport,
                "unsupported endpoint '" + std::string(url) + "' (expected http://host[:port])");
  }
  std::string_view rest = url.substr(kScheme.size());
  Endpoint ep;
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) ep.base_path = std::string(rest.substr(slash));
  while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();

  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const auto port_text = authority.substr(colon + 1);
    int port = 0;
    const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port <= 0 ||
        port > 65535) {
      throw Error(ErrorCode::kTransport, "invalid port in endpoint '" + std::string(url) + "'");
    }
    ep.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) {
    throw Error(ErrorCode::kTransport, "missing host in endpoint '" + std::string(url) + "'");
  }
  ep.host = std::string(authority);
  return ep;
}

namespace {

std::string request_body(std::span<const MarkedText> marked) {
  nlohmann::json texts = nlohmann::json::array();
  for (const auto& m : marked) texts.push_back(m.text);
  return nlohmann::json{{"texts", std::move(texts)}}.dump();
}

Error protocol(const std::string& message) { return Error(ErrorCode::kProtocol, message); }

std::vector<ProbDist> parse_response(const std::string& body, std::size_t expected,
                                     const RelationSchema& schema) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw protocol(std::string("response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("probs") || !doc.contains("labels")) {
    throw protocol("response must be an object with 'probs' and 'labels'");
  }
  const auto& labels = doc["labels"];
  if (!labels.is_array() || labels.size() != schema.size()) {
    throw protocol("'labels' must list " + std::to_string(schema.size()) + " names");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string() || labels[i].get_ref<const std::string&>() !=
                                      schema.name(static_cast<LabelId>(i))) {
      throw protocol("label order mismatch at index " + std::to_string(i));
    }
  }
  const auto& probs = doc["probs"];
  if (!probs.is_array()) throw protocol("'probs' must be an array");
  if (probs.size() != expected) {
    throw Error(ErrorCode::kLengthMismatch, "server returned " + std::to_string(probs.size()) +
                                                " distributions for " + std::to_string(expected) +
                                                " texts");
  }
  std::vector<ProbDist> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto& row = probs[i];
    if (!row.is_array() || row.size() != schema.size()) {
      throw protocol("distribution " + std::to_string(i) + " must have " +
                     std::to_string(schema.size()) + " entries");
    }
    std::vector<double> values;
    values.reserve(row.size());
    for (const auto& v : row) {
      if (!v.is_number()) throw protocol("distribution " + std::to_string(i) + " has a non-number");
      values.push_back(v.get<double>());
    }
    try {
      out.push_back(ProbDist::normalized(std::move(values), kRemoteSumTolerance));
    } catch (const Error& e) {
      throw e.with_context("distribution " + std::to_string(i) + ": ");
    }
  }
  return out;
}

}  // namespace

std::vector<ProbDist> remote_predict_proba(std::string_view endpoint,
                                           std::span<const MarkedText> marked,
                                           std::chrono::milliseconds timeout,
                                           const RelationSchema& schema) {
  const Endpoint ep = parse_endpoint(endpoint);
  httplib::Client client(ep.host, ep.port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  auto res = client.Post(ep.base_path + "/predict", request_body(marked), "application/json");
  if (!res) {
    throw Error(ErrorCode::kTransport, "request to '" + std::string(endpoint) +
                                           "' failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw protocol("server answered HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  return parse_response(res->body, marked.size(), schema);
}

std::vector<ProbDist> RemoteClassifier::predict_proba(std::span<const MarkedText> marked) const {
  return remote_predict_proba(endpoint_, marked, timeout_, *schema_);
}

std::unique_ptr<Classifier> RemoteBackend::fit(std::span<const MarkedText>,
                                               std::span<const LabelId>,
                                               const TrainingConfig&) const {
  return std::make_unique<RemoteClassifier>(endpoint_, timeout_, *schema_);
}

}  // namespace relx
