#ifndef RELX_REMOTE_HPP
#define RELX_REMOTE_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relx/classifier.hpp"

namespace relx {

// "http://host[:port][/base]" split into its parts.
struct Endpoint {
  std::string host;
  int port = 80;
  std::string base_path;  // no trailing '/'
};

// Throws Error(kTransport) for unsupported schemes or unparsable URLs.
Endpoint parse_endpoint(std::string_view url);

// Relative deviation of a distribution sum that the client will silently
// renormalise.
inline constexpr double kRemoteSumTolerance = 1e-4;

// POST <endpoint>/predict with {"texts": [...]}. The response must be
// {"probs": [[...], ...], "labels": [...]} with labels equal to the schema
// names in index order and one distribution per text.
//
// Errors: kTransport (connection, timeout), kProtocol (bad status, bad
// JSON, wrong shape, label mismatch), kBadDistribution (negative entry or a
// sum off by more than kRemoteSumTolerance), kLengthMismatch.
std::vector<ProbDist> remote_predict_proba(std::string_view endpoint,
                                           std::span<const MarkedText> marked,
                                           std::chrono::milliseconds timeout,
                                           const RelationSchema& schema);

class RemoteClassifier : public Classifier {
 public:
  RemoteClassifier(std::string endpoint, std::chrono::milliseconds timeout,
                   const RelationSchema& schema)
      : endpoint_(std::move(endpoint)), timeout_(timeout), schema_(&schema) {}

  std::vector<ProbDist> predict_proba(std::span<const MarkedText> marked) const override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
  const RelationSchema* schema_;
};

// The served model is fine-tuned offline, so fit() only hands back a client.
class RemoteBackend : public ClassifierBackend {
 public:
  RemoteBackend(std::string endpoint, std::chrono::milliseconds timeout,
                const RelationSchema& schema)
      : endpoint_(std::move(endpoint)), timeout_(timeout), schema_(&schema) {}

  std::string name() const override { return "remote"; }
  std::unique_ptr<Classifier> fit(std::span<const MarkedText> marked,
                                  std::span<const LabelId> golds,
                                  const TrainingConfig& config) const override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
  const RelationSchema* schema_;
};

}  // namespace relx

#endif  // RELX_REMOTE_HPP
