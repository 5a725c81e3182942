#include "relx/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "relx/error.hpp"

namespace relx {

ProbDist ProbDist::normalized(std::vector<double> probs, double tolerance) {
  if (probs.empty()) throw Error(ErrorCode::kBadDistribution, "empty distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::kBadDistribution, "negative or non-finite probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw Error(ErrorCode::kBadDistribution,
                "probabilities sum to " + std::to_string(sum));
  }
  for (double& p : probs) p /= sum;
  return ProbDist(std::move(probs));
}

ProbDist ProbDist::uniform(std::size_t size) {
  return ProbDist(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

ProbDist ProbDist::softmax(std::span<const double> scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> probs(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    probs[i] = std::exp(scores[i] - top);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return ProbDist(std::move(probs));
}

LabelId ProbDist::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs_.size(); ++i) {
    if (probs_[i] > probs_[best]) best = i;
  }
  return static_cast<LabelId>(best);
}

TrainingConfig TrainingConfig::fine_tune_defaults() {
  TrainingConfig config;
  config.learning_rate = 1e-5;
  config.epochs = 3;
  config.batch_size = 16;
  config.weight_decay = 0.01;
  config.optimizer = "adam";
  return config;
}

TrainingConfig TrainingConfig::baseline_defaults() { return TrainingConfig{}; }

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kValidation, "learning_rate must be positive");
  }
  if (epochs < 1) throw Error(ErrorCode::kValidation, "epochs must be at least 1");
  if (batch_size < 1) throw Error(ErrorCode::kValidation, "batch_size must be at least 1");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw Error(ErrorCode::kValidation, "weight_decay must be non-negative");
  }
  if (optimizer.empty()) throw Error(ErrorCode::kValidation, "optimizer must be named");
}

}  // namespace relx
