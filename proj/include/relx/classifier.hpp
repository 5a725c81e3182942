#ifndef RELX_CLASSIFIER_HPP
#define RELX_CLASSIFIER_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "relx/preprocess.hpp"
#include "relx/schema.hpp"

namespace relx {

// Probability distribution over the schema labels (index = label id).
// Entries are finite and non-negative, and sum to 1 within 1e-6.
class ProbDist {
 public:
  ProbDist() = default;

  // Validates raw probabilities and divides them by their sum. Throws
  // Error(kBadDistribution) on negative or non-finite entries, or when the
  // sum differs from 1 by more than `tolerance`.
  static ProbDist normalized(std::vector<double> probs, double tolerance = 1e-6);
  static ProbDist uniform(std::size_t size);
  // Numerically stable softmax of raw scores.
  static ProbDist softmax(std::span<const double> scores);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  // Highest-probability label, lowest index on ties.
  LabelId argmax() const;

  bool operator==(const ProbDist&) const = default;

 private:
  explicit ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

struct TrainingConfig {
  double learning_rate = 0.1;
  int epochs = 20;
  int batch_size = 16;
  double weight_decay = 0.0;
  std::string optimizer = "sgd";
  std::uint64_t seed = 42;

  // Hyperparameters of the transformer fine-tune run by the model server:
  // lr 1e-5, 3 epochs, batch 16, weight decay 0.01, Adam.
  static TrainingConfig fine_tune_defaults();
  // Defaults for the native linear baseline: lr 0.1, 20 epochs, batch 16,
  // no decay, plain mini-batch gradient descent.
  static TrainingConfig baseline_defaults();

  // Throws Error(kValidation) when a field is out of range.
  void validate() const;

  bool operator==(const TrainingConfig&) const = default;
};

// Anything that maps marked texts to label distributions.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::vector<ProbDist> predict_proba(std::span<const MarkedText> marked) const = 0;
};

// Produces a ready classifier from labelled training texts. Backends whose
// model is trained elsewhere ignore the training data.
class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Classifier> fit(std::span<const MarkedText> marked,
                                          std::span<const LabelId> golds,
                                          const TrainingConfig& config) const = 0;
};

}  // namespace relx

#endif  // RELX_CLASSIFIER_HPP
