#ifndef RELX_BASELINE_HPP
#define RELX_BASELINE_HPP

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "relx/classifier.hpp"
#include "relx/features.hpp"

namespace relx {

// Multinomial logistic regression over hashed n-gram features.
struct BaselineModel {
  HashingConfig hashing;
  std::size_t num_labels = 0;
  std::vector<double> weights;  // row-major: num_labels x hashing.buckets
  std::vector<double> bias;     // num_labels
  SchemaFingerprint schema_fingerprint{};

  static BaselineModel zeros(const RelationSchema& schema, const HashingConfig& hashing = {});

  std::size_t feature_dim() const { return hashing.buckets; }
  double& weight(std::size_t label, std::size_t feature) {
    return weights[label * feature_dim() + feature];
  }
  double weight(std::size_t label, std::size_t feature) const {
    return weights[label * feature_dim() + feature];
  }
  std::vector<double> scores(const SparseFeatures& x) const;

  bool operator==(const BaselineModel&) const = default;
};

struct ObjectiveGradient {
  std::vector<double> weights;  // same layout as BaselineModel::weights
  std::vector<double> bias;
};

// Mean cross-entropy over the examples plus (weight_decay / 2) * |W|^2.
// The bias is not regularised.
double objective(const BaselineModel& model, std::span<const SparseFeatures> xs,
                 std::span<const LabelId> golds, double weight_decay);
ObjectiveGradient objective_gradient(const BaselineModel& model,
                                     std::span<const SparseFeatures> xs,
                                     std::span<const LabelId> golds, double weight_decay);

// Mini-batch gradient descent from zero weights. Each batch takes a data
// step followed by the implicit L2 step W <- W / (1 + lr * weight_decay).
// Example order is reshuffled every epoch from config.seed. When
// `epoch_objective` is given, the full objective after each epoch is
// appended to it.
BaselineModel train_on_features(std::span<const SparseFeatures> xs,
                                std::span<const LabelId> golds, const TrainingConfig& config,
                                const RelationSchema& schema, const HashingConfig& hashing,
                                std::vector<double>* epoch_objective = nullptr);

// Throws kEmptyCorpus, kLengthMismatch, or kValidation (bad config or gold).
BaselineModel train_baseline(std::span<const MarkedText> marked, std::span<const LabelId> golds,
                             const TrainingConfig& config, const RelationSchema& schema,
                             const HashingConfig& hashing = {},
                             std::vector<double>* epoch_objective = nullptr);

// Throws kSchemaMismatch if the model was trained against another schema.
std::vector<ProbDist> predict_proba(const BaselineModel& model,
                                    std::span<const MarkedText> marked,
                                    const RelationSchema& schema, std::size_t jobs = 1);

// Binary model file, see README for the layout. Load failures raise kIo
// (unreadable, truncated, trailing bytes) or kVersionMismatch (magic or
// version byte).
void save_model(const BaselineModel& model, const std::filesystem::path& path);
BaselineModel load_model(const std::filesystem::path& path);
std::vector<unsigned char> serialize_model(const BaselineModel& model);
BaselineModel deserialize_model(std::span<const unsigned char> bytes);

class BaselineClassifier : public Classifier {
 public:
  BaselineClassifier(BaselineModel model, const RelationSchema& schema, std::size_t jobs = 1)
      : model_(std::move(model)), schema_(&schema), jobs_(jobs) {}

  std::vector<ProbDist> predict_proba(std::span<const MarkedText> marked) const override;
  const BaselineModel& model() const { return model_; }

 private:
  BaselineModel model_;
  const RelationSchema* schema_;
  std::size_t jobs_;
};

class NativeBackend : public ClassifierBackend {
 public:
  explicit NativeBackend(const RelationSchema& schema, HashingConfig hashing = {},
                         std::size_t jobs = 1)
      : schema_(&schema), hashing_(hashing), jobs_(jobs) {}

  std::string name() const override { return "native"; }
  std::unique_ptr<Classifier> fit(std::span<const MarkedText> marked,
                                  std::span<const LabelId> golds,
                                  const TrainingConfig& config) const override;

 private:
  const RelationSchema* schema_;
  HashingConfig hashing_;
  std::size_t jobs_;
};

}  // namespace relx

#endif  // RELX_BASELINE_HPP
