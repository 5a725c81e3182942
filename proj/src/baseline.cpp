#include "relx/baseline.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>

#include "relx/error.hpp"
#include "relx/parallel.hpp"
#include "relx/random.hpp"

namespace relx {

BaselineModel BaselineModel::zeros(const RelationSchema& schema, const HashingConfig& hashing) {
  BaselineModel model;
  model.hashing = hashing;
  model.num_labels = schema.size();
  model.weights.assign(model.num_labels * hashing.buckets, 0.0);
  model.bias.assign(model.num_labels, 0.0);
  model.schema_fingerprint = schema.fingerprint();
  return model;
}

std::vector<double> BaselineModel::scores(const SparseFeatures& x) const {
  std::vector<double> out(bias);
  for (std::size_t k = 0; k < num_labels; ++k) {
    const double* row = weights.data() + k * feature_dim();
    double s = 0.0;
    for (std::size_t n = 0; n < x.index.size(); ++n) s += row[x.index[n]] * x.value[n];
    out[k] += s;
  }
  return out;
}

namespace {

double squared_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double w : v) sum += w * w;
  return sum;
}

void check_golds(std::span<const LabelId> golds, std::size_t num_labels) {
  for (LabelId g : golds) {
    if (g < 0 || static_cast<std::size_t>(g) >= num_labels) {
      throw Error(ErrorCode::kValidation, "gold label index " + std::to_string(g) + " out of range");
    }
  }
}

}  // namespace

double objective(const BaselineModel& model, std::span<const SparseFeatures> xs,
                 std::span<const LabelId> golds, double weight_decay) {
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto s = model.scores(xs[i]);
    const double top = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double v : s) z += std::exp(v - top);
    loss += top + std::log(z) - s[static_cast<std::size_t>(golds[i])];
  }
  loss /= static_cast<double>(xs.size());
  return loss + 0.5 * weight_decay * squared_norm(model.weights);
}

ObjectiveGradient objective_gradient(const BaselineModel& model,
                                     std::span<const SparseFeatures> xs,
                                     std::span<const LabelId> golds, double weight_decay) {
  ObjectiveGradient grad;
  grad.weights.assign(model.weights.size(), 0.0);
  grad.bias.assign(model.num_labels, 0.0);
  const double inv_n = 1.0 / static_cast<double>(xs.size());
  const std::size_t dim = model.feature_dim();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto p = ProbDist::softmax(model.scores(xs[i]));
    for (std::size_t k = 0; k < model.num_labels; ++k) {
      const double g = (p[k] - (static_cast<LabelId>(k) == golds[i] ? 1.0 : 0.0)) * inv_n;
      grad.bias[k] += g;
      for (std::size_t n = 0; n < xs[i].index.size(); ++n) {
        grad.weights[k * dim + xs[i].index[n]] += g * xs[i].value[n];
      }
    }
  }
  for (std::size_t j = 0; j < grad.weights.size(); ++j) {
    grad.weights[j] += weight_decay * model.weights[j];
  }
  return grad;
}

BaselineModel train_on_features(std::span<const SparseFeatures> xs,
                                std::span<const LabelId> golds, const TrainingConfig& config,
                                const RelationSchema& schema, const HashingConfig& hashing,
                                std::vector<double>* epoch_objective) {
  config.validate();
  if (xs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no training examples");
  if (xs.size() != golds.size()) {
    throw Error(ErrorCode::kLengthMismatch, "texts and gold labels differ in length");
  }
  BaselineModel model = BaselineModel::zeros(schema, hashing);
  check_golds(golds, model.num_labels);

  const std::size_t dim = model.feature_dim();
  const std::size_t labels = model.num_labels;
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  const double shrink = 1.0 / (1.0 + config.learning_rate * config.weight_decay);

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 engine(config.seed);
  std::vector<std::vector<double>> residuals;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_in_place(order, engine);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t end = std::min(order.size(), start + batch_size);
      // Residuals are computed against the weights at the start of the batch.
      residuals.clear();
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        auto p = ProbDist::softmax(model.scores(xs[i])).probs();
        p[static_cast<std::size_t>(golds[i])] -= 1.0;
        residuals.push_back(std::move(p));
      }
      const double step = config.learning_rate / static_cast<double>(end - start);
      for (std::size_t b = start; b < end; ++b) {
        const auto& x = xs[order[b]];
        const auto& r = residuals[b - start];
        for (std::size_t k = 0; k < labels; ++k) {
          const double g = step * r[k];
          model.bias[k] -= g;
          double* row = model.weights.data() + k * dim;
          for (std::size_t n = 0; n < x.index.size(); ++n) row[x.index[n]] -= g * x.value[n];
        }
      }
      if (config.weight_decay > 0.0) {
        for (double& w : model.weights) w *= shrink;
      }
    }
    if (epoch_objective) {
      epoch_objective->push_back(objective(model, xs, golds, config.weight_decay));
    }
  }
  return model;
}

BaselineModel train_baseline(std::span<const MarkedText> marked, std::span<const LabelId> golds,
                             const TrainingConfig& config, const RelationSchema& schema,
                             const HashingConfig& hashing, std::vector<double>* epoch_objective) {
  if (marked.empty()) throw Error(ErrorCode::kEmptyCorpus, "no training texts");
  if (marked.size() != golds.size()) {
    throw Error(ErrorCode::kLengthMismatch, "texts and gold labels differ in length");
  }
  std::vector<SparseFeatures> xs;
  xs.reserve(marked.size());
  for (const auto& m : marked) xs.push_back(featurize(m.text, hashing));
  return train_on_features(xs, golds, config, schema, hashing, epoch_objective);
}

std::vector<ProbDist> predict_proba(const BaselineModel& model,
                                    std::span<const MarkedText> marked,
                                    const RelationSchema& schema, std::size_t jobs) {
  if (model.schema_fingerprint != schema.fingerprint() || model.num_labels != schema.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "model was trained against a different schema");
  }
  std::vector<ProbDist> out(marked.size());
  parallel_for(marked.size(), jobs, [&](std::size_t i) {
    out[i] = ProbDist::softmax(model.scores(featurize(marked[i].text, model.hashing)));
  });
  return out;
}

namespace {

constexpr unsigned char kMagic[4] = {'R', 'L', 'X', 'B'};
constexpr unsigned char kFormatVersion = 1;

class Writer {
 public:
  void bytes(const unsigned char* data, std::size_t n) { out_.insert(out_.end(), data, data + n); }
  template <typename T>
  void little_endian(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<unsigned char>(value >> (8 * i)));
    }
  }
  void f64(double v) { little_endian(std::bit_cast<std::uint64_t>(v)); }
  std::vector<unsigned char> take() { return std::move(out_); }

 private:
  std::vector<unsigned char> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> in) : in_(in) {}
  std::span<const unsigned char> bytes(std::size_t n) {
    if (n > in_.size() - pos_) throw Error(ErrorCode::kIo, "truncated model file");
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  template <typename T>
  T little_endian() {
    const auto raw = bytes(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(raw[i]) << (8 * i);
    return value;
  }
  double f64() { return std::bit_cast<double>(little_endian<std::uint64_t>()); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const unsigned char> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<unsigned char> serialize_model(const BaselineModel& model) {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.little_endian<std::uint8_t>(kFormatVersion);
  w.bytes(model.schema_fingerprint.data(), model.schema_fingerprint.size());
  w.little_endian<std::uint8_t>(model.hashing.max_order);
  w.little_endian<std::uint32_t>(model.hashing.buckets);
  w.little_endian<std::uint64_t>(model.hashing.seed);
  w.little_endian<std::uint32_t>(static_cast<std::uint32_t>(model.num_labels));
  w.little_endian<std::uint32_t>(static_cast<std::uint32_t>(model.feature_dim()));
  for (double v : model.weights) w.f64(v);
  for (double v : model.bias) w.f64(v);
  return w.take();
}

BaselineModel deserialize_model(std::span<const unsigned char> bytes) {
  Reader r(bytes);
  if (bytes.size() < sizeof(kMagic) + 1) throw Error(ErrorCode::kIo, "truncated model file");
  const auto magic = r.bytes(sizeof(kMagic));
  if (!std::equal(magic.begin(), magic.end(), kMagic)) {
    throw Error(ErrorCode::kVersionMismatch, "not a baseline model file (bad magic)");
  }
  const auto version = r.little_endian<std::uint8_t>();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported model format version " + std::to_string(version));
  }
  BaselineModel model;
  const auto fp = r.bytes(model.schema_fingerprint.size());
  std::copy(fp.begin(), fp.end(), model.schema_fingerprint.begin());
  model.hashing.max_order = r.little_endian<std::uint8_t>();
  model.hashing.buckets = r.little_endian<std::uint32_t>();
  model.hashing.seed = r.little_endian<std::uint64_t>();
  model.num_labels = r.little_endian<std::uint32_t>();
  const auto dim = r.little_endian<std::uint32_t>();
  if (dim != model.hashing.buckets || dim == 0 || model.num_labels == 0 ||
      model.num_labels > 65536 || model.hashing.max_order == 0) {
    throw Error(ErrorCode::kIo, "inconsistent model dimensions");
  }
  const std::size_t count = model.num_labels * dim + model.num_labels;
  if (r.remaining() != count * sizeof(double)) {
    throw Error(ErrorCode::kIo, r.remaining() < count * sizeof(double)
                                    ? "truncated model file"
                                    : "trailing bytes after model data");
  }
  model.weights.resize(model.num_labels * dim);
  for (double& v : model.weights) v = r.f64();
  model.bias.resize(model.num_labels);
  for (double& v : model.bias) v = r.f64();
  return model;
}

void save_model(const BaselineModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write model '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failure on '" + path.string() + "'");
}

BaselineModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failure on '" + path.string() + "'");
  return deserialize_model(bytes);
}

std::vector<ProbDist> BaselineClassifier::predict_proba(std::span<const MarkedText> marked) const {
  return relx::predict_proba(model_, marked, *schema_, jobs_);
}

std::unique_ptr<Classifier> NativeBackend::fit(std::span<const MarkedText> marked,
                                               std::span<const LabelId> golds,
                                               const TrainingConfig& config) const {
  if (config.optimizer != "sgd") {
    throw Error(ErrorCode::kValidation,
                "native backend supports optimizer 'sgd' only, got '" + config.optimizer + "'");
  }
  return std::make_unique<BaselineClassifier>(
      train_baseline(marked, golds, config, *schema_, hashing_), *schema_, jobs_);
}

}  // namespace relx
