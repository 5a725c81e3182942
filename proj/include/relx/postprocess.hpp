#ifndef RELX_POSTPROCESS_HPP
#define RELX_POSTPROCESS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relx/classifier.hpp"
#include "relx/corpus.hpp"

namespace relx {

struct Prediction {
  std::string source_id;
  LabelId raw_argmax = 0;
  LabelId final_label = 0;
  // Number of labels ranked above final_label (probability descending,
  // index ascending); 0 when the argmax was already plausible.
  std::size_t fallback_rank = 0;
  double final_prob = 0.0;

  bool operator==(const Prediction&) const = default;
};

// Type-constrained decoding: the most probable label among those plausible
// for (e1, e2), ties to the lower index. Throws kUnknownPair, or
// kLengthMismatch if the distribution does not cover the schema.
Prediction constrain(const ProbDist& dist, EntityType e1, EntityType e2,
                     const RelationSchema& schema);

struct ConstrainedBatch {
  std::vector<Prediction> predictions;
  std::size_t corrections = 0;  // predictions with fallback_rank > 0
};

// Element-wise constrain; source ids are taken from the instances. An
// UnknownPair error names the offending position.
ConstrainedBatch constrain_batch(std::span<const ProbDist> dists,
                                 std::span<const Instance> instances,
                                 const RelationSchema& schema, std::size_t jobs = 1);

// Distribution file: "id<TAB>p0 p1 ... p21" per line.
void write_distributions(std::ostream& out, std::span<const std::string> ids,
                         std::span<const ProbDist> dists);
void save_distributions(const std::filesystem::path& path, std::span<const std::string> ids,
                        std::span<const ProbDist> dists);
// Throws Error(kParse, line) for a malformed line, including a wrong entry
// count or an invalid distribution.
std::vector<std::pair<std::string, ProbDist>> read_distributions(std::istream& in,
                                                                 const RelationSchema& schema);
std::vector<std::pair<std::string, ProbDist>> load_distributions(
    const std::filesystem::path& path, const RelationSchema& schema);

// Prediction file: "id<TAB>raw_label<TAB>final_label<TAB>fallback_rank".
// final_prob is not stored and reads back as 0.
void write_predictions(std::ostream& out, std::span<const Prediction> preds,
                       const RelationSchema& schema);
void save_predictions(const std::filesystem::path& path, std::span<const Prediction> preds,
                      const RelationSchema& schema);
std::vector<Prediction> read_predictions(std::istream& in, const RelationSchema& schema);
std::vector<Prediction> load_predictions(const std::filesystem::path& path,
                                         const RelationSchema& schema);

}  // namespace relx

#endif  // RELX_POSTPROCESS_HPP
