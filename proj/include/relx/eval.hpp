#ifndef RELX_EVAL_HPP
#define RELX_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relx/classifier.hpp"
#include "relx/corpus.hpp"
#include "relx/postprocess.hpp"
#include "relx/preprocess.hpp"

namespace relx {

struct ClassScore {
  LabelId label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
  bool absent = false;        // no gold instances
};

struct ScoreOptions {
  // Drop no_relation from every average; micro is then pooled over the
  // named relations only.
  bool exclude_no_relation = false;
};

struct EvalReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;          // mean over all classes, absent ones count 0
  double macro_f1_present = 0.0;  // mean over classes with support > 0
  double weighted_f1 = 0.0;       // support-weighted
  std::size_t total = 0;
  std::vector<ClassScore> per_class;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][predicted]
  bool excluded_no_relation = false;
};

// Precision, recall and F1 use 0 for 0/0. Throws kLengthMismatch, kEmpty,
// or kValidation for an out-of-range label.
EvalReport score(std::span<const LabelId> predicted, std::span<const LabelId> golds,
                 const RelationSchema& schema, const ScoreOptions& options = {});
EvalReport score(std::span<const Prediction> preds, std::span<const LabelId> golds,
                 const RelationSchema& schema, const ScoreOptions& options = {});

// after.micro_f1 - before.micro_f1
double postprocess_gain(const EvalReport& before, const EvalReport& after);

void print_report(std::ostream& os, const EvalReport& report, const RelationSchema& schema);
// One JSON object per class followed by a {"type":"summary",...} record.
void write_report_jsonl(std::ostream& os, const EvalReport& report, const RelationSchema& schema);

struct AblationRow {
  std::string backend;
  MarkerStrategy strategy = MarkerStrategy::kPreEntity;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  std::size_t corrections = 0;
  double raw_micro_f1 = 0.0;  // before constrained decoding
};

struct AblationReport {
  std::vector<AblationRow> rows;  // sorted by micro_f1 descending
};

struct AblationOptions {
  std::size_t jobs = 1;  // concurrent (backend, strategy) cells
  ScoreOptions scoring;
};

// Every (backend, strategy) cell: mark both corpora, fit on train, predict
// test, constrain, score. Errors are re-raised with a "[backend/strategy] "
// prefix.
AblationReport run_ablation(std::span<const Instance> train, std::span<const Instance> test,
                            std::span<const MarkerStrategy> strategies,
                            std::span<const ClassifierBackend* const> backends,
                            const TrainingConfig& config, const RelationSchema& schema,
                            const AblationOptions& options = {});

// Splits `corpus` 0.8 / 0.2 (stratified, `seed`) and runs the grid above
// with config.seed set to `seed`.
AblationReport run_ablation(std::span<const Instance> corpus,
                            std::span<const MarkerStrategy> strategies,
                            std::span<const ClassifierBackend* const> backends,
                            TrainingConfig config, std::uint64_t seed,
                            const RelationSchema& schema, const AblationOptions& options = {});

void print_ablation(std::ostream& os, const AblationReport& report);

}  // namespace relx

#endif  // RELX_EVAL_HPP
