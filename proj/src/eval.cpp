#include "relx/eval.hpp"

#include <algorithm>
#include <iomanip>

#include <json.hpp>

#include "relx/parallel.hpp"

namespace relx {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

EvalReport score(std::span<const LabelId> predicted, std::span<const LabelId> golds,
                 const RelationSchema& schema, const ScoreOptions& options) {
  if (predicted.size() != golds.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(predicted.size()) +
                                                " predictions for " +
                                                std::to_string(golds.size()) + " gold labels");
  }
  if (predicted.empty()) throw Error(ErrorCode::kEmpty, "nothing to evaluate");

  const std::size_t n = schema.size();
  EvalReport report;
  report.total = golds.size();
  report.excluded_no_relation = options.exclude_no_relation;
  report.confusion.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const auto g = static_cast<std::size_t>(golds[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    if (golds[i] < 0 || g >= n || predicted[i] < 0 || p >= n) {
      throw Error(ErrorCode::kValidation, "label index out of range at position " + std::to_string(i));
    }
    ++report.confusion[g][p];
  }

  const auto counted = [&](std::size_t k) {
    return !(options.exclude_no_relation && static_cast<LabelId>(k) == schema.no_relation());
  };

  std::size_t tp_sum = 0, pred_sum = 0, gold_sum = 0;
  double macro_sum = 0.0, present_sum = 0.0, weighted_sum = 0.0;
  std::size_t classes = 0, present = 0, support_sum = 0;
  for (std::size_t k = 0; k < n; ++k) {
    ClassScore cs;
    cs.label = static_cast<LabelId>(k);
    const std::size_t tp = report.confusion[k][k];
    for (std::size_t j = 0; j < n; ++j) {
      cs.support += report.confusion[k][j];
      cs.predicted += report.confusion[j][k];
    }
    cs.precision = safe_div(static_cast<double>(tp), static_cast<double>(cs.predicted));
    cs.recall = safe_div(static_cast<double>(tp), static_cast<double>(cs.support));
    cs.f1 = f1_of(cs.precision, cs.recall);
    cs.absent = cs.support == 0;
    if (counted(k)) {
      tp_sum += tp;
      pred_sum += cs.predicted;
      gold_sum += cs.support;
      macro_sum += cs.f1;
      ++classes;
      if (!cs.absent) {
        present_sum += cs.f1;
        ++present;
      }
      weighted_sum += cs.f1 * static_cast<double>(cs.support);
      support_sum += cs.support;
    }
    report.per_class.push_back(cs);
  }

  const double micro_p = safe_div(static_cast<double>(tp_sum), static_cast<double>(pred_sum));
  const double micro_r = safe_div(static_cast<double>(tp_sum), static_cast<double>(gold_sum));
  report.micro_f1 = f1_of(micro_p, micro_r);
  report.macro_f1 = safe_div(macro_sum, static_cast<double>(classes));
  report.macro_f1_present = safe_div(present_sum, static_cast<double>(present));
  report.weighted_f1 = safe_div(weighted_sum, static_cast<double>(support_sum));
  return report;
}

EvalReport score(std::span<const Prediction> preds, std::span<const LabelId> golds,
                 const RelationSchema& schema, const ScoreOptions& options) {
  std::vector<LabelId> labels;
  labels.reserve(preds.size());
  for (const auto& p : preds) labels.push_back(p.final_label);
  return score(labels, golds, schema, options);
}

double postprocess_gain(const EvalReport& before, const EvalReport& after) {
  return after.micro_f1 - before.micro_f1;
}

void print_report(std::ostream& os, const EvalReport& report, const RelationSchema& schema) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::fixed << std::setprecision(4);
  os << std::left << std::setw(28) << "label" << std::right << std::setw(10) << "precision"
     << std::setw(10) << "recall" << std::setw(10) << "f1" << std::setw(9) << "support"
     << std::setw(11) << "predicted" << '\n';
  for (const auto& cs : report.per_class) {
    os << std::left << std::setw(28) << schema.name(cs.label) << std::right << std::setw(10)
       << cs.precision << std::setw(10) << cs.recall << std::setw(10) << cs.f1 << std::setw(9)
       << cs.support << std::setw(11) << cs.predicted << (cs.absent ? "  (absent)" : "") << '\n';
  }
  os << '\n';
  os << std::left << std::setw(20) << "instances" << report.total << '\n';
  os << std::setw(20) << "micro_f1" << report.micro_f1 << '\n';
  os << std::setw(20) << "macro_f1" << report.macro_f1 << '\n';
  os << std::setw(20) << "macro_f1_present" << report.macro_f1_present << '\n';
  os << std::setw(20) << "weighted_f1" << report.weighted_f1 << '\n';
  if (report.excluded_no_relation) os << "(no_relation excluded from averages)\n";
  os.flags(flags);
  os.precision(precision);
}

void write_report_jsonl(std::ostream& os, const EvalReport& report, const RelationSchema& schema) {
  for (const auto& cs : report.per_class) {
    nlohmann::json rec = {{"type", "class"},          {"label", schema.name(cs.label)},
                          {"precision", cs.precision}, {"recall", cs.recall},
                          {"f1", cs.f1},               {"support", cs.support},
                          {"predicted", cs.predicted}, {"absent", cs.absent}};
    os << rec.dump() << '\n';
  }
  nlohmann::json summary = {{"type", "summary"},
                            {"instances", report.total},
                            {"micro_f1", report.micro_f1},
                            {"macro_f1", report.macro_f1},
                            {"macro_f1_present", report.macro_f1_present},
                            {"weighted_f1", report.weighted_f1},
                            {"exclude_no_relation", report.excluded_no_relation},
                            {"confusion", report.confusion}};
  os << summary.dump() << '\n';
}

namespace {

std::vector<LabelId> gold_labels(std::span<const Instance> corpus) {
  std::vector<LabelId> golds;
  golds.reserve(corpus.size());
  for (const auto& inst : corpus) {
    if (!inst.gold) {
      throw Error(ErrorCode::kMissingGold, "instance '" + inst.id + "' has no gold label");
    }
    golds.push_back(*inst.gold);
  }
  return golds;
}

}  // namespace

AblationReport run_ablation(std::span<const Instance> train, std::span<const Instance> test,
                            std::span<const MarkerStrategy> strategies,
                            std::span<const ClassifierBackend* const> backends,
                            const TrainingConfig& config, const RelationSchema& schema,
                            const AblationOptions& options) {
  if (strategies.empty() || backends.empty()) {
    throw Error(ErrorCode::kValidation, "ablation needs at least one strategy and one backend");
  }
  const auto train_golds = gold_labels(train);
  const auto test_golds = gold_labels(test);

  const std::size_t cells = backends.size() * strategies.size();
  AblationReport report;
  report.rows.resize(cells);
  parallel_for(cells, options.jobs, [&](std::size_t c) {
    const ClassifierBackend& backend = *backends[c / strategies.size()];
    const MarkerStrategy strategy = strategies[c % strategies.size()];
    try {
      const auto train_marked = preprocess_corpus(train, strategy);
      const auto test_marked = preprocess_corpus(test, strategy);
      const auto classifier = backend.fit(train_marked, train_golds, config);
      const auto dists = classifier->predict_proba(test_marked);
      const auto batch = constrain_batch(dists, test, schema);

      std::vector<LabelId> raw;
      raw.reserve(batch.predictions.size());
      for (const auto& p : batch.predictions) raw.push_back(p.raw_argmax);
      const EvalReport after = score(batch.predictions, test_golds, schema, options.scoring);
      const EvalReport before = score(raw, test_golds, schema, options.scoring);

      AblationRow& row = report.rows[c];
      row.backend = backend.name();
      row.strategy = strategy;
      row.micro_f1 = after.micro_f1;
      row.macro_f1 = after.macro_f1;
      row.weighted_f1 = after.weighted_f1;
      row.corrections = batch.corrections;
      row.raw_micro_f1 = before.micro_f1;
    } catch (const Error& e) {
      throw e.with_context("[" + backend.name() + "/" + std::string(strategy_name(strategy)) +
                           "] ");
    }
  });
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const AblationRow& a, const AblationRow& b) { return a.micro_f1 > b.micro_f1; });
  return report;
}

AblationReport run_ablation(std::span<const Instance> corpus,
                            std::span<const MarkerStrategy> strategies,
                            std::span<const ClassifierBackend* const> backends,
                            TrainingConfig config, std::uint64_t seed,
                            const RelationSchema& schema, const AblationOptions& options) {
  const auto [train, test] = split_corpus(corpus, {0.8, 0.2}, seed);
  config.seed = seed;
  return run_ablation(train, test, strategies, backends, config, schema, options);
}

void print_ablation(std::ostream& os, const AblationReport& report) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::fixed << std::setprecision(4);
  os << std::left << std::setw(10) << "backend" << std::setw(14) << "strategy" << std::right
     << std::setw(10) << "micro_f1" << std::setw(10) << "macro_f1" << std::setw(13)
     << "weighted_f1" << std::setw(13) << "corrections" << std::setw(14) << "raw_micro_f1"
     << '\n';
  for (const auto& row : report.rows) {
    os << std::left << std::setw(10) << row.backend << std::setw(14)
       << strategy_name(row.strategy) << std::right << std::setw(10) << row.micro_f1
       << std::setw(10) << row.macro_f1 << std::setw(13) << row.weighted_f1 << std::setw(13)
       << row.corrections << std::setw(14) << row.raw_micro_f1 << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

}  // namespace relx
