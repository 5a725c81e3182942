#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <unordered_map>

#include <CLI11.hpp>

#include "config.hpp"
#include "relx/baseline.hpp"
#include "relx/corpus.hpp"
#include "relx/eval.hpp"
#include "relx/postprocess.hpp"
#include "relx/preprocess.hpp"
#include "relx/remote.hpp"
#include "relx/schema.hpp"

namespace relx::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  PipelineConfig config;
  const RelationSchema& schema = default_schema();
  std::ostream& out;
  std::ostream& err;
};

void require_exists(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kIo, "no such file '" + path.string() + "'");
}

fs::path require_path(const std::optional<fs::path>& path, const char* key) {
  if (!path) throw Error(ErrorCode::kValidation, std::string("config key '") + key + "' is not set");
  return *path;
}

// Loads a corpus, reporting every rejected record as path:line: reason.
std::vector<Instance> load_checked(Context& ctx, const fs::path& path) {
  require_exists(path);
  auto result = load_corpus(path, ctx.schema);
  for (const auto& issue : result.issues) {
    ctx.err << path.string() << ':' << issue.line << ": " << error_code_name(issue.code) << ": "
            << issue.reason << '\n';
  }
  if (!result.issues.empty() && !ctx.config.skip_invalid) {
    throw Error(ErrorCode::kValidation, std::to_string(result.issues.size()) +
                                            " invalid record(s) in '" + path.string() + "'");
  }
  return std::move(result.instances);
}

std::unordered_map<std::string, const Instance*> index_by_id(const std::vector<Instance>& corpus) {
  std::unordered_map<std::string, const Instance*> by_id;
  for (const auto& inst : corpus) by_id.emplace(inst.id, &inst);
  return by_id;
}

const Instance& lookup(const std::unordered_map<std::string, const Instance*>& by_id,
                       const std::string& id, std::size_t line) {
  auto it = by_id.find(id);
  if (it == by_id.end()) {
    throw Error(ErrorCode::kValidation, "id '" + id + "' is not in the corpus", line);
  }
  return *it->second;
}

LabelId gold_of(const Instance& inst, std::size_t line) {
  if (!inst.gold) {
    throw Error(ErrorCode::kMissingGold, "instance '" + inst.id + "' has no gold label", line);
  }
  return *inst.gold;
}

template <typename Fn>
void write_text(const fs::path& path, Fn&& fn) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  fn(file);
  if (!file) throw Error(ErrorCode::kIo, "write failure on '" + path.string() + "'");
}

void stage_preprocess(Context& ctx, const fs::path& corpus_path, const fs::path& out_path) {
  const auto corpus = load_checked(ctx, corpus_path);
  save_marked(out_path, preprocess_corpus(corpus, ctx.config.strategy, ctx.config.jobs));
}

void stage_train(Context& ctx, const fs::path& marked_path, const fs::path& corpus_path,
                 const fs::path& model_path) {
  require_exists(marked_path);
  const auto marked = load_marked(marked_path);
  const auto corpus = load_checked(ctx, corpus_path);
  const auto by_id = index_by_id(corpus);
  std::vector<LabelId> golds;
  golds.reserve(marked.size());
  for (std::size_t i = 0; i < marked.size(); ++i) {
    golds.push_back(gold_of(lookup(by_id, marked[i].source_id, i + 1), i + 1));
  }
  if (ctx.config.training.optimizer != "sgd") {
    throw Error(ErrorCode::kValidation, "native training supports optimizer 'sgd' only");
  }
  save_model(train_baseline(marked, golds, ctx.config.training, ctx.schema, ctx.config.hashing),
             model_path);
}

void stage_predict(Context& ctx, const fs::path& marked_path,
                   const std::optional<fs::path>& model_path, const fs::path& out_path) {
  require_exists(marked_path);
  const auto marked = load_marked(marked_path);
  std::vector<ProbDist> dists;
  if (ctx.config.backend == BackendKind::kRemote) {
    if (ctx.config.endpoint.empty()) {
      throw Error(ErrorCode::kValidation, "remote backend selected but remote.endpoint is not set");
    }
    dists = remote_predict_proba(ctx.config.endpoint, marked, ctx.config.timeout, ctx.schema);
  } else {
    if (!model_path) throw Error(ErrorCode::kValidation, "--model is required for the native backend");
    require_exists(*model_path);
    dists = predict_proba(load_model(*model_path), marked, ctx.schema, ctx.config.jobs);
  }
  std::vector<std::string> ids;
  ids.reserve(marked.size());
  for (const auto& m : marked) ids.push_back(m.source_id);
  save_distributions(out_path, ids, dists);
}

void stage_postprocess(Context& ctx, const fs::path& dists_path, const fs::path& corpus_path,
                       const fs::path& out_path) {
  require_exists(dists_path);
  const auto rows = load_distributions(dists_path, ctx.schema);
  const auto corpus = load_checked(ctx, corpus_path);
  const auto by_id = index_by_id(corpus);
  std::vector<ProbDist> dists;
  std::vector<Instance> aligned;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    aligned.push_back(lookup(by_id, rows[i].first, i + 1));
    dists.push_back(rows[i].second);
  }
  const auto batch = constrain_batch(dists, aligned, ctx.schema, ctx.config.jobs);
  save_predictions(out_path, batch.predictions, ctx.schema);
  ctx.out << "corrections " << batch.corrections << " of " << batch.predictions.size() << '\n';
}

EvalReport stage_eval(Context& ctx, const fs::path& preds_path, const fs::path& corpus_path,
                      const std::optional<fs::path>& text_path,
                      const std::optional<fs::path>& jsonl_path) {
  require_exists(preds_path);
  const auto preds = load_predictions(preds_path, ctx.schema);
  const auto corpus = load_checked(ctx, corpus_path);
  const auto by_id = index_by_id(corpus);
  std::vector<LabelId> golds;
  golds.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    golds.push_back(gold_of(lookup(by_id, preds[i].source_id, i + 1), i + 1));
  }
  const auto report =
      score(preds, golds, ctx.schema, ScoreOptions{ctx.config.exclude_no_relation});
  print_report(ctx.out, report, ctx.schema);
  if (text_path) write_text(*text_path, [&](std::ostream& os) { print_report(os, report, ctx.schema); });
  if (jsonl_path) {
    write_text(*jsonl_path, [&](std::ostream& os) { write_report_jsonl(os, report, ctx.schema); });
  }
  return report;
}

void run_pipeline(Context& ctx) {
  const auto& cfg = ctx.config;
  const fs::path train_path = require_path(cfg.train_corpus, "corpus.train");
  const fs::path test_path =
      cfg.test_corpus ? *cfg.test_corpus : require_path(cfg.dev_corpus, "corpus.test");
  require_exists(train_path);
  require_exists(test_path);
  fs::create_directories(cfg.output_dir);
  const fs::path dir = cfg.output_dir;

  write_text(dir / "config.effective", [&](std::ostream& os) { os << render(cfg); });
  stage_preprocess(ctx, test_path, dir / "test.marked.tsv");
  std::optional<fs::path> model;
  if (cfg.backend == BackendKind::kNative) {
    stage_preprocess(ctx, train_path, dir / "train.marked.tsv");
    model = dir / "model.bin";
    stage_train(ctx, dir / "train.marked.tsv", train_path, *model);
  }
  stage_predict(ctx, dir / "test.marked.tsv", model, dir / "test.dists.tsv");
  stage_postprocess(ctx, dir / "test.dists.tsv", test_path, dir / "test.preds.tsv");
  stage_eval(ctx, dir / "test.preds.tsv", test_path, dir / "report.txt", dir / "report.jsonl");
}

void run_ablate(Context& ctx, const std::vector<std::string>& strategy_names,
                const std::vector<std::string>& backend_names,
                const std::optional<fs::path>& out_path) {
  const auto& cfg = ctx.config;
  std::vector<MarkerStrategy> strategies;
  for (const auto& name : strategy_names) strategies.push_back(parse_strategy(name));
  if (strategies.empty()) strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));

  std::vector<std::unique_ptr<ClassifierBackend>> owned;
  std::vector<std::string> names = backend_names;
  if (names.empty()) names.push_back(cfg.backend == BackendKind::kNative ? "native" : "remote");
  for (const auto& name : names) {
    if (name == "native") {
      owned.push_back(std::make_unique<NativeBackend>(ctx.schema, cfg.hashing));
    } else if (name == "remote") {
      if (cfg.endpoint.empty()) {
        throw Error(ErrorCode::kValidation, "remote backend selected but remote.endpoint is not set");
      }
      owned.push_back(std::make_unique<RemoteBackend>(cfg.endpoint, cfg.timeout, ctx.schema));
    } else {
      throw Error(ErrorCode::kValidation, "unknown backend '" + name + "'");
    }
  }
  std::vector<const ClassifierBackend*> backends;
  for (const auto& b : owned) backends.push_back(b.get());

  // Native training runs at baseline defaults unless overridden; the remote
  // backend ignores the training config.
  const auto train = load_checked(ctx, require_path(cfg.train_corpus, "corpus.train"));
  AblationOptions options;
  options.jobs = cfg.jobs;
  options.scoring.exclude_no_relation = cfg.exclude_no_relation;
  AblationReport report;
  if (cfg.test_corpus) {
    const auto test = load_checked(ctx, *cfg.test_corpus);
    report = run_ablation(train, test, strategies, backends, cfg.training, ctx.schema, options);
  } else {
    report = run_ablation(train, strategies, backends, cfg.training, cfg.seed, ctx.schema, options);
  }
  print_ablation(ctx.out, report);
  if (out_path) write_text(*out_path, [&](std::ostream& os) { print_ablation(os, report); });
}

const std::map<std::string, std::string>& flag_aliases() {
  static const std::map<std::string, std::string> aliases = {
      {"pipeline.strategy", "--strategy"}, {"pipeline.backend", "--backend"},
      {"pipeline.seed", "--seed"},         {"pipeline.jobs", "--jobs"},
      {"pipeline.output_dir", "--output-dir"}, {"remote.endpoint", "--endpoint"},
  };
  return aliases;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Typed entity relation extraction"};
  app.name(args.empty() ? "relx" : args[0]);
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_file;
  app.add_option("-c,--config", config_file, "Config file of 'section.key = value' lines");

  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& key : config_keys()) {
    std::string names = "--" + key;
    if (auto it = flag_aliases().find(key); it != flag_aliases().end()) names += "," + it->second;
    flag_options[key] = app.add_option(names, flag_values[key], "Override " + key)->group("Config keys");
  }

  std::string input;
  std::optional<std::string> output, corpus, model, jsonl, report_path;
  std::vector<std::string> strategy_list, backend_list;

  auto* schema_cmd = app.add_subcommand("schema", "Print the relation ontology");
  auto* stats_cmd = app.add_subcommand("stats", "Per-relation and per-pair counts of a corpus");
  stats_cmd->add_option("corpus", corpus, "Corpus file (default corpus.train)");
  auto* pre_cmd = app.add_subcommand("preprocess", "Insert entity markers");
  pre_cmd->add_option("corpus", input, "Corpus file")->required();
  pre_cmd->add_option("-o,--output", output, "Marked-text file")->required();
  auto* train_cmd = app.add_subcommand("train", "Train the native baseline");
  train_cmd->add_option("marked", input, "Marked-text file")->required();
  train_cmd->add_option("--corpus", corpus, "Corpus with gold labels (default corpus.train)");
  train_cmd->add_option("-o,--output", output, "Model file")->required();
  auto* predict_cmd = app.add_subcommand("predict", "Write label distributions");
  predict_cmd->add_option("marked", input, "Marked-text file")->required();
  predict_cmd->add_option("-m,--model", model, "Model file (native backend)");
  predict_cmd->add_option("-o,--output", output, "Distribution file")->required();
  auto* post_cmd = app.add_subcommand("postprocess", "Type-constrained decoding");
  post_cmd->add_option("dists", input, "Distribution file")->required();
  post_cmd->add_option("--corpus", corpus, "Corpus file (default corpus.test)");
  post_cmd->add_option("-o,--output", output, "Prediction file")->required();
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions");
  eval_cmd->add_option("predictions", input, "Prediction file")->required();
  eval_cmd->add_option("--corpus", corpus, "Corpus with gold labels (default corpus.test)");
  eval_cmd->add_option("-o,--output", report_path, "Also write the table here");
  eval_cmd->add_option("--jsonl", jsonl, "Write per-class and summary records here");
  auto* ablate_cmd = app.add_subcommand("ablate", "Strategy x backend grid");
  ablate_cmd->add_option("--strategies", strategy_list, "Strategies (default: all)")->delimiter(',');
  ablate_cmd->add_option("--backends", backend_list, "native and/or remote")->delimiter(',');
  ablate_cmd->add_option("-o,--output", output, "Also write the table here");
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage into the output directory");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    Settings settings;
    if (config_file) settings = load_config_file(*config_file);
    for (auto& [key, value] : environment_settings()) settings[key] = value;
    for (const auto& [key, option] : flag_options) {
      if (option->count() > 0) settings[key] = flag_values[key];
    }
    Context ctx{resolve(settings), default_schema(), out, err};
    const auto& cfg = ctx.config;
    const auto corpus_or = [&](const std::optional<fs::path>& fallback, const char* key) {
      return corpus ? fs::path(*corpus) : require_path(fallback, key);
    };
    const auto test_corpus = cfg.test_corpus ? cfg.test_corpus : cfg.dev_corpus;

    if (*schema_cmd) {
      dump_schema(out, ctx.schema);
    } else if (*stats_cmd) {
      const auto instances = load_checked(ctx, corpus_or(cfg.train_corpus, "corpus.train"));
      print_stats(out, compute_stats(instances, ctx.schema), ctx.schema);
    } else if (*pre_cmd) {
      stage_preprocess(ctx, input, *output);
    } else if (*train_cmd) {
      stage_train(ctx, input, corpus_or(cfg.train_corpus, "corpus.train"), *output);
    } else if (*predict_cmd) {
      std::optional<fs::path> model_path;
      if (model) model_path = *model;
      stage_predict(ctx, input, model_path, *output);
    } else if (*post_cmd) {
      stage_postprocess(ctx, input, corpus_or(test_corpus, "corpus.test"), *output);
    } else if (*eval_cmd) {
      std::optional<fs::path> text_path, jsonl_path;
      if (report_path) text_path = *report_path;
      if (jsonl) jsonl_path = *jsonl;
      stage_eval(ctx, input, corpus_or(test_corpus, "corpus.test"), text_path, jsonl_path);
    } else if (*ablate_cmd) {
      std::optional<fs::path> out_path;
      if (output) out_path = *output;
      run_ablate(ctx, strategy_list, backend_list, out_path);
    } else if (*pipeline_cmd) {
      run_pipeline(ctx);
    }
  } catch (const Error& e) {
    err << "relx: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "relx: Io: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace relx::cli
