#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "relx/error.hpp"

namespace relx::cli {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "corpus.train",         "corpus.dev",           "corpus.test",
      "pipeline.strategy",    "pipeline.backend",     "pipeline.output_dir",
      "pipeline.seed",        "pipeline.jobs",        "pipeline.skip_invalid",
      "remote.endpoint",      "remote.timeout_ms",    "training.learning_rate",
      "training.epochs",      "training.batch_size",  "training.weight_decay",
      "training.optimizer",   "hashing.buckets",      "eval.exclude_no_relation",
  };
  return keys;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool known_key(std::string_view key) {
  const auto& keys = config_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

Error bad_value(const std::string& key, const std::string& value, const char* expected) {
  return Error(ErrorCode::kValidation,
               "config key '" + key + "': '" + value + "' is not " + expected);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw bad_value(key, value, "a number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw bad_value(key, value, "a boolean");
}

}  // namespace

Settings parse_config_text(std::string_view text) {
  Settings settings;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "expected 'section.key = value'", line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!known_key(key)) throw Error(ErrorCode::kValidation, "unknown config key '" + key + "'", line_no);
    settings[key] = std::string(trim(line.substr(eq + 1)));
  }
  return settings;
}

Settings load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  Settings settings;
  try {
    settings = parse_config_text(buffer.str());
  } catch (const Error& e) {
    throw e.with_context(path.string() + ": ");
  }
  for (const char* key : {"corpus.train", "corpus.dev", "corpus.test", "pipeline.output_dir"}) {
    auto it = settings.find(key);
    if (it == settings.end() || it->second.empty()) continue;
    const std::filesystem::path value(it->second);
    if (value.is_relative()) it->second = (path.parent_path() / value).lexically_normal().string();
  }
  return settings;
}

Settings environment_settings() {
  Settings settings;
  if (const char* v = std::getenv("RELX_REMOTE_ENDPOINT")) settings["remote.endpoint"] = v;
  if (const char* v = std::getenv("RELX_REMOTE_TIMEOUT_MS")) settings["remote.timeout_ms"] = v;
  return settings;
}

PipelineConfig resolve(const Settings& settings) {
  PipelineConfig config;
  const auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = settings.find(key);
    if (it == settings.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [key, value] : settings) {
    if (!known_key(key)) throw Error(ErrorCode::kValidation, "unknown config key '" + key + "'");
  }

  if (auto v = get("corpus.train"); v && !v->empty()) config.train_corpus = *v;
  if (auto v = get("corpus.dev"); v && !v->empty()) config.dev_corpus = *v;
  if (auto v = get("corpus.test"); v && !v->empty()) config.test_corpus = *v;
  if (auto v = get("pipeline.strategy")) config.strategy = parse_strategy(*v);
  if (auto v = get("pipeline.backend")) {
    if (*v == "native") {
      config.backend = BackendKind::kNative;
    } else if (*v == "remote") {
      config.backend = BackendKind::kRemote;
    } else {
      throw bad_value("pipeline.backend", *v, "'native' or 'remote'");
    }
  }
  if (auto v = get("pipeline.output_dir")) config.output_dir = *v;
  if (auto v = get("pipeline.seed")) config.seed = parse_number<std::uint64_t>("pipeline.seed", *v);
  if (auto v = get("pipeline.jobs")) {
    config.jobs = parse_number<std::size_t>("pipeline.jobs", *v);
    if (config.jobs == 0) throw bad_value("pipeline.jobs", *v, "a positive count");
  }
  if (auto v = get("pipeline.skip_invalid")) config.skip_invalid = parse_bool("pipeline.skip_invalid", *v);
  if (auto v = get("remote.endpoint")) config.endpoint = *v;
  if (auto v = get("remote.timeout_ms")) {
    config.timeout = std::chrono::milliseconds(parse_number<long>("remote.timeout_ms", *v));
    if (config.timeout.count() <= 0) throw bad_value("remote.timeout_ms", *v, "positive");
  }

  config.training = config.backend == BackendKind::kRemote ? TrainingConfig::fine_tune_defaults()
                                                           : TrainingConfig::baseline_defaults();
  if (auto v = get("training.learning_rate")) {
    config.training.learning_rate = parse_number<double>("training.learning_rate", *v);
  }
  if (auto v = get("training.epochs")) config.training.epochs = parse_number<int>("training.epochs", *v);
  if (auto v = get("training.batch_size")) {
    config.training.batch_size = parse_number<int>("training.batch_size", *v);
  }
  if (auto v = get("training.weight_decay")) {
    config.training.weight_decay = parse_number<double>("training.weight_decay", *v);
  }
  if (auto v = get("training.optimizer")) config.training.optimizer = *v;
  config.training.seed = config.seed;
  config.training.validate();

  if (auto v = get("hashing.buckets")) {
    config.hashing.buckets = parse_number<std::uint32_t>("hashing.buckets", *v);
    if (config.hashing.buckets == 0) throw bad_value("hashing.buckets", *v, "positive");
  }
  if (auto v = get("eval.exclude_no_relation")) {
    config.exclude_no_relation = parse_bool("eval.exclude_no_relation", *v);
  }
  return config;
}

std::string render(const PipelineConfig& config) {
  std::ostringstream os;
  const auto path = [](const std::optional<std::filesystem::path>& p) {
    return p ? p->string() : std::string();
  };
  os << "corpus.train = " << path(config.train_corpus) << '\n'
     << "corpus.dev = " << path(config.dev_corpus) << '\n'
     << "corpus.test = " << path(config.test_corpus) << '\n'
     << "pipeline.strategy = " << strategy_name(config.strategy) << '\n'
     << "pipeline.backend = " << (config.backend == BackendKind::kNative ? "native" : "remote")
     << '\n'
     << "pipeline.output_dir = " << config.output_dir.string() << '\n'
     << "pipeline.seed = " << config.seed << '\n'
     << "pipeline.jobs = " << config.jobs << '\n'
     << "pipeline.skip_invalid = " << (config.skip_invalid ? "true" : "false") << '\n'
     << "remote.endpoint = " << config.endpoint << '\n'
     << "remote.timeout_ms = " << config.timeout.count() << '\n'
     << "training.learning_rate = " << config.training.learning_rate << '\n'
     << "training.epochs = " << config.training.epochs << '\n'
     << "training.batch_size = " << config.training.batch_size << '\n'
     << "training.weight_decay = " << config.training.weight_decay << '\n'
     << "training.optimizer = " << config.training.optimizer << '\n'
     << "hashing.buckets = " << config.hashing.buckets << '\n'
     << "eval.exclude_no_relation = " << (config.exclude_no_relation ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace relx::cli
