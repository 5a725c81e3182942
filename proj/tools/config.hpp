#ifndef RELX_TOOLS_CONFIG_HPP
#define RELX_TOOLS_CONFIG_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relx/classifier.hpp"
#include "relx/features.hpp"
#include "relx/preprocess.hpp"

namespace relx::cli {

// Every key accepted in a config file and as a --key flag.
const std::vector<std::string>& config_keys();

// Raw key/value settings. Later layers override earlier ones:
// defaults < config file < environment < command-line flags.
using Settings = std::map<std::string, std::string>;

// Parses "section.key = value" lines; '#' starts a comment. Throws
// Error(kParse, line) for a line without '=' and Error(kValidation, line)
// for an unknown key.
Settings parse_config_text(std::string_view text);
// Relative corpus and output paths are taken relative to the file's directory.
Settings load_config_file(const std::filesystem::path& path);

// RELX_REMOTE_ENDPOINT and RELX_REMOTE_TIMEOUT_MS.
Settings environment_settings();

enum class BackendKind { kNative, kRemote };

struct PipelineConfig {
  std::optional<std::filesystem::path> train_corpus;
  std::optional<std::filesystem::path> dev_corpus;
  std::optional<std::filesystem::path> test_corpus;
  MarkerStrategy strategy = MarkerStrategy::kPreEntity;
  BackendKind backend = BackendKind::kNative;
  std::string endpoint;
  std::chrono::milliseconds timeout{30000};
  TrainingConfig training;
  HashingConfig hashing;
  std::filesystem::path output_dir = "relx-out";
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  bool skip_invalid = false;
  bool exclude_no_relation = false;
};

// Typed view of the merged settings. Unset training keys take the native
// baseline defaults, or the fine-tune defaults for the remote backend; the
// training seed is always the top-level seed. Throws Error(kValidation).
PipelineConfig resolve(const Settings& settings);

// Canonical "key = value" rendering of a resolved config (all keys).
std::string render(const PipelineConfig& config);

}  // namespace relx::cli

#endif  // RELX_TOOLS_CONFIG_HPP
