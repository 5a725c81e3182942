#ifndef RELX_CORPUS_HPP
#define RELX_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relx/error.hpp"
#include "relx/schema.hpp"

namespace relx {

// Entity mention located by Unicode scalar offsets [start, end) into the
// owning instance's text.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityType etype = EntityType::kOrg;
  std::string surface;

  bool operator==(const EntitySpan&) const = default;
};

struct Instance {
  std::string id;
  std::string text;
  EntitySpan e1;
  EntitySpan e2;
  std::optional<LabelId> gold;

  EntityPair pair() const { return {e1.etype, e2.etype}; }
  bool operator==(const Instance&) const = default;
};

// Byte range of a span inside `text`. Throws Error(kValidation) when the
// text is not UTF-8 or the span falls outside it.
std::pair<std::size_t, std::size_t> byte_range(const std::string& text,
                                               const EntitySpan& span);

// Throws Error(kValidation) naming the first violated instance invariant.
void validate_instance(const Instance& inst, const RelationSchema& schema);

struct RecordIssue {
  std::size_t line = 0;
  ErrorCode code = ErrorCode::kValidation;
  std::string reason;
};

struct LoadResult {
  std::vector<Instance> instances;
  std::vector<RecordIssue> issues;
};

// Turns one parsed record into an Instance. Offsets must already be in
// scalar values. Throw Error(kParse) for structural problems and
// Error(kValidation) / kUnknownToken for content problems.
using RecordAdapter =
    std::function<Instance(const nlohmann::json&, const RelationSchema&)>;

// Adapter for the canonical record format: exactly the keys id, text,
// e1_start, e1_end, e2_start, e2_end, e1_type, e2_type, gold.
Instance canonical_record(const nlohmann::json& record, const RelationSchema& schema);

// Reads one JSON record per line. Rejected records are reported in
// `issues` with their 1-based line; only Io failures throw.
LoadResult load_corpus(const std::filesystem::path& path, const RelationSchema& schema,
                       const RecordAdapter& adapter = canonical_record);
LoadResult read_corpus(std::istream& in, const RelationSchema& schema,
                       const RecordAdapter& adapter = canonical_record);

nlohmann::json to_record(const Instance& inst, const RelationSchema& schema);
void write_corpus(std::ostream& out, std::span<const Instance> corpus,
                  const RelationSchema& schema);
void save_corpus(const std::filesystem::path& path, std::span<const Instance> corpus,
                 const RelationSchema& schema);

struct CorpusStats {
  std::vector<std::size_t> per_relation;  // indexed by label
  std::map<EntityPair, std::size_t> per_pair;
  std::size_t total = 0;

  bool operator==(const CorpusStats&) const = default;
};

// Throws Error(kMissingGold) if an instance has no gold label.
CorpusStats compute_stats(std::span<const Instance> corpus, const RelationSchema& schema);
void print_stats(std::ostream& os, const CorpusStats& stats, const RelationSchema& schema);

struct SplitFractions {
  double train = 0.8;
  double dev = 0.2;
};

// Stratified by gold label, deterministic for a seed. Both sides keep the
// input order. Instances beyond round(N*(train+dev)) are left out.
std::pair<std::vector<Instance>, std::vector<Instance>> split_corpus(
    std::span<const Instance> corpus, SplitFractions fractions, std::uint64_t seed);

}  // namespace relx

#endif  // RELX_CORPUS_HPP
