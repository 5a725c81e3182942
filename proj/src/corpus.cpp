#include "relx/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>

#include "relx/random.hpp"
#include "relx/utf8.hpp"

namespace relx {

namespace {

Error invalid(const std::string& reason) {
  return Error(ErrorCode::kValidation, reason);
}

bool has_line_breaking_char(const std::string& s) {
  return s.find_first_of("\t\n\r") != std::string::npos;
}

void check_span(const char* role, const EntitySpan& span,
                const std::vector<std::size_t>& bounds, const std::string& text) {
  const std::size_t length = bounds.size() - 1;
  if (!(span.start < span.end && span.end <= length)) {
    throw invalid(std::string(role) + " span out of range");
  }
  const std::size_t begin = bounds[span.start];
  const std::size_t end = bounds[span.end];
  if (text.compare(begin, end - begin, span.surface) != 0) {
    throw invalid(std::string("span/surface mismatch (") + role + ")");
  }
}

bool partially_overlap(const EntitySpan& a, const EntitySpan& b) {
  const bool disjoint = a.end <= b.start || b.end <= a.start;
  const bool a_in_b = b.start <= a.start && a.end <= b.end;
  const bool b_in_a = a.start <= b.start && b.end <= a.end;
  return !(disjoint || a_in_b || b_in_a);
}

const std::set<std::string>& canonical_keys() {
  static const std::set<std::string> keys = {
      "id",     "text",   "e1_start", "e1_end", "e2_start",
      "e2_end", "e1_type", "e2_type", "gold"};
  return keys;
}

std::size_t offset_field(const nlohmann::json& record, const char* key) {
  const auto& value = record.at(key);
  if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
    throw Error(ErrorCode::kParse, std::string("'") + key + "' must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

const std::string& string_field(const nlohmann::json& record, const char* key) {
  const auto& value = record.at(key);
  if (!value.is_string()) {
    throw Error(ErrorCode::kParse, std::string("'") + key + "' must be a string");
  }
  return value.get_ref<const std::string&>();
}

// Surface for an offset pair, or empty when the offsets are unusable (the
// validator reports those).
std::string surface_of(const std::string& text,
                       const std::optional<std::vector<std::size_t>>& bounds,
                       std::size_t start, std::size_t end) {
  if (!bounds || start >= end || end >= bounds->size()) return {};
  return text.substr((*bounds)[start], (*bounds)[end] - (*bounds)[start]);
}

}  // namespace

std::pair<std::size_t, std::size_t> byte_range(const std::string& text,
                                               const EntitySpan& span) {
  const auto bounds = utf8::boundaries(text);
  if (!bounds) throw invalid("text is not valid UTF-8");
  if (!(span.start < span.end && span.end < bounds->size())) {
    throw invalid("span out of range");
  }
  return {(*bounds)[span.start], (*bounds)[span.end]};
}

void validate_instance(const Instance& inst, const RelationSchema& schema) {
  if (inst.id.empty() || inst.id.find_first_of(" \t\n\r") != std::string::npos) {
    throw invalid("invalid id '" + inst.id + "'");
  }
  const auto bounds = utf8::boundaries(inst.text);
  if (!bounds) throw invalid("text is not valid UTF-8");
  if (has_line_breaking_char(inst.text)) throw invalid("text contains tab or newline");
  check_span("e1", inst.e1, *bounds, inst.text);
  check_span("e2", inst.e2, *bounds, inst.text);
  if (partially_overlap(inst.e1, inst.e2)) throw invalid("partial span overlap");
  if (!schema.has_pair(inst.pair())) throw invalid("unknown entity pair");
  if (inst.gold) {
    if (*inst.gold < 0 || static_cast<std::size_t>(*inst.gold) >= schema.size()) {
      throw invalid("gold label index out of range");
    }
    if (!schema.is_plausible(*inst.gold, inst.e1.etype, inst.e2.etype)) {
      throw invalid("gold label implausible for pair");
    }
  }
}

Instance canonical_record(const nlohmann::json& record, const RelationSchema& schema) {
  if (!record.is_object()) throw Error(ErrorCode::kParse, "record is not an object");
  for (const auto& key : canonical_keys()) {
    if (!record.contains(key)) throw Error(ErrorCode::kParse, "missing key '" + key + "'");
  }
  for (const auto& item : record.items()) {
    if (!canonical_keys().count(item.key())) {
      throw Error(ErrorCode::kParse, "unexpected key '" + item.key() + "'");
    }
  }

  Instance inst;
  inst.id = string_field(record, "id");
  inst.text = string_field(record, "text");
  inst.e1.start = offset_field(record, "e1_start");
  inst.e1.end = offset_field(record, "e1_end");
  inst.e2.start = offset_field(record, "e2_start");
  inst.e2.end = offset_field(record, "e2_end");
  inst.e1.etype = parse_entity_type(string_field(record, "e1_type"));
  inst.e2.etype = parse_entity_type(string_field(record, "e2_type"));

  const auto bounds = utf8::boundaries(inst.text);
  inst.e1.surface = surface_of(inst.text, bounds, inst.e1.start, inst.e1.end);
  inst.e2.surface = surface_of(inst.text, bounds, inst.e2.start, inst.e2.end);

  const auto& gold = string_field(record, "gold");
  if (gold != "-") {
    const auto id = schema.find(gold);
    if (!id) throw invalid("unknown label '" + gold + "'");
    inst.gold = *id;
  }
  return inst;
}

LoadResult read_corpus(std::istream& in, const RelationSchema& schema,
                       const RecordAdapter& adapter) {
  LoadResult result;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      result.issues.push_back({line_no, ErrorCode::kParse, "malformed record: " + std::string(e.what())});
      continue;
    }
    try {
      Instance inst = adapter(record, schema);
      validate_instance(inst, schema);
      if (!seen.insert(inst.id).second) throw invalid("duplicate id '" + inst.id + "'");
      result.instances.push_back(std::move(inst));
    } catch (const Error& e) {
      const ErrorCode code =
          e.code() == ErrorCode::kParse ? ErrorCode::kParse : ErrorCode::kValidation;
      result.issues.push_back({line_no, code, e.message()});
    } catch (const nlohmann::json::exception& e) {
      result.issues.push_back({line_no, ErrorCode::kParse, e.what()});
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failure");
  return result;
}

LoadResult load_corpus(const std::filesystem::path& path, const RelationSchema& schema,
                       const RecordAdapter& adapter) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open corpus '" + path.string() + "'");
  return read_corpus(in, schema, adapter);
}

nlohmann::json to_record(const Instance& inst, const RelationSchema& schema) {
  nlohmann::json record;
  record["id"] = inst.id;
  record["text"] = inst.text;
  record["e1_start"] = inst.e1.start;
  record["e1_end"] = inst.e1.end;
  record["e2_start"] = inst.e2.start;
  record["e2_end"] = inst.e2.end;
  record["e1_type"] = std::string(canonical_token(inst.e1.etype));
  record["e2_type"] = std::string(canonical_token(inst.e2.etype));
  record["gold"] = inst.gold ? schema.name(*inst.gold) : std::string("-");
  return record;
}

void write_corpus(std::ostream& out, std::span<const Instance> corpus,
                  const RelationSchema& schema) {
  for (const auto& inst : corpus) out << to_record(inst, schema).dump() << '\n';
}

void save_corpus(const std::filesystem::path& path, std::span<const Instance> corpus,
                 const RelationSchema& schema) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write corpus '" + path.string() + "'");
  write_corpus(out, corpus, schema);
  if (!out) throw Error(ErrorCode::kIo, "write failure on '" + path.string() + "'");
}

CorpusStats compute_stats(std::span<const Instance> corpus, const RelationSchema& schema) {
  CorpusStats stats;
  stats.per_relation.assign(schema.size(), 0);
  for (const auto& pair : schema.pairs()) stats.per_pair[pair] = 0;
  for (const auto& inst : corpus) {
    if (!inst.gold) {
      throw Error(ErrorCode::kMissingGold, "instance '" + inst.id + "' has no gold label");
    }
    ++stats.per_relation.at(static_cast<std::size_t>(*inst.gold));
    ++stats.per_pair[inst.pair()];
    ++stats.total;
  }
  return stats;
}

void print_stats(std::ostream& os, const CorpusStats& stats, const RelationSchema& schema) {
  os << std::left << std::setw(16) << "entity_pair" << std::right << std::setw(8)
     << "pair_obs" << "  " << std::left << std::setw(28) << "relation" << std::right
     << std::setw(8) << "rel_obs" << '\n';
  for (const auto& pair : schema.pairs()) {
    const auto it = stats.per_pair.find(pair);
    const std::size_t pair_count = it == stats.per_pair.end() ? 0 : it->second;
    std::string pair_name(marker_form(pair.first));
    pair_name += '-';
    pair_name += marker_form(pair.second);
    bool first = true;
    for (LabelId id : schema.plausible_labels(pair)) {
      if (id == schema.no_relation()) continue;
      os << std::left << std::setw(16) << (first ? pair_name : "") << std::right
         << std::setw(8) << (first ? std::to_string(pair_count) : "") << "  "
         << std::left << std::setw(28) << schema.name(id) << std::right << std::setw(8)
         << stats.per_relation[static_cast<std::size_t>(id)] << '\n';
      first = false;
    }
  }
  os << std::left << std::setw(16) << "" << std::setw(8) << "" << "  " << std::setw(28)
     << schema.name(schema.no_relation()) << std::right << std::setw(8)
     << stats.per_relation[static_cast<std::size_t>(schema.no_relation())] << '\n';
  os << "total " << stats.total << '\n';
}

namespace {

// Integer allocation of `target` units proportional to `quotas`, each
// capped, using largest remainders (ties to the lower class index).
std::vector<std::size_t> allocate(const std::vector<double>& quotas,
                                  const std::vector<std::size_t>& caps,
                                  std::size_t target) {
  const std::size_t n = quotas.size();
  std::vector<std::size_t> out(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::min(caps[i], static_cast<std::size_t>(std::floor(quotas[i])));
    assigned += out[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a] - std::floor(quotas[a]) > quotas[b] - std::floor(quotas[b]);
  });
  while (assigned < target) {
    bool progressed = false;
    for (std::size_t i : order) {
      if (assigned == target) break;
      if (out[i] < caps[i]) {
        ++out[i];
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return out;
}

}  // namespace

std::pair<std::vector<Instance>, std::vector<Instance>> split_corpus(
    std::span<const Instance> corpus, SplitFractions fractions, std::uint64_t seed) {
  if (!(fractions.train > 0 && fractions.dev > 0 &&
        fractions.train + fractions.dev <= 1.0 + 1e-12)) {
    throw invalid("split fractions must be positive and sum to at most 1");
  }
  std::map<LabelId, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].gold) {
      throw Error(ErrorCode::kMissingGold, "instance '" + corpus[i].id + "' has no gold label");
    }
    by_class[*corpus[i].gold].push_back(i);
  }

  const double n = static_cast<double>(corpus.size());
  const auto train_target = static_cast<std::size_t>(std::llround(n * fractions.train));
  const auto dev_target = std::min(corpus.size() - train_target,
                                   static_cast<std::size_t>(std::llround(n * fractions.dev)));

  std::vector<double> train_quota, dev_quota;
  std::vector<std::size_t> sizes;
  for (const auto& [label, members] : by_class) {
    sizes.push_back(members.size());
    train_quota.push_back(static_cast<double>(members.size()) * fractions.train);
    dev_quota.push_back(static_cast<double>(members.size()) * fractions.dev);
  }
  const auto train_counts = allocate(train_quota, sizes, train_target);
  std::vector<std::size_t> remaining(sizes.size());
  for (std::size_t c = 0; c < sizes.size(); ++c) remaining[c] = sizes[c] - train_counts[c];
  const auto dev_counts = allocate(dev_quota, remaining, dev_target);

  enum Side : std::uint8_t { kNone, kTrain, kDev };
  std::vector<Side> side(corpus.size(), kNone);
  std::mt19937_64 engine(seed);
  std::size_t c = 0;
  for (auto& [label, members] : by_class) {
    shuffle_in_place(members, engine);
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k < train_counts[c]) {
        side[members[k]] = kTrain;
      } else if (k < train_counts[c] + dev_counts[c]) {
        side[members[k]] = kDev;
      }
    }
    ++c;
  }

  std::pair<std::vector<Instance>, std::vector<Instance>> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (side[i] == kTrain) out.first.push_back(corpus[i]);
    if (side[i] == kDev) out.second.push_back(corpus[i]);
  }
  return out;
}

}  // namespace relx
