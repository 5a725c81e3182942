#include "relx/schema.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "relx/error.hpp"

namespace relx {

namespace {

struct TypeInfo {
  EntityType type;
  std::string_view token;
  std::string_view marker;
};

constexpr std::array<TypeInfo, 8> kTypeInfo = {{
    {EntityType::kOrg, "org", "ORG"},
    {EntityType::kGpe, "gpe", "GPE"},
    {EntityType::kPerson, "pers", "PERS"},
    {EntityType::kTitle, "title", "TITLE"},
    {EntityType::kDate, "date", "DATE"},
    {EntityType::kMoney, "money", "MONEY"},
    {EntityType::kUniv, "univ", "UNIV"},
    {EntityType::kGovAgy, "gov_agy", "GOV_AGY"},
}};

const TypeInfo& info(EntityType type) {
  return kTypeInfo[static_cast<std::size_t>(type)];
}

}  // namespace

std::string_view canonical_token(EntityType type) { return info(type).token; }

std::string_view marker_form(EntityType type) { return info(type).marker; }

EntityType parse_entity_type(std::string_view token) {
  for (const auto& entry : kTypeInfo) {
    if (entry.token == token) return entry.type;
  }
  throw Error(ErrorCode::kUnknownToken,
              "unknown entity type token '" + std::string(token) + "'");
}

std::ostream& operator<<(std::ostream& os, EntityPair pair) {
  return os << marker_form(pair.first) << '-' << marker_form(pair.second);
}

std::optional<EntityPair> parse_label_signature(std::string_view name) {
  if (name == kNoRelation) return std::nullopt;
  const auto first = name.find(':');
  const auto second =
      first == std::string_view::npos ? first : name.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw Error(ErrorCode::kMalformed,
                "label '" + std::string(name) + "' is not of the form tok1:tok2:relation");
  }
  return EntityPair{parse_entity_type(name.substr(0, first)),
                    parse_entity_type(name.substr(first + 1, second - first - 1))};
}

RelationSchema::RelationSchema(const std::vector<std::string>& label_names,
                               const std::vector<EntityPair>& pairs)
    : pairs_(pairs) {
  for (const auto& pair : pairs_) {
    if (!pair_index_.emplace(pair, std::vector<LabelId>{}).second) {
      throw Error(ErrorCode::kMalformed, "duplicate entity pair in schema");
    }
  }
  for (std::size_t i = 0; i < label_names.size(); ++i) {
    RelationLabel label;
    label.index = static_cast<LabelId>(i);
    label.name = label_names[i];
    label.signature = parse_label_signature(label.name);
    if (!by_name_.emplace(label.name, label.index).second) {
      throw Error(ErrorCode::kMalformed, "duplicate label '" + label.name + "'");
    }
    if (label.signature) {
      auto it = pair_index_.find(*label.signature);
      if (it == pair_index_.end()) {
        throw Error(ErrorCode::kUnknownPair,
                    "label '" + label.name + "' has a signature outside the schema pairs");
      }
      it->second.push_back(label.index);
    } else {
      no_relation_ = label.index;
    }
    labels_.push_back(std::move(label));
  }
  if (no_relation_ < 0) {
    throw Error(ErrorCode::kMalformed, "schema has no no_relation label");
  }
  for (auto& [pair, ids] : pair_index_) {
    ids.push_back(no_relation_);
    std::sort(ids.begin(), ids.end());
  }

  std::string joined;
  for (const auto& label : labels_) {
    joined += label.name;
    joined += '\n';
  }
  unsigned int digest_len = 0;
  EVP_Digest(joined.data(), joined.size(), fingerprint_.data(), &digest_len,
             EVP_sha256(), nullptr);
}

const RelationLabel& RelationSchema::label(LabelId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= labels_.size()) {
    throw Error(ErrorCode::kValidation,
                "label index " + std::to_string(id) + " out of range");
  }
  return labels_[static_cast<std::size_t>(id)];
}

std::vector<std::string> RelationSchema::names() const {
  std::vector<std::string> out;
  out.reserve(labels_.size());
  for (const auto& label : labels_) out.push_back(label.name);
  return out;
}

std::optional<LabelId> RelationSchema::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

bool RelationSchema::has_pair(EntityPair pair) const {
  return pair_index_.count(pair) > 0;
}

const std::vector<LabelId>& RelationSchema::plausible_labels(EntityPair pair) const {
  auto it = pair_index_.find(pair);
  if (it == pair_index_.end()) {
    std::string text(marker_form(pair.first));
    text += '-';
    text += marker_form(pair.second);
    throw Error(ErrorCode::kUnknownPair, "unknown entity pair " + text);
  }
  return it->second;
}

bool RelationSchema::is_plausible(LabelId id, EntityType e1, EntityType e2) const {
  const EntityPair pair{e1, e2};
  if (!has_pair(pair)) plausible_labels(pair);  // throws kUnknownPair
  const auto& lbl = label(id);
  return !lbl.signature || *lbl.signature == pair;
}

RelationSchema build_default_schema() {
  using T = EntityType;
  // Row order of the REFind relation table, no_relation last.
  static const std::vector<std::string> kNames = {
      "org:org:agreement_with",  "org:org:subsidiary_of",
      "org:org:shares_of",       "org:org:acquired_by",
      "org:gpe:operations_in",   "org:gpe:headquartered_in",
      "org:gpe:formed_in",       "pers:title:title",
      "org:date:formed_on",      "org:date:acquired_on",
      "pers:org:employee_of",    "pers:org:member_of",
      "pers:org:founder_of",     "org:money:revenue_of",
      "org:money:loss_of",       "org:money:profit_of",
      "org:money:cost_of",       "pers:univ:employee_of",
      "pers:univ:attended",      "pers:univ:member_of",
      "pers:gov_agy:member_of",  "no_relation",
  };
  static const std::vector<EntityPair> kPairs = {
      {T::kOrg, T::kOrg},       {T::kOrg, T::kGpe},
      {T::kPerson, T::kTitle},  {T::kOrg, T::kDate},
      {T::kPerson, T::kOrg},    {T::kOrg, T::kMoney},
      {T::kPerson, T::kUniv},   {T::kPerson, T::kGovAgy},
  };
  return RelationSchema(kNames, kPairs);
}

const RelationSchema& default_schema() {
  static const RelationSchema schema = build_default_schema();
  return schema;
}

void dump_schema(std::ostream& os, const RelationSchema& schema) {
  for (const auto& label : schema.labels()) {
    os << label.index << '\t' << label.name << '\t';
    if (label.signature) {
      os << canonical_token(label.signature->first) << '\t'
         << canonical_token(label.signature->second);
    } else {
      os << "-\t-";
    }
    os << '\n';
  }
}

}  // namespace relx
