#ifndef RELX_SCHEMA_HPP
#define RELX_SCHEMA_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace relx {

enum class EntityType : std::uint8_t {
  kOrg,
  kGpe,
  kPerson,
  kTitle,
  kDate,
  kMoney,
  kUniv,
  kGovAgy,
};

inline constexpr std::array<EntityType, 8> kAllEntityTypes = {
    EntityType::kOrg,  EntityType::kGpe,   EntityType::kPerson,
    EntityType::kTitle, EntityType::kDate, EntityType::kMoney,
    EntityType::kUniv, EntityType::kGovAgy,
};

// Lowercase token used in label names and corpus records ("pers", "gov_agy").
std::string_view canonical_token(EntityType type);
// Uppercase token inserted into text as an entity marker ("PERS", "GOV_AGY").
std::string_view marker_form(EntityType type);
// Inverse of canonical_token. Throws Error(kUnknownToken).
EntityType parse_entity_type(std::string_view token);

// Ordered (e1, e2) type pair; direction matters.
struct EntityPair {
  EntityType first;
  EntityType second;

  auto operator<=>(const EntityPair&) const = default;
};

std::ostream& operator<<(std::ostream& os, EntityPair pair);

using LabelId = int;

struct RelationLabel {
  LabelId index = 0;
  std::string name;
  // Absent exactly for no_relation.
  std::optional<EntityPair> signature;
};

inline constexpr std::string_view kNoRelation = "no_relation";

// Signature encoded in a label name: "org:gpe:operations_in" -> (ORG, GPE);
// "no_relation" -> nullopt. Throws Error(kMalformed) when the name has fewer
// than two ':' separators, Error(kUnknownToken) for an unknown type token.
std::optional<EntityPair> parse_label_signature(std::string_view name);

using SchemaFingerprint = std::array<std::uint8_t, 32>;

// Fixed relation ontology: ordered labels plus, for each known entity pair,
// the label indices plausible for it. Immutable once built.
class RelationSchema {
 public:
  // `label_names` fixes the index order and must contain "no_relation"
  // exactly once. Each signatured label's pair must be in `pairs`.
  RelationSchema(const std::vector<std::string>& label_names,
                 const std::vector<EntityPair>& pairs);

  std::size_t size() const { return labels_.size(); }
  const std::vector<RelationLabel>& labels() const { return labels_; }
  const RelationLabel& label(LabelId id) const;
  const std::string& name(LabelId id) const { return label(id).name; }
  std::vector<std::string> names() const;
  std::optional<LabelId> find(std::string_view name) const;
  LabelId no_relation() const { return no_relation_; }

  const std::vector<EntityPair>& pairs() const { return pairs_; }
  bool has_pair(EntityPair pair) const;
  // Plausible label indices for the pair in ascending order (no_relation
  // included). Throws Error(kUnknownPair).
  const std::vector<LabelId>& plausible_labels(EntityPair pair) const;
  const std::map<EntityPair, std::vector<LabelId>>& pair_index() const {
    return pair_index_;
  }

  // True iff the label is no_relation or its signature equals (e1, e2).
  // Throws Error(kUnknownPair) for a pair outside the ontology.
  bool is_plausible(LabelId id, EntityType e1, EntityType e2) const;

  // SHA-256 over the label names in index order.
  const SchemaFingerprint& fingerprint() const { return fingerprint_; }

 private:
  std::vector<RelationLabel> labels_;
  std::vector<EntityPair> pairs_;
  std::map<EntityPair, std::vector<LabelId>> pair_index_;
  std::map<std::string, LabelId, std::less<>> by_name_;
  LabelId no_relation_ = -1;
  SchemaFingerprint fingerprint_{};
};

// The 8 pairs and 22 outcome groups of the REFind ontology; no_relation is
// the last label (index 21).
const RelationSchema& default_schema();
RelationSchema build_default_schema();

// One line per label: index, name, tok1, tok2 (tab separated; "-" for the
// types of no_relation).
void dump_schema(std::ostream& os, const RelationSchema& schema);

}  // namespace relx

#endif  // RELX_SCHEMA_HPP
