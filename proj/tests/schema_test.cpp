#include "relx/schema.hpp"

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "relx/error.hpp"
#include "thrown.hpp"

namespace relx {
namespace {

using T = EntityType;
using testing::thrown_code;

std::set<std::string> names_of(const RelationSchema& schema, EntityPair pair) {
  std::set<std::string> out;
  for (LabelId id : schema.plausible_labels(pair)) out.insert(schema.name(id));
  return out;
}

TEST(EntityTypeTest, TokensAreDistinctAndRoundTrip) {
  std::set<std::string_view> tokens, markers;
  for (EntityType t : kAllEntityTypes) {
    tokens.insert(canonical_token(t));
    markers.insert(marker_form(t));
    EXPECT_EQ(parse_entity_type(canonical_token(t)), t);
  }
  EXPECT_EQ(tokens.size(), 8u);
  EXPECT_EQ(markers.size(), 8u);
  EXPECT_EQ(marker_form(T::kPerson), "PERS");
  EXPECT_EQ(canonical_token(T::kGovAgy), "gov_agy");
  EXPECT_EQ(thrown_code([] { parse_entity_type("ORG"); }), ErrorCode::kUnknownToken);
}

TEST(SchemaTest, DefaultHas22LabelsWithNoRelationLast) {
  const auto schema = build_default_schema();
  ASSERT_EQ(schema.size(), 22u);
  EXPECT_EQ(schema.no_relation(), 21);
  EXPECT_EQ(schema.name(21), "no_relation");
  EXPECT_EQ(schema.name(0), "org:org:agreement_with");
  EXPECT_EQ(schema.name(20), "pers:gov_agy:member_of");
  for (std::size_t i = 0; i < schema.size(); ++i) {
    EXPECT_EQ(schema.labels()[i].index, static_cast<LabelId>(i));
    EXPECT_EQ(schema.find(schema.name(static_cast<LabelId>(i))), static_cast<LabelId>(i));
  }
}

TEST(SchemaTest, PairIndexMatchesRelationTable) {
  const auto schema = build_default_schema();
  EXPECT_EQ(names_of(schema, {T::kOrg, T::kOrg}),
            (std::set<std::string>{"org:org:agreement_with", "org:org:subsidiary_of",
                                   "org:org:shares_of", "org:org:acquired_by", "no_relation"}));
  EXPECT_EQ(names_of(schema, {T::kPerson, T::kGovAgy}),
            (std::set<std::string>{"pers:gov_agy:member_of", "no_relation"}));

  const std::vector<std::pair<EntityPair, std::size_t>> expected = {
      {{T::kOrg, T::kOrg}, 4},       {{T::kOrg, T::kGpe}, 3},
      {{T::kPerson, T::kTitle}, 1},  {{T::kOrg, T::kDate}, 2},
      {{T::kPerson, T::kOrg}, 3},    {{T::kOrg, T::kMoney}, 4},
      {{T::kPerson, T::kUniv}, 3},   {{T::kPerson, T::kGovAgy}, 1},
  };
  ASSERT_EQ(schema.pair_index().size(), 8u);
  std::size_t total = 0;
  for (const auto& [pair, named] : expected) {
    EXPECT_EQ(schema.plausible_labels(pair).size(), named + 1) << pair;
    total += schema.plausible_labels(pair).size();
  }
  EXPECT_EQ(total, 21u + 8u);
}

TEST(SchemaTest, DeterministicConstruction) {
  const auto a = build_default_schema();
  const auto b = build_default_schema();
  EXPECT_EQ(a.names(), b.names());
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
}

TEST(LabelSignatureTest, ParsesNames) {
  EXPECT_EQ(parse_label_signature("org:gpe:operations_in"), (EntityPair{T::kOrg, T::kGpe}));
  EXPECT_EQ(parse_label_signature("pers:univ:attended"), (EntityPair{T::kPerson, T::kUniv}));
  EXPECT_EQ(parse_label_signature("no_relation"), std::nullopt);
  EXPECT_EQ(thrown_code([] { parse_label_signature("org:gpe"); }), ErrorCode::kMalformed);
  EXPECT_EQ(thrown_code([] { parse_label_signature("relation"); }), ErrorCode::kMalformed);
  EXPECT_EQ(thrown_code([] { parse_label_signature("corp:gpe:x"); }), ErrorCode::kUnknownToken);
}

TEST(PlausibilityTest, Examples) {
  const auto& schema = default_schema();
  const LabelId acquired_by = *schema.find("org:org:acquired_by");
  EXPECT_TRUE(schema.is_plausible(acquired_by, T::kOrg, T::kOrg));
  EXPECT_FALSE(schema.is_plausible(acquired_by, T::kOrg, T::kDate));
  EXPECT_TRUE(schema.is_plausible(schema.no_relation(), T::kPerson, T::kTitle));
}

TEST(PlausibilityTest, UnknownPairIsAnError) {
  const auto& schema = default_schema();
  EXPECT_EQ(thrown_code([&] { schema.is_plausible(0, T::kOrg, T::kPerson); }), ErrorCode::kUnknownPair);
  EXPECT_EQ(thrown_code([&] { schema.is_plausible(schema.no_relation(), T::kDate, T::kOrg); }),
            ErrorCode::kUnknownPair);
}

TEST(PlausibilityTest, AgreesWithSignatureParsingExhaustively) {
  const auto& schema = default_schema();
  for (const auto& pair : schema.pairs()) {
    for (const auto& label : schema.labels()) {
      const auto sig = parse_label_signature(label.name);
      EXPECT_EQ(schema.is_plausible(label.index, pair.first, pair.second), !sig || *sig == pair);
    }
  }
}

TEST(SchemaTest, CustomOntologyThroughSameConstructor) {
  const RelationSchema schema({"org:gpe:located_in", "no_relation"}, {{T::kOrg, T::kGpe}});
  EXPECT_EQ(schema.size(), 2u);
  EXPECT_EQ(schema.no_relation(), 1);
  EXPECT_NE(schema.fingerprint(), default_schema().fingerprint());
  EXPECT_EQ(thrown_code([] { RelationSchema({"org:gpe:x"}, {{T::kOrg, T::kGpe}}); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(thrown_code([] { RelationSchema({"org:date:x", "no_relation"}, {{T::kOrg, T::kGpe}}); }),
            ErrorCode::kUnknownPair);
}

TEST(SchemaTest, DumpHasOneLinePerLabel) {
  std::ostringstream os;
  dump_schema(os, default_schema());
  std::istringstream in(os.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 22u);
  EXPECT_EQ(lines[4], "4\torg:gpe:operations_in\torg\tgpe");
  EXPECT_EQ(lines[21], "21\tno_relation\t-\t-");
}

}  // namespace
}  // namespace relx
