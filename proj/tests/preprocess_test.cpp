#include "relx/preprocess.hpp"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "synthetic.hpp"
#include "thrown.hpp"

namespace relx {
namespace {

using T = EntityType;
using testing::thrown_code;

Instance ceo() {
  Instance inst;
  inst.id = "ceo";
  inst.text = "John Doe is the CEO of Company A.";
  inst.e1 = {0, 8, T::kPerson, "John Doe"};
  inst.e2 = {23, 32, T::kOrg, "Company A"};
  return inst;
}

TEST(InsertMarkersTest, PrintedExamples) {
  EXPECT_EQ(insert_markers(ceo(), MarkerStrategy::kPreEntity).text,
            "PERS John Doe is the CEO of ORG Company A.");
  EXPECT_EQ(insert_markers(ceo(), MarkerStrategy::kWrapEntity).text,
            "PERS John Doe PERS is the CEO of ORG Company A ORG.");
  EXPECT_EQ(insert_markers(ceo(), MarkerStrategy::kPairPrefix).text,
            "<PERS-ORG> John Doe is the CEO of Company A.");
}

TEST(InsertMarkersTest, InsertionCountsAndProvenance) {
  const auto pre = insert_markers(ceo(), MarkerStrategy::kPreEntity);
  ASSERT_EQ(pre.inserted.size(), 2u);
  EXPECT_EQ(pre.inserted[0], (Insertion{0, "PERS "}));
  EXPECT_EQ(pre.inserted[1], (Insertion{28, "ORG "}));
  EXPECT_EQ(pre.source_id, "ceo");
  EXPECT_EQ(insert_markers(ceo(), MarkerStrategy::kWrapEntity).inserted.size(), 4u);
  const auto prefix = insert_markers(ceo(), MarkerStrategy::kPairPrefix);
  ASSERT_EQ(prefix.inserted.size(), 1u);
  EXPECT_EQ(prefix.inserted[0], (Insertion{0, "<PERS-ORG> "}));
}

TEST(InsertMarkersTest, RoleOrderNotTextOrderForPairPrefix) {
  Instance inst;
  inst.id = "r";
  inst.text = "Acme Corp hired Jane Roe.";
  inst.e1 = {16, 24, T::kPerson, "Jane Roe"};
  inst.e2 = {0, 9, T::kOrg, "Acme Corp"};
  EXPECT_EQ(insert_markers(inst, MarkerStrategy::kPairPrefix).text,
            "<PERS-ORG> Acme Corp hired Jane Roe.");
  EXPECT_EQ(insert_markers(inst, MarkerStrategy::kPreEntity).text,
            "ORG Acme Corp hired PERS Jane Roe.");
}

TEST(InsertMarkersTest, AdjacentSpans) {
  Instance inst;
  inst.id = "adj";
  inst.text = "JohnAcme";
  inst.e1 = {0, 4, T::kPerson, "John"};
  inst.e2 = {4, 8, T::kOrg, "Acme"};
  EXPECT_EQ(insert_markers(inst, MarkerStrategy::kPreEntity).text, "PERS JohnORG Acme");
  const auto wrap = insert_markers(inst, MarkerStrategy::kWrapEntity);
  EXPECT_EQ(wrap.text, "PERS John PERSORG Acme ORG");
  EXPECT_EQ(strip_markers(wrap), inst.text);
}

TEST(InsertMarkersTest, NestedSpansNestMarkers) {
  Instance inst;
  inst.id = "n";
  inst.text = "Texas Instruments grew.";
  inst.e1 = {0, 5, T::kPerson, "Texas"};
  inst.e2 = {0, 17, T::kOrg, "Texas Instruments"};
  // The longer span opens first and closes last.
  EXPECT_EQ(insert_markers(inst, MarkerStrategy::kPreEntity).text,
            "ORG PERS Texas Instruments grew.");
  EXPECT_EQ(insert_markers(inst, MarkerStrategy::kWrapEntity).text,
            "ORG PERS Texas PERS Instruments ORG grew.");

  inst.e1 = {6, 17, T::kPerson, "Instruments"};
  EXPECT_EQ(insert_markers(inst, MarkerStrategy::kWrapEntity).text,
            "ORG Texas PERS Instruments PERS ORG grew.");

  // Identical spans: e1 is treated as the outer one.
  inst.e1 = {0, 17, T::kPerson, "Texas Instruments"};
  EXPECT_EQ(insert_markers(inst, MarkerStrategy::kWrapEntity).text,
            "PERS ORG Texas Instruments ORG PERS grew.");
}

TEST(InsertMarkersTest, MultibyteOffsets) {
  Instance inst;
  inst.id = "u";
  inst.text = "Zürich AG hired Jörg.";
  inst.e1 = {16, 20, T::kPerson, "Jörg"};
  inst.e2 = {0, 9, T::kOrg, "Zürich AG"};
  const auto marked = insert_markers(inst, MarkerStrategy::kWrapEntity);
  EXPECT_EQ(marked.text, "ORG Zürich AG ORG hired PERS Jörg PERS.");
  EXPECT_EQ(strip_markers(marked), inst.text);
}

TEST(StripMarkersTest, LiteralMarkerWordsStillRoundTrip) {
  Instance inst;
  inst.id = "lit";
  inst.text = "ORG ORG PERS <PERS-ORG> ORG";
  inst.e1 = {8, 12, T::kPerson, "PERS"};
  inst.e2 = {0, 3, T::kOrg, "ORG"};
  for (MarkerStrategy s : kAllStrategies) {
    EXPECT_EQ(strip_markers(insert_markers(inst, s)), inst.text) << strategy_name(s);
  }
}

TEST(StripMarkersTest, EditedSiteIsCorruptProvenance) {
  auto marked = insert_markers(ceo(), MarkerStrategy::kPreEntity);
  marked.text.replace(0, 4, "ORG ");
  EXPECT_EQ(thrown_code([&] { strip_markers(marked); }), ErrorCode::kCorruptProvenance);

  auto shortened = insert_markers(ceo(), MarkerStrategy::kWrapEntity);
  shortened.text.resize(10);
  EXPECT_EQ(thrown_code([&] { strip_markers(shortened); }), ErrorCode::kCorruptProvenance);
}

TEST(StripMarkersTest, RandomRoundTripAndLengthAccounting) {
  std::mt19937_64 rng(2024);
  const auto& schema = default_schema();
  for (int i = 0; i < 500; ++i) {
    const auto inst = testing::random_instance(schema, rng, "r" + std::to_string(i));
    ASSERT_NO_THROW(validate_instance(inst, schema)) << inst.text;
    for (MarkerStrategy s : kAllStrategies) {
      const auto marked = insert_markers(inst, s);
      std::size_t added = 0;
      for (const auto& ins : marked.inserted) added += ins.marker.size();
      EXPECT_EQ(marked.text.size(), inst.text.size() + added);
      EXPECT_EQ(strip_markers(marked), inst.text);
    }
    const auto prefix = insert_markers(inst, MarkerStrategy::kPairPrefix);
    const std::size_t head = prefix.inserted[0].marker.size();
    EXPECT_EQ(prefix.text.substr(head), inst.text);
  }
}

TEST(PreprocessCorpusTest, OrderAndPerInstanceTypes) {
  EXPECT_TRUE(preprocess_corpus({}, MarkerStrategy::kPreEntity).empty());

  Instance other;
  other.id = "date";
  other.text = "Acme Corp was founded in 2008.";
  other.e1 = {0, 9, T::kOrg, "Acme Corp"};
  other.e2 = {25, 29, T::kDate, "2008"};
  const std::vector<Instance> corpus = {ceo(), other};
  for (std::size_t jobs : {1u, 2u}) {
    const auto out = preprocess_corpus(corpus, MarkerStrategy::kPairPrefix, jobs);
    ASSERT_EQ(out.size(), 2u);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      EXPECT_EQ(out[i], insert_markers(corpus[i], MarkerStrategy::kPairPrefix));
    }
    EXPECT_EQ(out[1].text, "<ORG-DATE> Acme Corp was founded in 2008.");
  }
}

TEST(MarkedFileTest, WriteRead) {
  const std::vector<MarkedText> marked = {insert_markers(ceo(), MarkerStrategy::kWrapEntity)};
  std::stringstream io;
  write_marked(io, marked);
  EXPECT_EQ(io.str(), "ceo\twrap_entity\tPERS John Doe PERS is the CEO of ORG Company A ORG.\n");
  const auto back = read_marked(io);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].text, marked[0].text);
  EXPECT_EQ(back[0].strategy, MarkerStrategy::kWrapEntity);

  std::istringstream bad("x\tnope\ttext\n");
  EXPECT_EQ(thrown_code([&] { read_marked(bad); }), ErrorCode::kParse);
}

TEST(StrategyTest, NamesRoundTrip) {
  for (MarkerStrategy s : kAllStrategies) EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  EXPECT_EQ(thrown_code([] { parse_strategy("wrap"); }), ErrorCode::kValidation);
}

}  // namespace
}  // namespace relx
