#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gicl/prompt.hpp"
#include "json.hpp"

namespace gicl {
namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(GICL_TEST_GOLDEN_DIR) + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

class PromptTest : public ::testing::Test {
 protected:
  PromptTest() : g_(testing::tiny_parts()), sel_(g_) {}

  PromptBundle nc(const std::string& code, NodeId anchor, RenderOptions opt = {}) {
    return render_nc(sel_, parse_code(code), anchor, 7, opt, pack_);
  }
  PromptBundle lp(const std::string& code, NodePair pair, RenderOptions opt = {}) {
    opt.budget = SelectionBudget::link_prediction();
    return render_lp(sel_, parse_code(code), pair, 7, opt, pack_);
  }

  TextAttributedGraph g_;
  Selector sel_;
  TemplatePack pack_;
};

TEST_F(PromptTest, NcZeroShotMatchesGolden) {
  const auto b = nc("XXXX", 20);
  EXPECT_EQ(b.user_text, golden("nc_xxxx_node20.txt"));
  EXPECT_EQ(b.system_text, testing::kTinyNcDescription);
  EXPECT_EQ(b.system_text.rfind("I'm starting a node classification task.", 0), 0u);
  EXPECT_EQ(b.audit.variant, TemplateVariant::NcZero);
}

TEST_F(PromptTest, LpZeroShotMatchesGolden) {
  const auto b = lp("XXXX", {18, 19});
  EXPECT_EQ(b.user_text, golden("lp_xxxx_18_19.txt"));
  EXPECT_EQ(b.system_text.rfind("I'm starting a link prediction task.", 0), 0u);
}

TEST_F(PromptTest, CotInsertsOneSentenceAtSlot) {
  RenderOptions opt;
  opt.cot = true;
  const auto n = nc("XXXX", 20, opt);
  EXPECT_EQ(n.user_text, golden("nc_xxxx_node20_cot.txt"));
  EXPECT_EQ(count_of(n.user_text, std::string(kDefaultCotSentence)), 1u);
  EXPECT_EQ(lp("XXXX", {18, 19}, opt).user_text, golden("lp_xxxx_18_19_cot.txt"));

  for (const auto& code : {"1SGR", "2'PXX", "XXCS", "2RXX"}) {
    const auto with = nc(code, 22, opt);
    const auto without = nc(code, 22);
    EXPECT_EQ(count_of(with.user_text, std::string(kDefaultCotSentence)), 1u) << code;
    EXPECT_EQ(count_of(without.user_text, std::string(kDefaultCotSentence)), 0u) << code;
    EXPECT_EQ(with.user_text.size(), without.user_text.size() + kDefaultCotSentence.size() + 1) << code;
  }
}

TEST_F(PromptTest, CustomCotSentence) {
  RenderOptions opt;
  opt.cot = true;
  opt.cot_sentence = "Think it through.";
  EXPECT_NE(nc("XXXX", 20, opt).user_text.find("information. Think it through.\n"), std::string::npos);
}

TEST_F(PromptTest, IsolatedAnchorDropsNeighbourBlock) {
  auto parts = testing::tiny_parts();
  std::erase_if(parts.edges, [](const NodePair& e) { return e.src == 20 || e.dst == 20; });
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const auto b = render_nc(sel, parse_code("1RGR"), 20, 0, {}, pack_);
  EXPECT_TRUE(b.audit.empty_neighbors);
  EXPECT_EQ(b.audit.variant, TemplateVariant::NcFew);
  EXPECT_EQ(b.user_text.find("neighbor"), std::string::npos);
  EXPECT_FALSE(b.audit.demos.empty());
}

TEST_F(PromptTest, ClassAwareExampleBlockInVocabularyOrder) {
  const auto b = nc("XXCR", 21);
  const auto demos = sel_.select_demos_class_aware(Strategy::Random, 7, {}, 21);
  ASSERT_EQ(demos.nodes.size(), 3u);
  std::string block;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& d = demos.nodes[i];
    if (i) block += "\n";
    block += "(" + std::to_string(i + 1) + ") " + g_.text(d.id) + " (Category: " + g_.label_name(d.label) + ")";
    EXPECT_EQ(d.label, i);
  }
  EXPECT_NE(b.user_text.find(block), std::string::npos) << b.user_text;
  EXPECT_EQ(b.audit.demos, demos.nodes);
}

TEST_F(PromptTest, PrimedNeighboursBecomeLabelledExamples) {
  // 29 touches train node 0 through the ring.
  const auto b = nc("1'SXX", 29);
  ASSERT_EQ(b.audit.neighbors.size(), 1u);
  EXPECT_EQ(b.audit.variant, TemplateVariant::NcFew);
  EXPECT_TRUE(b.audit.neighbors_labeled);
  for (const auto& n : b.audit.neighbors) {
    ASSERT_TRUE(n.label);
    EXPECT_NE(b.user_text.find(g_.text(n.id) + " (Category: " + g_.label_name(*n.label) + ")"), std::string::npos);
  }
}

TEST_F(PromptTest, DemosAvoidAnchorAndNeighboursAndRespectBudget) {
  for (const auto& code : enumerate_codes()) {
    for (NodeId anchor = 18; anchor < 30; ++anchor) {
      const auto b = render_nc(sel_, code, anchor, 3, {}, pack_);
      EXPECT_LE(b.audit.neighbors.size(), 6u);
      EXPECT_LE(b.audit.demos.size(), 6u);
      for (const auto& d : b.audit.demos) {
        EXPECT_NE(d.id, anchor);
        for (const auto& n : b.audit.neighbors) EXPECT_NE(d.id, n.id) << format_code(code);
      }
    }
  }
}

TEST_F(PromptTest, LpStructureUsesFirstNodeNeighbours) {
  auto parts = testing::tiny_parts();
  for (NodeId i = 2; i < 12; ++i) {
    if (i != 3) parts.edges.push_back({0, i});  // 0-1 and 0-3 already exist
  }
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  RenderOptions opt;
  opt.budget = SelectionBudget::link_prediction();
  const auto b = render_lp(sel, parse_code("1SXX"), {0, 20}, 0, opt, pack_);
  ASSERT_EQ(b.audit.neighbors.size(), 6u);
  const auto sel6 = sel.select_neighbors(0, 1, Strategy::Similarity, 6, 0, false);
  EXPECT_EQ(b.audit.neighbors, sel6.items);
  EXPECT_NE(b.user_text.find("For the first node: It has following neighbor papers at hop 1: (1) "), std::string::npos);
}

TEST_F(PromptTest, LpClassAwareGivesOneOfEach) {
  const auto b = lp("XXCR", {20, 21});
  ASSERT_EQ(b.audit.pair_demos.size(), 2u);
  EXPECT_TRUE(b.audit.pair_demos[0].connected);
  EXPECT_FALSE(b.audit.pair_demos[1].connected);
  EXPECT_NE(b.user_text.find(", Connected: Yes\n(2) "), std::string::npos);
  EXPECT_NE(b.user_text.find(", Connected: No"), std::string::npos);
}

TEST_F(PromptTest, LpGlobalDemosCappedAtThree) {
  for (const auto& code : {"XXGR", "XXGP", "XXGS", "2SGS"}) {
    EXPECT_LE(lp(code, {18, 19}).audit.pair_demos.size(), 3u) << code;
  }
}

TEST_F(PromptTest, LpRejectsPrimedCodes) {
  EXPECT_THROW(lp("1'RXX", {18, 19}), RenderError);
}

TEST_F(PromptTest, NcRequiresTestAnchor) {
  EXPECT_THROW(nc("XXXX", 3), RenderError);
  RenderOptions opt;
  opt.allow_any_split = true;
  EXPECT_NO_THROW(nc("XXXX", 3, opt));
}

TEST_F(PromptTest, LongTextTruncatedWithEllipsis) {
  auto parts = testing::tiny_parts();
  std::string long_text;
  for (int i = 0; i < 3000; ++i) long_text += "é";
  parts.texts[20] = long_text;
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const auto b = render_nc(sel, parse_code("XXXX"), 20, 0, {}, pack_);
  EXPECT_EQ(b.audit.truncated_fields, 1u);
  std::string want;
  for (int i = 0; i < 2047; ++i) want += "é";
  want += "…";
  EXPECT_NE(b.user_text.find("content: " + want + "."), std::string::npos);
}

TEST(TruncateUtf8, CountsCodePoints) {
  std::string s = "aé€😀b";
  EXPECT_FALSE(truncate_utf8(s, 5));
  EXPECT_TRUE(truncate_utf8(s, 4));
  EXPECT_EQ(s, "aé€…");
  std::string t = "abc";
  EXPECT_FALSE(truncate_utf8(t, 0));
  EXPECT_TRUE(truncate_utf8(t, 1));
  EXPECT_EQ(t, "…");
}

TEST_F(PromptTest, DigestCoversBothMessages) {
  const auto a = nc("XXXX", 20);
  const auto b = nc("XXXX", 21);
  EXPECT_EQ(a.audit.digest.size(), 64u);
  EXPECT_NE(a.audit.digest, b.audit.digest);
  EXPECT_EQ(a.audit.digest, nc("XXXX", 20).audit.digest);
}

TEST_F(PromptTest, BundleJsonCarriesAudit) {
  const auto j = nlohmann::json::parse(bundle_to_json(nc("1SGR", 20), g_));
  EXPECT_EQ(j.at("audit").at("code"), "1SGR");
  EXPECT_EQ(j.at("audit").at("template"), "nc_few_struct");
  EXPECT_EQ(j.at("audit").at("hop"), 1);
  EXPECT_TRUE(j.at("user").is_string());
}

TEST(Templates, SubstituteIsSinglePass) {
  const std::map<std::string, std::string, std::less<>> values{{"a", "{b}"}, {"b", "x"}};
  EXPECT_EQ(substitute("{a}-{b}-{c}", values), "{b}-x-{c}");
}

TEST(Templates, PlaceholdersValidated) {
  TemplatePack pack;
  EXPECT_THROW(pack.set(TemplateVariant::NcZero, "no placeholders"), TemplateError);
  EXPECT_THROW(pack.set(TemplateVariant::NcZero, "{cot}{target_text}{hop}"), TemplateError);
  EXPECT_NO_THROW(pack.set(TemplateVariant::NcZero, "Node: {target_text}{cot}"));
  for (const auto v : kAllVariants) {
    EXPECT_EQ(placeholders_in(TemplatePack().get(v)), required_placeholders(v)) << variant_name(v);
  }
}

TEST(Templates, SaveLoadRoundTripAndCustomPackRenders) {
  testing::TempDir tmp;
  TemplatePack().save(tmp.path());
  auto loaded = TemplatePack::load(tmp.path());
  for (const auto v : kAllVariants) EXPECT_EQ(loaded.get(v), TemplatePack().get(v));

  std::ofstream(tmp / "nc_zero.txt", std::ios::trunc) << "Classify{cot}: {target_text}\n";
  loaded = TemplatePack::load(tmp.path());
  const TextAttributedGraph g(testing::tiny_parts());
  const Selector sel(g);
  EXPECT_EQ(render_nc(sel, MethodCode{}, 20, 0, {}, loaded).user_text,
            "Classify: Paper 20: a study of inductive logic programming");

  std::filesystem::remove(tmp / "lp_few.txt");
  EXPECT_THROW(TemplatePack::load(tmp.path()), TemplateError);
}

}  // namespace
}  // namespace gicl
