#include <set>

#include <gtest/gtest.h>

#include "gicl/method_code.hpp"

namespace gicl {
namespace {

using Kind = CodeError::Kind;

TEST(MethodCode, ParsesStructureAndDemoParts) {
  const auto c = parse_code("1RGP");
  ASSERT_TRUE(c.structure);
  EXPECT_EQ(c.structure->hop, 1);
  EXPECT_EQ(c.structure->strategy, Strategy::Random);
  EXPECT_FALSE(c.structure->primed);
  ASSERT_TRUE(c.demo);
  EXPECT_EQ(c.demo->scope, DemoScope::Global);
  EXPECT_EQ(c.demo->strategy, Strategy::PageRank);
}

TEST(MethodCode, NoStructureGlobalRandom) {
  const auto c = parse_code("XXGR");
  EXPECT_FALSE(c.structure);
  ASSERT_TRUE(c.demo);
  EXPECT_EQ(c.demo->strategy, Strategy::Random);
  EXPECT_TRUE(c.few_shot());
}

TEST(MethodCode, PrimedStructure) {
  const auto c = parse_code("2'SXX");
  ASSERT_TRUE(c.structure);
  EXPECT_TRUE(c.primed());
  EXPECT_TRUE(c.few_shot());
  EXPECT_EQ(c.structure->hop, 2);
  EXPECT_FALSE(c.demo);
}

TEST(MethodCode, FormatRoundTrip) {
  EXPECT_EQ(format_code(parse_code("2SCP")), "2SCP");
  EXPECT_EQ(format_code(MethodCode{}), "XXXX");
  EXPECT_FALSE(MethodCode{}.few_shot());
}

TEST(MethodCode, EnumerationIsCompleteAndRoundTrips) {
  const auto codes = enumerate_codes();
  ASSERT_EQ(codes.size(), 55u);
  std::set<std::string> seen;
  std::size_t primed = 0;
  for (const auto& c : codes) {
    const auto s = format_code(c);
    EXPECT_TRUE(seen.insert(s).second) << s;
    EXPECT_EQ(parse_code(s), c) << s;
    primed += c.primed() ? 1 : 0;
  }
  EXPECT_EQ(primed, 6u);
  EXPECT_EQ(format_code(codes.front()), "XXXX");
}

TEST(MethodCode, EnumerationMatchesGrammarExhaustively) {
  // Every string over the code alphabet up to length 5 that parses must be
  // one of the enumerated codes, and vice versa.
  const std::string alphabet = "X12'RPSGC";
  std::set<std::string> parsed;
  std::string s;
  auto visit = [&](auto&& self, std::size_t len) -> void {
    if (s.size() == len) {
      try {
        parsed.insert(format_code(parse_code(s)));
        EXPECT_EQ(format_code(parse_code(s)), s);
      } catch (const CodeError&) {
      }
      return;
    }
    for (char c : alphabet) {
      s.push_back(c);
      self(self, len);
      s.pop_back();
    }
  };
  for (std::size_t len = 1; len <= 5; ++len) visit(visit, len);
  std::set<std::string> enumerated;
  for (const auto& c : enumerate_codes()) enumerated.insert(format_code(c));
  EXPECT_EQ(parsed, enumerated);
}

struct Bad {
  const char* code;
  Kind kind;
};

TEST(MethodCode, RejectsMalformedWithKinds) {
  const Bad cases[] = {
      {"", Kind::Empty},
      {"1'SGR", Kind::PrimedWithDemos},
      {"3RGP", Kind::BadHop},
      {"1RXG", Kind::UnknownScope},
      {"1QGR", Kind::UnknownStrategy},
      {"1RGQ", Kind::UnknownStrategy},
      {"1R", Kind::Truncated},
      {"XXGRX", Kind::TrailingCharacters},
      {"xxxx", Kind::BadHop},
      {"2'", Kind::Truncated},
  };
  std::set<std::string> messages;
  for (const auto& b : cases) {
    try {
      (void)parse_code(b.code);
      ADD_FAILURE() << "accepted '" << b.code << "'";
    } catch (const CodeError& e) {
      EXPECT_EQ(e.kind(), b.kind) << b.code;
      messages.insert(e.what());
    }
  }
  EXPECT_EQ(messages.size(), std::size(cases));
}

}  // namespace
}  // namespace gicl
