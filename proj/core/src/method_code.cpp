#include "gicl/method_code.hpp"

namespace gicl {

namespace {

std::optional<Strategy> strategy_from(char c) {
  switch (c) {
    case 'R': return Strategy::Random;
    case 'P': return Strategy::PageRank;
    case 'S': return Strategy::Similarity;
    default: return std::nullopt;
  }
}

std::string quoted(std::string_view code) { return "'" + std::string(code) + "'"; }

}  // namespace

MethodCode parse_code(std::string_view code) {
  using Kind = CodeError::Kind;
  if (code.empty()) throw CodeError(Kind::Empty, "empty method code");

  MethodCode out;
  std::size_t pos = 0;
  auto need = [&](std::size_t n, const char* what) {
    if (code.size() < pos + n) {
      throw CodeError(Kind::Truncated, "method code " + quoted(code) + " is truncated: missing " + what);
    }
  };

  need(2, "structure part");
  if (code.substr(0, 2) == "XX") {
    pos = 2;
  } else {
    const char hop = code[0];
    if (hop != '1' && hop != '2') {
      throw CodeError(Kind::BadHop, "method code " + quoted(code) + ": hop must be 1 or 2, got '" +
                                        std::string(1, hop) + "'");
    }
    StructureSpec s;
    s.hop = hop - '0';
    pos = 1;
    if (code[pos] == '\'') {
      s.primed = true;
      ++pos;
    }
    need(1, "neighbour selection strategy");
    const auto strat = strategy_from(code[pos]);
    if (!strat) {
      throw CodeError(Kind::UnknownStrategy, "method code " + quoted(code) +
                                                 ": unknown neighbour selection strategy '" +
                                                 std::string(1, code[pos]) + "' (expected R, P or S)");
    }
    s.strategy = *strat;
    ++pos;
    out.structure = s;
  }

  need(2, "demonstration part");
  const auto demo = code.substr(pos, 2);
  if (demo != "XX") {
    DemoSpec d;
    if (demo[0] == 'G') {
      d.scope = DemoScope::Global;
    } else if (demo[0] == 'C') {
      d.scope = DemoScope::ClassAware;
    } else {
      throw CodeError(Kind::UnknownScope, "method code " + quoted(code) + ": unknown demonstration scope '" +
                                              std::string(1, demo[0]) + "' (expected G, C or XX)");
    }
    const auto strat = strategy_from(demo[1]);
    if (!strat) {
      throw CodeError(Kind::UnknownStrategy, "method code " + quoted(code) +
                                                 ": unknown demonstration selection strategy '" +
                                                 std::string(1, demo[1]) + "' (expected R, P or S)");
    }
    d.strategy = *strat;
    out.demo = d;
  }
  pos += 2;
  if (pos != code.size()) {
    throw CodeError(Kind::TrailingCharacters,
                    "method code " + quoted(code) + ": unexpected trailing characters '" +
                        std::string(code.substr(pos)) + "'");
  }
  if (out.primed() && out.demo) {
    throw CodeError(Kind::PrimedWithDemos, "method code " + quoted(code) +
                                               ": labelled-neighbour structures (1'/2') already act as "
                                               "demonstrations and must pair with XX");
  }
  return out;
}

std::string format_code(const MethodCode& code) {
  std::string out;
  if (code.structure) {
    out.push_back(static_cast<char>('0' + code.structure->hop));
    if (code.structure->primed) out.push_back('\'');
    out.push_back(strategy_letter(code.structure->strategy));
  } else {
    out += "XX";
  }
  if (code.demo) {
    out.push_back(code.demo->scope == DemoScope::Global ? 'G' : 'C');
    out.push_back(strategy_letter(code.demo->strategy));
  } else {
    out += "XX";
  }
  return out;
}

std::vector<MethodCode> enumerate_codes() {
  constexpr Strategy kStrategies[] = {Strategy::Random, Strategy::PageRank, Strategy::Similarity};

  std::vector<std::optional<StructureSpec>> structures{std::nullopt};
  for (int hop : {1, 2}) {
    for (auto s : kStrategies) structures.push_back(StructureSpec{hop, s, false});
  }
  std::vector<std::optional<DemoSpec>> demos{std::nullopt};
  for (auto scope : {DemoScope::Global, DemoScope::ClassAware}) {
    for (auto s : kStrategies) demos.push_back(DemoSpec{scope, s});
  }

  std::vector<MethodCode> out;
  out.reserve(55);
  for (const auto& st : structures) {
    for (const auto& d : demos) out.push_back({st, d});
  }
  for (int hop : {1, 2}) {
    for (auto s : kStrategies) out.push_back({StructureSpec{hop, s, true}, std::nullopt});
  }
  return out;
}

}  // namespace gicl
