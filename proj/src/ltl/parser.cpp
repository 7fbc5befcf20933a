#include "ltlmcts/ltl/parser.hpp"

#include <fstream>
#include <sstream>

namespace ltlmcts::ltl {

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Next, Until, Eventually, Always, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if ((c >= 'a' && c <= 'z') || c == '_') {
      while (i < s.size() && ((s[i] >= 'a' && s[i] <= 'z') || (s[i] >= '0' && s[i] <= '9') || s[i] == '_')) ++i;
      std::string word(s.substr(start, i - start));
      Tok kind = word == "true" ? Tok::True : word == "false" ? Tok::False : Tok::Ident;
      out.push_back({kind, std::move(word), start});
      continue;
    }
    switch (c) {
      case '!': out.push_back({Tok::Not, "!", start}); ++i; break;
      case '&': out.push_back({Tok::And, "&", start}); ++i; break;
      case '|': out.push_back({Tok::Or, "|", start}); ++i; break;
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case 'X': out.push_back({Tok::Next, "X", start}); ++i; break;
      case 'U': out.push_back({Tok::Until, "U", start}); ++i; break;
      case 'F': out.push_back({Tok::Eventually, "F", start}); ++i; break;
      case 'G': out.push_back({Tok::Always, "G", start}); ++i; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Implies, "->", start});
          i += 2;
          break;
        }
        throw ParseError("expected '->'", start);
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Alphabet& ap) : toks_(std::move(toks)), ap_(ap) {}

  Formula parse_all() {
    Formula f = implication();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  Token take() { return toks_[at_++]; }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Implies) {
      take();
      return Formula::implies(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (peek().kind == Tok::Or) {
      take();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts.front() : Formula::disjunction(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{until()};
    while (peek().kind == Tok::And) {
      take();
      parts.push_back(until());
    }
    return parts.size() == 1 ? parts.front() : Formula::conjunction(std::move(parts));
  }

  Formula until() {
    Formula lhs = unary();
    if (peek().kind == Tok::Until) {
      take();
      return Formula::until(lhs, until());
    }
    return lhs;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not: take(); return Formula::negation(unary());
      case Tok::Next: take(); return Formula::next(unary());
      case Tok::Eventually: take(); return Formula::eventually(unary());
      case Tok::Always: take(); return Formula::always(unary());
      default: return primary();
    }
  }

  Formula primary() {
    Token t = take();
    switch (t.kind) {
      case Tok::True: return Formula::truth();
      case Tok::False: return Formula::falsity();
      case Tok::Ident:
        if (!ap_.contains(t.text)) throw UnknownAtomError(t.text);
        return Formula::atom(t.text);
      case Tok::LParen: {
        Formula inner = implication();
        if (peek().kind != Tok::RParen) throw ParseError("expected ')'", peek().pos);
        take();
        return inner;
      }
      case Tok::End: throw ParseError("unexpected end of input", t.pos);
      default: throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  const Alphabet& ap_;
  std::size_t at_ = 0;
};

}  // namespace

Formula parse_raw(std::string_view text, const Alphabet& alphabet) {
  return Parser(tokenize(text), alphabet).parse_all();
}

Formula parse(std::string_view text, const Alphabet& alphabet) {
  return normalize(parse_raw(text, alphabet));
}

std::vector<NamedFormula> parse_specification(std::string_view text, const Alphabet& alphabet) {
  std::vector<NamedFormula> out;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    const std::size_t line_start = offset;
    offset = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;

    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'name: formula'", line_start);
    std::string_view name = line.substr(first, colon - first);
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.remove_suffix(1);
    if (name.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty formula name", line_start);

    try {
      out.push_back({std::string(name), parse(line.substr(colon + 1), alphabet)});
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.detail(),
                       line_start + colon + 1 + e.position());
    }
  }
  return out;
}

std::vector<NamedFormula> load_specification(const std::filesystem::path& path, const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open specification file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_specification(ss.str(), alphabet);
}

}  // namespace ltlmcts::ltl
