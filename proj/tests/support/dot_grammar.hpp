#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace testing_support {

// Recursive-descent reader for the DOT subset: a strict/non-strict digraph or
// graph of node and edge statements with attribute lists. Anything outside the
// grammar throws.
struct DotGraph {
  bool directed = false;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
};

class DotReader {
 public:
  explicit DotReader(std::string text) : s_(std::move(text)) {}

  DotGraph parse() {
    DotGraph g;
    auto kw = id();
    if (kw == "strict") kw = id();
    if (kw == "digraph") {
      g.directed = true;
    } else if (kw != "graph") {
      fail("expected graph or digraph");
    }
    skip();
    if (peek() != '{') id();
    expect('{');
    while (true) {
      skip();
      if (peek() == '}') break;
      statement(g);
    }
    expect('}');
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return g;
  }

 private:
  void statement(DotGraph& g) {
    const auto a = id();
    skip();
    if (peek() == '-') {
      expect('-');
      const char arrow = get();
      if ((g.directed && arrow != '>') || (!g.directed && arrow != '-')) fail("wrong edge operator");
      const auto b = id();
      g.nodes[a];
      g.nodes[b];
      g.edges.emplace_back(a, b);
      attributes();
    } else {
      auto& attrs = g.nodes[a];
      for (auto& [k, v] : attributes()) attrs[k] = v;
    }
    skip();
    if (peek() == ';') ++pos_;
  }

  std::vector<std::pair<std::string, std::string>> attributes() {
    std::vector<std::pair<std::string, std::string>> out;
    skip();
    if (peek() != '[') return out;
    ++pos_;
    while (true) {
      skip();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      const auto k = id();
      expect('=');
      out.emplace_back(k, id());
      skip();
      if (peek() == ',' || peek() == ';') ++pos_;
    }
  }

  std::string id() {
    skip();
    std::string out;
    if (peek() == '"') {
      ++pos_;
      while (peek() != '"') {
        if (pos_ >= s_.size()) fail("unterminated string");
        if (peek() == '\\') out += get();
        out += get();
      }
      ++pos_;
      return out;
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') out += get();
      return out;
    }
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '-' || peek() == '.') {
      if (peek() == '-') out += get();
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') out += get();
      if (out.empty() || out == "-") fail("bad numeral");
      return out;
    }
    fail("expected identifier");
    return out;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  void expect(char c) {
    skip();
    if (get() != c) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("DOT parse error at " + std::to_string(pos_) + ": " + what);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace testing_support
