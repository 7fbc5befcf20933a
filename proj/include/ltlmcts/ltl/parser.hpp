#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltlmcts/ltl/alphabet.hpp"
#include "ltlmcts/ltl/formula.hpp"

namespace ltlmcts::ltl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& detail, std::size_t position)
      : std::runtime_error(detail + " at position " + std::to_string(position)),
        detail_(detail),
        position_(position) {}
  const std::string& detail() const { return detail_; }
  std::size_t position() const { return position_; }

 private:
  std::string detail_;
  std::size_t position_;
};

class UnknownAtomError : public std::runtime_error {
 public:
  explicit UnknownAtomError(const std::string& atom)
      : std::runtime_error("unknown atom '" + atom + "'"), atom_(atom) {}
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

// Concrete syntax, tightest first: unary `!` `X` `F` `G`; `U` (right-assoc);
// `&`; `|`; `->` (right-assoc). Constants `true` / `false`.
Formula parse_raw(std::string_view text, const Alphabet& alphabet);

// parse_raw followed by normalize.
Formula parse(std::string_view text, const Alphabet& alphabet);

struct NamedFormula {
  std::string name;
  Formula formula;
};

// One `name: <formula>` per line; blank lines and `#` comments are skipped.
std::vector<NamedFormula> parse_specification(std::string_view text, const Alphabet& alphabet);
std::vector<NamedFormula> load_specification(const std::filesystem::path& path,
                                             const Alphabet& alphabet);

}  // namespace ltlmcts::ltl
