#include "ltlmcts/ltl/alphabet.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltlmcts::ltl {

bool is_valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  auto lower_or_us = [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; };
  if (!lower_or_us(name.front())) return false;
  if (name == "true" || name == "false") return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char c) { return lower_or_us(c) || (c >= '0' && c <= '9'); });
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxAtoms) throw std::invalid_argument("alphabet exceeds 32 atoms");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!is_valid_atom_name(names_[i]))
      throw std::invalid_argument("invalid atom name '" + names_[i] + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[j] == names_[i]) throw std::invalid_argument("duplicate atom '" + names_[i] + "'");
    }
  }
}

Alphabet::Alphabet(std::initializer_list<std::string_view> names)
    : Alphabet(std::vector<std::string>(names.begin(), names.end())) {}

std::optional<std::size_t> Alphabet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

Label Alphabet::label(std::initializer_list<std::string_view> true_atoms) const {
  Label l;
  for (auto name : true_atoms) {
    auto idx = index_of(name);
    if (!idx) throw std::invalid_argument("atom '" + std::string(name) + "' not in alphabet");
    l.set(*idx);
  }
  return l;
}

Label Alphabet::label(const std::vector<std::string>& true_atoms) const {
  Label l;
  for (const auto& name : true_atoms) {
    auto idx = index_of(name);
    if (!idx) throw std::invalid_argument("atom '" + name + "' not in alphabet");
    l.set(*idx);
  }
  return l;
}

std::vector<std::string> Alphabet::names_of(Label l) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (l.has(i)) out.push_back(names_[i]);
  }
  return out;
}

}  // namespace ltlmcts::ltl
