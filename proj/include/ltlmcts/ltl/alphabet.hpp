#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ltlmcts::ltl {

// The set of atoms true at one step, as a bitmask over an Alphabet's indices.
struct Label {
  std::uint32_t bits = 0;

  bool has(std::size_t index) const { return (bits >> index) & 1u; }
  void set(std::size_t index, bool value = true) {
    if (value)
      bits |= (1u << index);
    else
      bits &= ~(1u << index);
  }
  friend bool operator==(const Label&, const Label&) = default;
};

// Ordered set of atomic proposition names. Order fixes bit positions in Label.
class Alphabet {
 public:
  static constexpr std::size_t kMaxAtoms = 32;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);
  Alphabet(std::initializer_list<std::string_view> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  Label label(std::initializer_list<std::string_view> true_atoms) const;
  Label label(const std::vector<std::string>& true_atoms) const;
  std::vector<std::string> names_of(Label l) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

bool is_valid_atom_name(std::string_view name);

}  // namespace ltlmcts::ltl
