#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ltlmcts::ltl {

enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Always,
};

// Immutable LTL expression tree. Nodes are shared; copying a Formula is a
// pointer copy. Every node caches its printed form, which doubles as the
// canonical key for equality and ordering.
class Formula {
 public:
  static Formula truth();
  static Formula falsity();
  static Formula atom(std::string name);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula next(Formula f);
  static Formula until(Formula lhs, Formula rhs);
  static Formula eventually(Formula f);
  static Formula always(Formula f);

  Op op() const;
  const std::string& name() const;
  std::span<const Formula> children() const;
  const Formula& child(std::size_t i) const;

  const std::string& key() const;
  std::size_t hash() const;

  bool is_true() const { return op() == Op::True; }
  bool is_false() const { return op() == Op::False; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, std::string name, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

std::string to_string(const Formula& f);

// Operator nesting depth; atoms and constants have depth 0.
std::size_t depth(const Formula& f);

// Sorted, de-duplicated atom names occurring in f.
std::vector<std::string> atoms_of(const Formula& f);

// Rewrites into the normal form used by progression and the monitor:
// `F a` -> `true U a`, `a -> b` -> `!a | b`, negations pushed inward where an
// operator dual exists, n-ary And/Or flattened, sorted, de-duplicated and
// constant-folded. Idempotent.
Formula normalize(const Formula& f);

// Smart constructors that preserve the normal form when given normalized
// arguments.
Formula make_not(const Formula& f);
Formula make_and(std::vector<Formula> fs);
Formula make_or(std::vector<Formula> fs);
Formula make_next(const Formula& f);
Formula make_until(const Formula& lhs, const Formula& rhs);
Formula make_always(const Formula& f);

}  // namespace ltlmcts::ltl
