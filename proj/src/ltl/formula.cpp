#include "ltlmcts/ltl/formula.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace ltlmcts::ltl {

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Formula> children;
  std::string key;
  std::size_t hash;
};

namespace {

std::string render(Op op, const std::string& name, const std::vector<Formula>& cs) {
  auto join = [&](const char* sep) {
    if (cs.empty()) return std::string(op == Op::And ? "true" : "false");
    std::string out = "(";
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (i) out += sep;
      out += cs[i].key();
    }
    return out + ")";
  };
  switch (op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return name;
    case Op::Not: return "!" + cs[0].key();
    case Op::And: return join(" & ");
    case Op::Or: return join(" | ");
    case Op::Implies: return "(" + cs[0].key() + " -> " + cs[1].key() + ")";
    case Op::Next: return "X " + cs[0].key();
    case Op::Until: return "(" + cs[0].key() + " U " + cs[1].key() + ")";
    case Op::Eventually: return "F " + cs[0].key();
    case Op::Always: return "G " + cs[0].key();
  }
  return {};
}

}  // namespace

Formula Formula::make(Op op, std::string name, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->name = std::move(name);
  node->children = std::move(children);
  node->key = render(op, node->name, node->children);
  node->hash = std::hash<std::string>{}(node->key);
  return Formula(std::move(node));
}

Formula Formula::truth() {
  static const Formula t = make(Op::True, {}, {});
  return t;
}

Formula Formula::falsity() {
  static const Formula f = make(Op::False, {}, {});
  return f;
}

Formula Formula::atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("atom name must be nonempty");
  return make(Op::Atom, std::move(name), {});
}

Formula Formula::negation(Formula f) { return make(Op::Not, {}, {std::move(f)}); }
Formula Formula::conjunction(std::vector<Formula> fs) { return make(Op::And, {}, std::move(fs)); }
Formula Formula::disjunction(std::vector<Formula> fs) { return make(Op::Or, {}, std::move(fs)); }
Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(Op::Implies, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::next(Formula f) { return make(Op::Next, {}, {std::move(f)}); }
Formula Formula::until(Formula lhs, Formula rhs) {
  return make(Op::Until, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::eventually(Formula f) { return make(Op::Eventually, {}, {std::move(f)}); }
Formula Formula::always(Formula f) { return make(Op::Always, {}, {std::move(f)}); }

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
std::span<const Formula> Formula::children() const { return node_->children; }
const Formula& Formula::child(std::size_t i) const { return node_->children.at(i); }
const std::string& Formula::key() const { return node_->key; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  return a.node_ == b.node_ || (a.node_->hash == b.node_->hash && a.node_->key == b.node_->key);
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  return a.node_->key <=> b.node_->key;
}

std::string to_string(const Formula& f) { return f.key(); }

std::size_t depth(const Formula& f) {
  std::size_t d = 0;
  for (const auto& c : f.children()) d = std::max(d, depth(c) + 1);
  return d;
}

namespace {
void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Atom) out.insert(f.name());
  for (const auto& c : f.children()) collect_atoms(c, out);
}

// Flattens nested nodes of `op`, drops the identity element, and reports
// whether the absorbing element was seen.
bool flatten_into(Op op, const std::vector<Formula>& in, std::vector<Formula>& out) {
  const Op identity = op == Op::And ? Op::True : Op::False;
  const Op absorbing = op == Op::And ? Op::False : Op::True;
  for (const auto& f : in) {
    if (f.op() == absorbing) return true;
    if (f.op() == identity) continue;
    if (f.op() == op) {
      for (const auto& c : f.children()) out.push_back(c);
    } else {
      out.push_back(f);
    }
  }
  return false;
}

Formula make_nary(Op op, std::vector<Formula> fs) {
  const Op dual = op == Op::And ? Op::Or : Op::And;
  std::vector<Formula> flat;
  flat.reserve(fs.size());
  if (flatten_into(op, fs, flat)) return op == Op::And ? Formula::falsity() : Formula::truth();

  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());

  std::unordered_set<std::string> keys;
  for (const auto& f : flat) keys.insert(f.key());

  // x & !x -> false, x | !x -> true
  for (const auto& f : flat) {
    if (f.op() == Op::Not && keys.count(f.child(0).key())) {
      return op == Op::And ? Formula::falsity() : Formula::truth();
    }
  }

  // Absorption: x | (x & y) -> x, x & (x | y) -> x.
  std::vector<Formula> kept;
  kept.reserve(flat.size());
  for (const auto& f : flat) {
    bool absorbed = false;
    if (f.op() == dual) {
      for (const auto& c : f.children()) {
        if (keys.count(c.key())) {
          absorbed = true;
          break;
        }
      }
    }
    if (!absorbed) kept.push_back(f);
  }

  if (kept.empty()) return op == Op::And ? Formula::truth() : Formula::falsity();
  if (kept.size() == 1) return kept.front();
  return op == Op::And ? Formula::conjunction(std::move(kept)) : Formula::disjunction(std::move(kept));
}
}  // namespace

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

Formula make_and(std::vector<Formula> fs) { return make_nary(Op::And, std::move(fs)); }
Formula make_or(std::vector<Formula> fs) { return make_nary(Op::Or, std::move(fs)); }

Formula make_next(const Formula& f) {
  if (f.is_true() || f.is_false()) return f;
  return Formula::next(f);
}

Formula make_until(const Formula& lhs, const Formula& rhs) {
  if (rhs.is_true() || rhs.is_false()) return rhs;
  if (lhs.is_false() || lhs == rhs) return rhs;
  if (lhs.is_true() && rhs.op() == Op::Until && rhs.child(0).is_true()) return rhs;
  return Formula::until(lhs, rhs);
}

Formula make_always(const Formula& f) {
  if (f.is_true() || f.is_false() || f.op() == Op::Always) return f;
  return Formula::always(f);
}

Formula make_not(const Formula& f) {
  switch (f.op()) {
    case Op::True: return Formula::falsity();
    case Op::False: return Formula::truth();
    case Op::Not: return f.child(0);
    case Op::And:
    case Op::Or: {
      std::vector<Formula> negated;
      negated.reserve(f.children().size());
      for (const auto& c : f.children()) negated.push_back(make_not(c));
      return f.op() == Op::And ? make_or(std::move(negated)) : make_and(std::move(negated));
    }
    case Op::Next: return make_next(make_not(f.child(0)));
    case Op::Always: return make_until(Formula::truth(), make_not(f.child(0)));
    case Op::Until:
      if (f.child(0).is_true()) return make_always(make_not(f.child(1)));
      return Formula::negation(f);
    case Op::Eventually: return make_always(make_not(f.child(0)));
    case Op::Implies: return make_and({f.child(0), make_not(f.child(1))});
    case Op::Atom: return Formula::negation(f);
  }
  throw std::logic_error("unreachable formula op");
}

Formula normalize(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom: return f;
    case Op::Not: return make_not(normalize(f.child(0)));
    case Op::And:
    case Op::Or: {
      std::vector<Formula> cs;
      cs.reserve(f.children().size());
      for (const auto& c : f.children()) cs.push_back(normalize(c));
      return f.op() == Op::And ? make_and(std::move(cs)) : make_or(std::move(cs));
    }
    case Op::Implies: return make_or({make_not(normalize(f.child(0))), normalize(f.child(1))});
    case Op::Next: return make_next(normalize(f.child(0)));
    case Op::Until: return make_until(normalize(f.child(0)), normalize(f.child(1)));
    case Op::Eventually: return make_until(Formula::truth(), normalize(f.child(0)));
    case Op::Always: return make_always(normalize(f.child(0)));
  }
  throw std::logic_error("unreachable formula op");
}

}  // namespace ltlmcts::ltl
