#include "ltlmcts/ltl/progress.hpp"

#include <stdexcept>

namespace ltlmcts::ltl {

Formula progress(const Formula& f, Label label, const Alphabet& alphabet) {
  switch (f.op()) {
    case Op::True:
    case Op::False: return f;
    case Op::Atom: {
      auto idx = alphabet.index_of(f.name());
      return idx && label.has(*idx) ? Formula::truth() : Formula::falsity();
    }
    case Op::Not: return make_not(progress(f.child(0), label, alphabet));
    case Op::And:
    case Op::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) {
        Formula p = progress(c, label, alphabet);
        if (f.op() == Op::And && p.is_false()) return p;
        if (f.op() == Op::Or && p.is_true()) return p;
        parts.push_back(std::move(p));
      }
      return f.op() == Op::And ? make_and(std::move(parts)) : make_or(std::move(parts));
    }
    case Op::Next: return f.child(0);
    case Op::Until:
      return make_or({progress(f.child(1), label, alphabet),
                      make_and({progress(f.child(0), label, alphabet), f})});
    case Op::Always: return make_and({progress(f.child(0), label, alphabet), f});
    case Op::Implies:
    case Op::Eventually: return progress(normalize(f), label, alphabet);
  }
  throw std::logic_error("unreachable formula op");
}

}  // namespace ltlmcts::ltl
