#include "ltlmcts/ltl/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ltlmcts::ltl {

namespace {

// Postorder program evaluating a formula on every position of a lasso at
// once; each value is a bitmask over positions.
class LassoProgram {
 public:
  LassoProgram(const Formula& f, const Alphabet& alphabet) { root_ = add(f, alphabet); }

  bool eval(std::span<const Label> word, std::size_t loop_start) const {
    const std::size_t m = word.size();
    const std::uint32_t all = (m == 32) ? ~0u : ((1u << m) - 1u);
    const std::uint32_t loop_bit = 1u << loop_start;
    auto next = [&](std::uint32_t x) {
      std::uint32_t r = x >> 1;
      if (x & loop_bit) r |= 1u << (m - 1);
      return r;
    };
    std::vector<std::uint32_t> val(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const Instr& in = ops_[i];
      switch (in.op) {
        case Op::True: val[i] = all; break;
        case Op::False: val[i] = 0; break;
        case Op::Atom: {
          std::uint32_t r = 0;
          if (in.atom >= 0) {
            for (std::size_t p = 0; p < m; ++p) {
              if (word[p].has(static_cast<std::size_t>(in.atom))) r |= 1u << p;
            }
          }
          val[i] = r;
          break;
        }
        case Op::Not: val[i] = ~val[in.a] & all; break;
        case Op::And: val[i] = val[in.a] & val[in.b]; break;
        case Op::Or: val[i] = val[in.a] | val[in.b]; break;
        case Op::Implies: val[i] = (~val[in.a] | val[in.b]) & all; break;
        case Op::Next: val[i] = next(val[in.a]); break;
        case Op::Until:
        case Op::Eventually: {
          const std::uint32_t lhs = in.op == Op::Until ? val[in.a] : all;
          const std::uint32_t rhs = in.op == Op::Until ? val[in.b] : val[in.a];
          std::uint32_t r = rhs;
          for (std::size_t k = 0; k <= m; ++k) r = rhs | (lhs & next(r));
          val[i] = r;
          break;
        }
        case Op::Always: {
          const std::uint32_t x = val[in.a];
          std::uint32_t r = x;
          for (std::size_t k = 0; k <= m; ++k) r = x & next(r);
          val[i] = r;
          break;
        }
      }
    }
    return val[root_] & 1u;
  }

 private:
  struct Instr {
    Op op;
    int a = -1;
    int b = -1;
    int atom = -1;
  };

  int add(const Formula& f, const Alphabet& alphabet) {
    const auto kids = f.children();
    if ((f.op() == Op::And || f.op() == Op::Or) && kids.size() != 2) {
      // Fold n-ary nodes into a binary chain.
      if (kids.empty()) return emit({f.op() == Op::And ? Op::True : Op::False});
      int acc = add(kids[0], alphabet);
      for (std::size_t i = 1; i < kids.size(); ++i) {
        const int rhs = add(kids[i], alphabet);
        acc = emit({f.op(), acc, rhs});
      }
      return acc;
    }
    Instr in{f.op()};
    if (f.op() == Op::Atom) {
      if (auto idx = alphabet.index_of(f.name())) in.atom = static_cast<int>(*idx);
    }
    if (kids.size() > 0) in.a = add(kids[0], alphabet);
    if (kids.size() > 1) in.b = add(kids[1], alphabet);
    return emit(in);
  }

  int emit(Instr in) {
    ops_.push_back(in);
    return static_cast<int>(ops_.size() - 1);
  }

  std::vector<Instr> ops_;
  int root_ = -1;
};

constexpr std::size_t kMaxLoop = 2;

// Result of quantifying over every extension of a prefix.
enum class Outcome { AllTrue, AllFalse, Mixed };

Outcome classify_prefix(const LassoProgram& prog, std::span<const Label> prefix,
                        std::size_t depth, std::uint32_t n_labels) {
  bool seen_true = false;
  bool seen_false = false;
  std::vector<Label> word(prefix.begin(), prefix.end());
  const std::size_t base = word.size();

  for (std::size_t ext = 0; ext <= depth; ++ext) {
    std::vector<std::uint32_t> suffix(ext, 0);
    for (;;) {
      for (std::size_t loop_len = 1; loop_len <= kMaxLoop; ++loop_len) {
        std::vector<std::uint32_t> loop(loop_len, 0);
        for (;;) {
          word.resize(base);
          for (auto s : suffix) word.push_back(Label{s});
          for (auto s : loop) word.push_back(Label{s});
          const bool sat = prog.eval(word, base + ext);
          (sat ? seen_true : seen_false) = true;
          if (seen_true && seen_false) return Outcome::Mixed;

          std::size_t k = 0;
          while (k < loop_len && ++loop[k] == n_labels) loop[k++] = 0;
          if (k == loop_len) break;
        }
      }
      std::size_t k = 0;
      while (k < ext && ++suffix[k] == n_labels) suffix[k++] = 0;
      if (k == ext) break;
    }
  }
  return seen_true ? Outcome::AllTrue : Outcome::AllFalse;
}

}  // namespace

bool evaluate_lasso(const Formula& f, const Alphabet& alphabet, std::span<const Label> stem,
                    std::span<const Label> loop) {
  if (loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  if (stem.size() + loop.size() > 32) throw OracleSizeError("lasso longer than 32 positions");
  std::vector<Label> word(stem.begin(), stem.end());
  word.insert(word.end(), loop.begin(), loop.end());
  return LassoProgram(f, alphabet).eval(word, stem.size());
}

MonitorVerdict brute_force_verdict(const Formula& f, const Alphabet& alphabet,
                                   std::span<const Label> trace, std::size_t suffix_depth) {
  if (alphabet.size() > kOracleMaxAtoms) {
    throw OracleSizeError("oracle supports at most " + std::to_string(kOracleMaxAtoms) + " atoms");
  }
  if (trace.size() + suffix_depth > kOracleMaxLength) {
    throw OracleSizeError("trace length plus suffix depth exceeds " +
                          std::to_string(kOracleMaxLength));
  }
  const LassoProgram prog(f, alphabet);
  const auto n_labels = static_cast<std::uint32_t>(1u << alphabet.size());
  for (std::size_t j = 1; j <= trace.size(); ++j) {
    switch (classify_prefix(prog, trace.first(j), suffix_depth, n_labels)) {
      case Outcome::AllTrue: return MonitorVerdict::satisfied(j - 1);
      case Outcome::AllFalse: return MonitorVerdict::violated(j - 1);
      case Outcome::Mixed: break;
    }
  }
  return MonitorVerdict::undetermined();
}

}  // namespace ltlmcts::ltl
