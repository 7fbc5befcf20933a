#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ltlmcts/ltl/alphabet.hpp"
#include "ltlmcts/ltl/formula.hpp"
#include "ltlmcts/ltl/verdict.hpp"

namespace ltlmcts::ltl {

enum class StateClass : std::uint8_t { Neutral, AcceptingTrap, RejectingTrap };

class StateBudgetError : public std::runtime_error {
 public:
  explicit StateBudgetError(std::size_t budget)
      : std::runtime_error("progression closure exceeds state budget of " + std::to_string(budget)),
        budget_(budget) {}
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

// Deterministic progression automaton. States are normalized formulas; the
// transition table is dense over all 2^|AP| labels.
class MonitorAutomaton {
 public:
  using State = std::uint32_t;

  const Alphabet& alphabet() const { return alphabet_; }
  State initial() const { return 0; }
  std::size_t size() const { return states_.size(); }
  const Formula& formula(State s) const { return states_.at(s); }
  StateClass classify(State s) const { return classes_[s]; }
  bool is_trap(State s) const { return classes_[s] != StateClass::Neutral; }

  State step(State s, Label l) const {
    return delta_[(static_cast<std::size_t>(s) << alphabet_.size()) | (l.bits & mask_)];
  }

 private:
  friend MonitorAutomaton build_monitor(const Formula&, const Alphabet&, std::size_t);

  Alphabet alphabet_;
  std::uint32_t mask_ = 0;
  std::vector<Formula> states_;
  std::vector<State> delta_;
  std::vector<StateClass> classes_;
};

inline constexpr std::size_t kDefaultStateBudget = 4096;
inline constexpr std::size_t kMaxMonitorAtoms = 16;

MonitorAutomaton build_monitor(const Formula& f, const Alphabet& alphabet,
                               std::size_t state_budget = kDefaultStateBudget);

MonitorVerdict check_trace(const MonitorAutomaton& m, std::span<const Label> trace);

// Incremental form of check_trace for callers that own the cursor.
class MonitorCursor {
 public:
  explicit MonitorCursor(const MonitorAutomaton& m) : m_(&m), state_(m.initial()) {}

  // Returns the verdict after consuming `l`; once determined it never changes.
  MonitorVerdict feed(Label l);
  MonitorVerdict verdict() const { return verdict_; }
  MonitorAutomaton::State state() const { return state_; }
  std::size_t consumed() const { return consumed_; }

 private:
  const MonitorAutomaton* m_;
  MonitorAutomaton::State state_;
  std::size_t consumed_ = 0;
  MonitorVerdict verdict_;
};

}  // namespace ltlmcts::ltl
