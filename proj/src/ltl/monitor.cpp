#include "ltlmcts/ltl/monitor.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <unordered_map>

#include "ltlmcts/ltl/progress.hpp"
#include "ltlmcts/ltl/satisfiability.hpp"
#include "ltlmcts/ltl/scc.hpp"

namespace ltlmcts::ltl {

namespace {

// nullopt when the formula is outside what the satisfiability check handles.
std::optional<bool> try_satisfiable(const Formula& f) {
  try {
    return satisfiable(f);
  } catch (const FragmentLimitError&) {
    return std::nullopt;
  }
}

using Cube = std::vector<Formula>;  // sorted, duplicate-free conjunction of literals

bool contradictory(const Cube& c) {
  for (const auto& l : c) {
    if (std::binary_search(c.begin(), c.end(), make_not(l))) return true;
  }
  return false;
}

void drop_subsumed(std::vector<Cube>& cubes, std::size_t budget) {
  std::sort(cubes.begin(), cubes.end(),
            [](const Cube& a, const Cube& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  std::vector<Cube> kept;
  for (auto& c : cubes) {
    const bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const Cube& k) {
      return std::includes(c.begin(), c.end(), k.begin(), k.end());
    });
    if (!subsumed) kept.push_back(std::move(c));
  }
  if (kept.size() > budget) throw StateBudgetError(budget);
  cubes = std::move(kept);
}

std::vector<Cube> to_dnf(const Formula& f, std::size_t budget) {
  switch (f.op()) {
    case Op::True: return {Cube{}};
    case Op::False: return {};
    case Op::Or: {
      std::vector<Cube> out;
      for (const auto& c : f.children()) {
        auto part = to_dnf(c, budget);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
      }
      drop_subsumed(out, budget);
      return out;
    }
    case Op::And: {
      std::vector<Cube> acc{Cube{}};
      for (const auto& c : f.children()) {
        const auto part = to_dnf(c, budget);
        std::vector<Cube> next;
        for (const auto& a : acc) {
          for (const auto& b : part) {
            Cube m;
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
            if (!contradictory(m)) next.push_back(std::move(m));
          }
        }
        drop_subsumed(next, budget);
        acc = std::move(next);
      }
      return acc;
    }
    default: return {Cube{f}};
  }
}

// Canonical representative of a state: subsumption-reduced disjunctive
// normal form over the temporal literals at the top of the formula.
Formula canonical_state(const Formula& f, std::size_t budget) {
  std::vector<Formula> disjuncts;
  for (auto& cube : to_dnf(f, budget)) disjuncts.push_back(make_and(std::move(cube)));
  return make_or(std::move(disjuncts));
}

}  // namespace

MonitorAutomaton build_monitor(const Formula& input, const Alphabet& alphabet,
                               std::size_t state_budget) {
  if (state_budget == 0) throw std::invalid_argument("state budget must be positive");
  if (alphabet.size() > kMaxMonitorAtoms) {
    throw std::invalid_argument("monitor alphabet limited to " + std::to_string(kMaxMonitorAtoms) +
                                " atoms");
  }
  for (const auto& a : atoms_of(input)) {
    if (!alphabet.contains(a)) throw std::invalid_argument("atom '" + a + "' not in alphabet");
  }

  MonitorAutomaton m;
  m.alphabet_ = alphabet;
  const std::size_t n_labels = std::size_t{1} << alphabet.size();
  m.mask_ = static_cast<std::uint32_t>(n_labels - 1);

  std::unordered_map<Formula, MonitorAutomaton::State, FormulaHash> ids;
  auto intern = [&](const Formula& raw) {
    const Formula f = canonical_state(raw, state_budget);
    auto [it, inserted] = ids.emplace(f, static_cast<MonitorAutomaton::State>(m.states_.size()));
    if (inserted) {
      if (m.states_.size() >= state_budget) throw StateBudgetError(state_budget);
      m.states_.push_back(f);
    }
    return it->second;
  };

  intern(normalize(input));
  for (std::size_t head = 0; head < m.states_.size(); ++head) {
    const Formula f = m.states_[head];
    for (std::size_t bits = 0; bits < n_labels; ++bits) {
      m.delta_.push_back(intern(progress(f, Label{static_cast<std::uint32_t>(bits)}, alphabet)));
    }
  }

  const std::size_t n = m.states_.size();
  std::vector<std::vector<std::uint32_t>> succ(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto row = std::span(m.delta_).subspan(s * n_labels, n_labels);
    succ[s].assign(row.begin(), row.end());
    std::sort(succ[s].begin(), succ[s].end());
    succ[s].erase(std::unique(succ[s].begin(), succ[s].end()), succ[s].end());
  }

  m.classes_.assign(n, StateClass::Neutral);
  std::vector<std::size_t> component_of(n);
  const auto components = strongly_connected_components(succ);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (auto v : components[c]) component_of[v] = c;
  }

  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    const Formula& rep = m.states_[comp.front()];
    bool cyclic = comp.size() > 1;
    bool exits_rejecting = true;
    bool exits_accepting = true;
    for (auto v : comp) {
      for (auto w : succ[v]) {
        if (component_of[w] == c) {
          cyclic = cyclic || w == v;
          continue;
        }
        exits_rejecting = exits_rejecting && m.classes_[w] == StateClass::RejectingTrap;
        exits_accepting = exits_accepting && m.classes_[w] == StateClass::AcceptingTrap;
      }
    }

    StateClass cls = StateClass::Neutral;
    if (rep.is_true()) {
      cls = StateClass::AcceptingTrap;
    } else if (rep.is_false()) {
      cls = StateClass::RejectingTrap;
    } else if (!cyclic) {
      // Every run leaves immediately, so the exits decide.
      if (exits_rejecting) cls = StateClass::RejectingTrap;
      else if (exits_accepting) cls = StateClass::AcceptingTrap;
    } else if (exits_rejecting && try_satisfiable(rep) == false) {
      cls = StateClass::RejectingTrap;
    } else if (exits_accepting && try_satisfiable(make_not(rep)) == false) {
      cls = StateClass::AcceptingTrap;
    }
    for (auto v : comp) m.classes_[v] = cls;
  }
  return m;
}

MonitorVerdict MonitorCursor::feed(Label l) {
  if (verdict_.determined()) {
    ++consumed_;
    return verdict_;
  }
  state_ = m_->step(state_, l);
  switch (m_->classify(state_)) {
    case StateClass::AcceptingTrap: verdict_ = MonitorVerdict::satisfied(consumed_); break;
    case StateClass::RejectingTrap: verdict_ = MonitorVerdict::violated(consumed_); break;
    case StateClass::Neutral: break;
  }
  ++consumed_;
  return verdict_;
}

MonitorVerdict check_trace(const MonitorAutomaton& m, std::span<const Label> trace) {
  auto s = m.initial();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    s = m.step(s, trace[i]);
    switch (m.classify(s)) {
      case StateClass::AcceptingTrap: return MonitorVerdict::satisfied(i);
      case StateClass::RejectingTrap: return MonitorVerdict::violated(i);
      case StateClass::Neutral: break;
    }
  }
  return MonitorVerdict::undetermined();
}

}  // namespace ltlmcts::ltl
