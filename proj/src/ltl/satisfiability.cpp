#include "ltlmcts/ltl/satisfiability.hpp"

#include <unordered_map>
#include <vector>

#include "ltlmcts/ltl/scc.hpp"

namespace ltlmcts::ltl {

namespace {

struct Node {
  Op op;
  std::vector<int> kids;
  int bit = -1;  // atoms and temporal operators own an assignment bit
};

class Compiled {
 public:
  explicit Compiled(const Formula& f) { root_ = add(f); }

  int root() const { return root_; }
  std::size_t bits() const { return next_bit_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  void eval(std::uint32_t sigma, std::vector<std::uint8_t>& vals) const {
    vals.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      switch (n.op) {
        case Op::True: vals[i] = 1; break;
        case Op::False: vals[i] = 0; break;
        case Op::Atom:
        case Op::Next:
        case Op::Until:
        case Op::Always: vals[i] = (sigma >> n.bit) & 1u; break;
        case Op::Not: vals[i] = !vals[n.kids[0]]; break;
        case Op::And: {
          std::uint8_t v = 1;
          for (int k : n.kids) v &= vals[k];
          vals[i] = v;
          break;
        }
        case Op::Or: {
          std::uint8_t v = 0;
          for (int k : n.kids) v |= vals[k];
          vals[i] = v;
          break;
        }
        default: break;
      }
    }
  }

 private:
  int add(const Formula& f) {
    if (auto it = index_.find(f.key()); it != index_.end()) return it->second;
    Node n{f.op(), {}, -1};
    for (const auto& c : f.children()) n.kids.push_back(add(c));
    if (f.op() == Op::Atom || f.op() == Op::Next || f.op() == Op::Until || f.op() == Op::Always) {
      n.bit = static_cast<int>(next_bit_++);
    }
    nodes_.push_back(std::move(n));
    const int id = static_cast<int>(nodes_.size() - 1);
    index_.emplace(f.key(), id);
    return id;
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> index_;
  std::size_t next_bit_ = 0;
  int root_ = -1;
};

struct Assignment {
  bool consistent = true;
  bool initial = false;
  std::uint32_t fix_mask = 0;   // bits of the successor pinned by U/G unfolding
  std::uint32_t fix_value = 0;
  std::uint32_t next_required = 0;  // required truth of each X argument in the successor
  std::uint32_t next_eval = 0;      // truth of each X argument here
  std::uint32_t accepting = 0;
};

}  // namespace

bool satisfiable(const Formula& input, std::size_t max_elementary) {
  const Formula f = normalize(input);
  if (f.is_true()) return true;
  if (f.is_false()) return false;

  const Compiled c(f);
  if (c.bits() > max_elementary) {
    throw FragmentLimitError("formula has " + std::to_string(c.bits()) +
                             " elementary subformulas; limit is " + std::to_string(max_elementary));
  }

  std::vector<int> untils, alwayses, nexts;
  for (std::size_t i = 0; i < c.nodes().size(); ++i) {
    switch (c.nodes()[i].op) {
      case Op::Until: untils.push_back(static_cast<int>(i)); break;
      case Op::Always: alwayses.push_back(static_cast<int>(i)); break;
      case Op::Next: nexts.push_back(static_cast<int>(i)); break;
      default: break;
    }
  }
  const std::size_t n_acc = untils.size() + alwayses.size();
  const std::uint32_t all_acc = n_acc == 32 ? ~0u : ((1u << n_acc) - 1u);

  const std::uint32_t n_states = 1u << c.bits();
  std::vector<Assignment> info(n_states);
  std::vector<std::uint8_t> vals;
  for (std::uint32_t s = 0; s < n_states; ++s) {
    c.eval(s, vals);
    Assignment& a = info[s];
    a.initial = vals[c.root()];
    std::size_t acc_bit = 0;
    for (int u : untils) {
      const Node& n = c.nodes()[u];
      const bool here = vals[u];
      const bool lhs = vals[n.kids[0]];
      const bool rhs = vals[n.kids[1]];
      if (rhs) {
        if (!here) a.consistent = false;
      } else if (!lhs) {
        if (here) a.consistent = false;
      } else {
        a.fix_mask |= 1u << n.bit;
        if (here) a.fix_value |= 1u << n.bit;
      }
      if (!here || rhs) a.accepting |= 1u << acc_bit;
      ++acc_bit;
    }
    for (int g : alwayses) {
      const Node& n = c.nodes()[g];
      const bool here = vals[g];
      const bool arg = vals[n.kids[0]];
      if (!arg) {
        if (here) a.consistent = false;
      } else {
        a.fix_mask |= 1u << n.bit;
        if (here) a.fix_value |= 1u << n.bit;
      }
      if (here || !arg) a.accepting |= 1u << acc_bit;
      ++acc_bit;
    }
    for (std::size_t j = 0; j < nexts.size(); ++j) {
      const Node& n = c.nodes()[nexts[j]];
      if (vals[nexts[j]]) a.next_required |= 1u << j;
      if (vals[n.kids[0]]) a.next_eval |= 1u << j;
    }
  }

  auto has_edge = [&](std::uint32_t from, std::uint32_t to) {
    const Assignment& a = info[from];
    const Assignment& b = info[to];
    return b.consistent && (to & a.fix_mask) == a.fix_value && b.next_eval == a.next_required;
  };

  // Reachable subgraph from consistent initial assignments.
  std::vector<std::int32_t> compact(n_states, -1);
  std::vector<std::uint32_t> order;
  for (std::uint32_t s = 0; s < n_states; ++s) {
    if (info[s].consistent && info[s].initial) {
      compact[s] = static_cast<std::int32_t>(order.size());
      order.push_back(s);
    }
  }
  if (order.empty()) return false;

  std::vector<std::vector<std::uint32_t>> succ;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t s = order[head];
    std::vector<std::uint32_t> out;
    for (std::uint32_t t = 0; t < n_states; ++t) {
      if (!has_edge(s, t)) continue;
      if (compact[t] < 0) {
        compact[t] = static_cast<std::int32_t>(order.size());
        order.push_back(t);
      }
      out.push_back(static_cast<std::uint32_t>(compact[t]));
    }
    succ.push_back(std::move(out));
  }

  for (const auto& comp : strongly_connected_components(succ)) {
    bool cyclic = comp.size() > 1;
    std::uint32_t acc = 0;
    for (std::uint32_t v : comp) {
      acc |= info[order[v]].accepting;
      if (!cyclic) {
        for (std::uint32_t w : succ[v]) cyclic |= (w == v);
      }
    }
    if (cyclic && (acc & all_acc) == all_acc) return true;
  }
  return false;
}

}  // namespace ltlmcts::ltl
