#include "ltlmcts/ltl/verdict.hpp"

namespace ltlmcts::ltl {

std::string to_string(const MonitorVerdict& v) {
  switch (v.kind) {
    case MonitorVerdict::Kind::Satisfied: return "SATISFIED(" + std::to_string(v.step) + ")";
    case MonitorVerdict::Kind::Violated: return "VIOLATED(" + std::to_string(v.step) + ")";
    case MonitorVerdict::Kind::Undetermined: break;
  }
  return "UNDETERMINED";
}

std::ostream& operator<<(std::ostream& os, const MonitorVerdict& v) { return os << to_string(v); }

}  // namespace ltlmcts::ltl
