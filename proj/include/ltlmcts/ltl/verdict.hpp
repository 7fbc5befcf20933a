#pragma once

#include <cstddef>
#include <ostream>
#include <string>

namespace ltlmcts::ltl {

// Three-valued outcome on a finite prefix. `step` is the index of the label
// after which the verdict first became determined; 0 for Undetermined.
struct MonitorVerdict {
  enum class Kind { Undetermined, Satisfied, Violated };

  Kind kind = Kind::Undetermined;
  std::size_t step = 0;

  static MonitorVerdict undetermined() { return {}; }
  static MonitorVerdict satisfied(std::size_t i) { return {Kind::Satisfied, i}; }
  static MonitorVerdict violated(std::size_t i) { return {Kind::Violated, i}; }

  bool determined() const { return kind != Kind::Undetermined; }
  friend bool operator==(const MonitorVerdict&, const MonitorVerdict&) = default;
};

std::string to_string(const MonitorVerdict& v);
std::ostream& operator<<(std::ostream& os, const MonitorVerdict& v);

}  // namespace ltlmcts::ltl
