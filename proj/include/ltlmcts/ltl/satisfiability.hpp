#pragma once

#include <cstddef>
#include <stdexcept>

#include "ltlmcts/ltl/formula.hpp"

namespace ltlmcts::ltl {

class FragmentLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decides whether some infinite word satisfies `f`.
//
// Builds the generalized Buchi graph whose states are truth assignments to the
// elementary subformulas (atoms plus X/U/G subformulas), with one acceptance
// set per Until (obligation discharged) and per Always (refutation witnessed),
// and searches for a reachable fair SCC. Throws FragmentLimitError when the
// formula has more than `max_elementary` elementary subformulas.
bool satisfiable(const Formula& f, std::size_t max_elementary = 12);

}  // namespace ltlmcts::ltl
