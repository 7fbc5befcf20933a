#pragma once

#include "ltlmcts/ltl/alphabet.hpp"
#include "ltlmcts/ltl/formula.hpp"

namespace ltlmcts::ltl {

// Obligation on the remaining suffix once `label` has been observed. `f` must
// be normalized; the result is normalized. Atoms absent from `alphabet` are
// treated as false.
Formula progress(const Formula& f, Label label, const Alphabet& alphabet);

}  // namespace ltlmcts::ltl
