#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "ltlmcts/ltl/alphabet.hpp"
#include "ltlmcts/ltl/formula.hpp"
#include "ltlmcts/ltl/verdict.hpp"

namespace ltlmcts::ltl {

class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kOracleMaxAtoms = 4;
inline constexpr std::size_t kOracleMaxLength = 10;

// Reference verdict by enumeration. A prefix is decided when every lasso
// `prefix . u . v^w` with |u| <= suffix_depth and |v| in {1, 2} agrees under
// standard LTL semantics. Reports the earliest such prefix of `trace`.
MonitorVerdict brute_force_verdict(const Formula& f, const Alphabet& alphabet,
                                   std::span<const Label> trace, std::size_t suffix_depth);

// Standard LTL truth of the lasso word `stem . loop^w` at position 0.
bool evaluate_lasso(const Formula& f, const Alphabet& alphabet, std::span<const Label> stem,
                    std::span<const Label> loop);

}  // namespace ltlmcts::ltl
