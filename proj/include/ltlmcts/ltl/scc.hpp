#pragma once

#include <cstdint>
#include <vector>

namespace ltlmcts::ltl {

// Tarjan's algorithm, iterative. Components come out in reverse topological
// order of the condensation: every edge leaving a component points into a
// component emitted earlier.
std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& successors);

}  // namespace ltlmcts::ltl
