#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqwalk/graph.hpp"

namespace eqwalk {

/// Weighted random walk from s; each trial records the first step at which the
/// walk stands on t, or nullopt after `max_steps` steps without reaching it.
std::vector<std::optional<std::int64_t>> classical_hitting(const BipartiteGraph& g, const VertexId& s,
                                                           const VertexId& t, std::int64_t max_steps, int trials,
                                                           std::uint64_t seed);

}  // namespace eqwalk
