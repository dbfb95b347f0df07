#pragma once

#include <cstdint>

#include "eqwalk/graph.hpp"

namespace eqwalk {

/// Connected weighted bipartite graph with at most `max_edges` edges, random s in A
/// and t in B, and weights drawn uniformly from [0.25, 4]. Deterministic in seed.
ExtendedGraph random_extended_graph(std::uint64_t seed, std::size_t max_edges, double w0 = 1.0,
                                    double w_end = 1.0);

}  // namespace eqwalk
