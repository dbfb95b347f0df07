#include "eqwalk/classical.hpp"

#include <random>

#include "eqwalk/errors.hpp"

namespace eqwalk {

std::vector<std::optional<std::int64_t>> classical_hitting(const BipartiteGraph& g, const VertexId& s,
                                                           const VertexId& t, std::int64_t max_steps, int trials,
                                                           std::uint64_t seed) {
    if (max_steps <= 0 || trials <= 0) {
        throw DomainError("step budget and trial count must be positive");
    }
    const std::size_t start = g.index_of(s);
    const std::size_t target = g.index_of(t);

    // Per-vertex neighbour tables with weight-proportional sampling.
    std::vector<std::vector<std::size_t>> next(g.num_vertices());
    std::vector<std::discrete_distribution<std::size_t>> pick(g.num_vertices());
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        std::vector<double> weights;
        for (std::size_t e : g.incident(v)) {
            const auto [a, b] = g.endpoints(e);
            next[v].push_back(a == v ? b : a);
            weights.push_back(g.edges()[e].weight);
        }
        pick[v] = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }

    std::mt19937_64 rng(seed);
    std::vector<std::optional<std::int64_t>> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        std::size_t at = start;
        std::optional<std::int64_t> hit;
        for (std::int64_t step = 1; step <= max_steps; ++step) {
            if (next[at].empty()) break;
            at = next[at][pick[at](rng)];
            if (at == target) {
                hit = step;
                break;
            }
        }
        out.push_back(hit);
    }
    return out;
}

}  // namespace eqwalk
