#include "eqwalk/random_graphs.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "eqwalk/errors.hpp"

namespace eqwalk {

ExtendedGraph random_extended_graph(std::uint64_t seed, std::size_t max_edges, double w0, double w_end) {
    if (max_edges < 1) {
        throw DomainError("need room for at least one edge");
    }
    std::mt19937_64 rng(seed);
    // A spanning tree needs |A| + |B| - 1 edges.
    const std::size_t budget = std::min<std::size_t>(max_edges + 1, 24);
    std::uniform_int_distribution<std::size_t> part_size(1, std::max<std::size_t>(1, budget / 2));
    const std::size_t na = part_size(rng);
    const std::size_t nb = std::min(part_size(rng), budget - na);

    std::vector<VertexId> a;
    std::vector<VertexId> b;
    for (std::size_t i = 0; i < na; ++i) a.push_back("a" + std::to_string(i));
    for (std::size_t i = 0; i < nb; ++i) b.push_back("b" + std::to_string(i));

    std::uniform_real_distribution<double> weight(0.25, 4.0);
    std::set<std::pair<std::size_t, std::size_t>> used;
    std::vector<Edge> edges;
    auto add = [&](std::size_t i, std::size_t j) {
        if (used.emplace(i, j).second) edges.push_back({a[i], b[j], weight(rng)});
    };

    // Random spanning tree: attach vertices one at a time to an earlier vertex of the
    // other part.
    std::vector<std::pair<bool, std::size_t>> order;
    for (std::size_t i = 1; i < na; ++i) order.emplace_back(true, i);
    for (std::size_t j = 1; j < nb; ++j) order.emplace_back(false, j);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> seen_a{0};
    std::vector<std::size_t> seen_b{0};
    add(0, 0);
    for (const auto& [is_a, idx] : order) {
        if (is_a) {
            add(idx, seen_b[std::uniform_int_distribution<std::size_t>(0, seen_b.size() - 1)(rng)]);
            seen_a.push_back(idx);
        } else {
            add(seen_a[std::uniform_int_distribution<std::size_t>(0, seen_a.size() - 1)(rng)], idx);
            seen_b.push_back(idx);
        }
    }

    const std::size_t target = std::min(max_edges, na * nb);
    std::uniform_int_distribution<std::size_t> pick_a(0, na - 1);
    std::uniform_int_distribution<std::size_t> pick_b(0, nb - 1);
    std::uniform_int_distribution<std::size_t> extra(edges.size(), std::max(edges.size(), target));
    const std::size_t wanted = extra(rng);
    while (edges.size() < wanted) {
        add(pick_a(rng), pick_b(rng));
    }

    const VertexId s = a[pick_a(rng)];
    const VertexId t = b[pick_b(rng)];
    return ExtendedGraph(BipartiteGraph(std::move(a), std::move(b), std::move(edges)), s, t, w0, w_end);
}

}  // namespace eqwalk
