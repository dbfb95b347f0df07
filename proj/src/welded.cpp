#include "eqwalk/welded.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "eqwalk/errors.hpp"

namespace eqwalk {

namespace {

VertexId left_id(std::size_t heap) { return "l" + std::to_string(heap); }
VertexId right_id(std::size_t heap) { return "r" + std::to_string(heap); }

int heap_depth(std::size_t heap) {
    int d = 0;
    while (heap > 1) {
        heap >>= 1;
        ++d;
    }
    return d;
}

void require_odd(const WeldedTree& tree) {
    if (tree.depth % 2 == 0) {
        throw ParityError("depth " + std::to_string(tree.depth) +
                          " is even; use the hierarchical construction with a balanced terminal weight");
    }
}

// (-1/2)^i for the level convention of the left (floor) or right (ceil) tree.
double half_power(int i) { return std::pow(-0.5, i); }

EdgeVector mirrored_catalyst(const WeldedTree& tree, bool floor_on_left) {
    require_odd(tree);
    EdgeVector v = EdgeVector::Zero(static_cast<Eigen::Index>(tree.graph.num_edges()) + 2);
    const int n = tree.depth;
    for (std::size_t e = 0; e < tree.layers.size(); ++e) {
        const auto& layer = tree.layers[e];
        int i = 0;
        switch (layer.region) {
            case WeldedLayer::Region::Left:
                i = floor_on_left ? layer.level / 2 : (layer.level + 1) / 2;
                break;
            case WeldedLayer::Region::Right:
                i = floor_on_left ? (layer.level + 1) / 2 : layer.level / 2;
                break;
            case WeldedLayer::Region::Middle:
                i = (n + 1) / 2;
                break;
        }
        v[ExtendedGraph::base_edge(e)] = half_power(i);
    }
    return v;
}

}  // namespace

ExtendedGraph WeldedTree::extended(double w0, double w_end) const {
    return ExtendedGraph(graph, root_left, root_right, w0, w_end);
}

int WeldedTree::line_position(const WeldedLayer& layer) const {
    switch (layer.region) {
        case WeldedLayer::Region::Left:
            return layer.level;
        case WeldedLayer::Region::Middle:
            return depth + 1;
        case WeldedLayer::Region::Right:
            return 2 * depth + 2 - layer.level;
    }
    return 0;
}

WeldedTree generate_welded(int n, std::uint64_t seed) {
    if (n <= 0) {
        throw DomainError("welded tree depth must be positive");
    }
    if (n > 20) {
        throw DomainError("welded tree depth too large for explicit generation");
    }
    std::mt19937_64 rng(seed);
    const std::size_t tree_size = (std::size_t{1} << (n + 1)) - 1;
    const std::size_t leaves = std::size_t{1} << n;
    const std::size_t first_leaf = leaves;

    WeldedTree tree;
    tree.depth = n;
    tree.root_left = left_id(1);
    tree.root_right = right_id(1);

    // Left vertices at even depth are in A; a right vertex at depth d is at distance
    // 2n+1-d from s, so it is in A iff d is odd.
    std::vector<VertexId> a;
    std::vector<VertexId> b;
    for (std::size_t h = 1; h <= tree_size; ++h) {
        (heap_depth(h) % 2 == 0 ? a : b).push_back(left_id(h));
    }
    for (std::size_t h = 1; h <= tree_size; ++h) {
        (heap_depth(h) % 2 == 1 ? a : b).push_back(right_id(h));
    }
    auto in_a = [](const VertexId& id) {
        const int d = heap_depth(std::stoul(id.substr(1)));
        return id[0] == 'l' ? d % 2 == 0 : d % 2 == 1;
    };

    std::vector<Edge> edges;
    std::vector<WeldedLayer> layers;
    auto add_edge = [&](const VertexId& x, const VertexId& y, WeldedLayer layer) {
        if (in_a(x)) {
            edges.push_back({x, y, 1.0});
        } else {
            edges.push_back({y, x, 1.0});
        }
        layers.push_back(layer);
    };
    for (std::size_t h = 2; h <= tree_size; ++h) {
        add_edge(left_id(h / 2), left_id(h), {WeldedLayer::Region::Left, heap_depth(h)});
    }

    // Weld: l_{pi(1)}, r_{sigma(1)}, l_{pi(2)}, r_{sigma(2)}, ..., back to l_{pi(1)}.
    std::vector<std::size_t> pi(leaves);
    std::vector<std::size_t> sigma(leaves);
    std::iota(pi.begin(), pi.end(), first_leaf);
    std::iota(sigma.begin(), sigma.end(), first_leaf);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    for (std::size_t i = 0; i < leaves; ++i) {
        add_edge(left_id(pi[i]), right_id(sigma[i]), {WeldedLayer::Region::Middle, n + 1});
        add_edge(right_id(sigma[i]), left_id(pi[(i + 1) % leaves]), {WeldedLayer::Region::Middle, n + 1});
    }

    for (std::size_t h = 2; h <= tree_size; ++h) {
        add_edge(right_id(h / 2), right_id(h), {WeldedLayer::Region::Right, heap_depth(h)});
    }

    // Distinct random labels of 2n+2 bits; the all-zeros string is never a vertex.
    const int bits = 2 * n + 2;
    std::uniform_int_distribution<int> coin(0, 1);
    std::unordered_set<std::string> used{std::string(static_cast<std::size_t>(bits), '0')};
    auto draw_label = [&]() {
        for (;;) {
            std::string label(static_cast<std::size_t>(bits), '0');
            for (auto& c : label) {
                c = coin(rng) ? '1' : '0';
            }
            if (used.insert(label).second) {
                return label;
            }
        }
    };
    for (std::size_t h = 1; h <= tree_size; ++h) {
        tree.labels.emplace(left_id(h), draw_label());
        tree.labels.emplace(right_id(h), draw_label());
    }

    tree.graph = BipartiteGraph(std::move(a), std::move(b), std::move(edges));
    tree.layers = std::move(layers);
    return tree;
}

WeldOracle::WeldOracle(const WeldedTree& tree)
    : entry_(tree.labels.at(tree.root_left)), bits_(2 * tree.depth + 2) {
    const auto& g = tree.graph;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        std::vector<std::string> list;
        for (std::size_t e : g.incident(v)) {
            const auto [x, y] = g.endpoints(e);
            list.push_back(tree.labels.at(g.vertex(x == v ? y : x)));
        }
        std::sort(list.begin(), list.end());
        adjacency_.emplace(tree.labels.at(g.vertex(v)), std::move(list));
    }
}

std::vector<std::string> WeldOracle::neighbors(const std::string& label) const {
    auto it = adjacency_.find(label);
    if (it == adjacency_.end()) {
        return {};
    }
    return it->second;
}

EdgeVector catalyst_v2(const WeldedTree& tree) { return mirrored_catalyst(tree, true); }

EdgeVector catalyst_v3(const WeldedTree& tree) { return mirrored_catalyst(tree, false); }

WeldedReport verify_welded(int n, std::uint64_t seed, double tolerance) {
    const WeldedTree tree = generate_welded(n, seed);
    require_odd(tree);
    const ExtendedGraph g = tree.extended();
    const WalkOperator u = walk_step(g, Phase::Minus);

    const EdgeVector catalyst = 0.5 * (catalyst_v2(tree) + catalyst_v3(tree));
    const EdgeVector input = g.start_state() + catalyst;
    const EdgeVector expected = g.end_state() + catalyst;

    WeldedReport report;
    report.depth = n;
    report.complexity = catalyst.squaredNorm();
    report.residual = (u.apply(input) - expected).norm();
    report.bound = 3.0 * (n + 1);
    report.passed = report.residual <= tolerance && report.complexity <= report.bound + tolerance;
    return report;
}

}  // namespace eqwalk
