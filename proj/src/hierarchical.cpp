#include "eqwalk/hierarchical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <random>
#include <set>

#include "eqwalk/errors.hpp"
#include "eqwalk/transducer.hpp"
#include "eqwalk/welded.hpp"

namespace eqwalk {

namespace {

constexpr int kRejectionBudget = 2000;

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational inverse(const Rational& r) { return Rational(denominator(r), numerator(r)); }

struct LayeredEdge {
    VertexId x;  // in vertex layer i - 1
    VertexId y;  // in vertex layer i
    int layer;
};

HierarchicalGraph assemble(const HierarchicalSpec& spec, std::vector<std::vector<VertexId>> vertex_layers,
                           const std::vector<LayeredEdge>& edges) {
    std::vector<VertexId> a;
    std::vector<VertexId> b;
    for (std::size_t i = 0; i < vertex_layers.size(); ++i) {
        auto& part = i % 2 == 0 ? a : b;
        part.insert(part.end(), vertex_layers[i].begin(), vertex_layers[i].end());
    }
    std::vector<Edge> list;
    std::vector<int> layer;
    list.reserve(edges.size());
    for (const auto& e : edges) {
        // S_{i-1} is in A exactly when i is odd.
        if (e.layer % 2 == 1) {
            list.push_back({e.x, e.y, 1.0});
        } else {
            list.push_back({e.y, e.x, 1.0});
        }
        layer.push_back(e.layer);
    }
    HierarchicalGraph g;
    g.spec = spec;
    g.graph = BipartiteGraph(std::move(a), std::move(b), std::move(list));
    g.vertex_layers = std::move(vertex_layers);
    g.edge_layer = std::move(layer);
    return g;
}

std::vector<LayeredEdge> random_layer(const std::vector<VertexId>& left, const std::vector<VertexId>& right,
                                      std::int64_t up, std::int64_t down, int layer, std::mt19937_64& rng) {
    std::vector<std::size_t> left_stubs;
    std::vector<std::size_t> right_stubs;
    for (std::size_t v = 0; v < left.size(); ++v) {
        left_stubs.insert(left_stubs.end(), static_cast<std::size_t>(up), v);
    }
    for (std::size_t v = 0; v < right.size(); ++v) {
        right_stubs.insert(right_stubs.end(), static_cast<std::size_t>(down), v);
    }
    for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
        std::shuffle(right_stubs.begin(), right_stubs.end(), rng);
        std::set<std::pair<std::size_t, std::size_t>> seen;
        bool simple = true;
        for (std::size_t k = 0; k < left_stubs.size() && simple; ++k) {
            simple = seen.emplace(left_stubs[k], right_stubs[k]).second;
        }
        if (!simple) continue;
        std::vector<LayeredEdge> out;
        out.reserve(left_stubs.size());
        for (std::size_t k = 0; k < left_stubs.size(); ++k) {
            out.push_back({left[left_stubs[k]], right[right_stubs[k]], layer});
        }
        return out;
    }
    throw SamplingFailureError("could not sample a simple biregular layer " + std::to_string(layer));
}

// Canonical graph for the family's own layers; returns the number of layers built.
int canonical_layers(const HierarchicalSpec& spec, std::uint64_t seed, std::vector<std::vector<VertexId>>& layers,
                     std::vector<LayeredEdge>& edges) {
    const int size = spec.family_size;
    const HierarchicalSpec reference = family_spec(*spec.family, size);
    const int n = reference.layers();
    if (spec.layers() < n ||
        !std::equal(reference.layer_edges.begin(), reference.layer_edges.end(), spec.layer_edges.begin())) {
        throw DomainError("spec does not match its family's canonical profile");
    }
    layers.assign(static_cast<std::size_t>(n) + 1, {});
    switch (*spec.family) {
        case Family::Hypercube: {
            const std::uint32_t count = std::uint32_t{1} << size;
            for (std::uint32_t x = 0; x < count; ++x) {
                layers[static_cast<std::size_t>(std::popcount(x))].push_back("h" + std::to_string(x));
            }
            for (std::uint32_t x = 0; x < count; ++x) {
                for (int j = 0; j < size; ++j) {
                    const std::uint32_t bit = std::uint32_t{1} << j;
                    if (x & bit) continue;
                    edges.push_back({"h" + std::to_string(x), "h" + std::to_string(x | bit), std::popcount(x) + 1});
                }
            }
            break;
        }
        case Family::Welded: {
            const WeldedTree tree = generate_welded(size, seed);
            const auto& g = tree.graph;
            for (std::size_t v = 0; v < g.num_vertices(); ++v) {
                const VertexId& id = g.vertex(v);
                std::size_t heap = std::stoul(id.substr(1));
                const int depth = std::bit_width(heap) - 1;
                const int pos = id[0] == 'l' ? depth : 2 * size + 1 - depth;
                layers[static_cast<std::size_t>(pos)].push_back(id);
            }
            for (auto& layer : layers) {
                std::sort(layer.begin(), layer.end());
            }
            for (std::size_t e = 0; e < g.num_edges(); ++e) {
                const int pos = tree.line_position(tree.layers[e]);
                const auto& edge = g.edges()[e];
                // A endpoint first; put the lower vertex layer in x.
                const bool a_is_lower = pos % 2 == 1;
                edges.push_back({a_is_lower ? edge.u : edge.v, a_is_lower ? edge.v : edge.u, pos});
            }
            break;
        }
        case Family::Glued: {
            const std::size_t tree_size = (std::size_t{1} << (size + 1)) - 1;
            for (std::size_t h = 1; h <= tree_size; ++h) {
                const int depth = std::bit_width(h) - 1;
                layers[static_cast<std::size_t>(depth)].push_back("l" + std::to_string(h));
                layers[static_cast<std::size_t>(2 * size + 1 - depth)].push_back("r" + std::to_string(h));
            }
            for (std::size_t h = 2; h <= tree_size; ++h) {
                const int depth = std::bit_width(h) - 1;
                edges.push_back({"l" + std::to_string(h / 2), "l" + std::to_string(h), depth});
                edges.push_back({"r" + std::to_string(h), "r" + std::to_string(h / 2), 2 * size + 2 - depth});
            }
            for (std::size_t h = std::size_t{1} << size; h <= tree_size; ++h) {
                edges.push_back({"l" + std::to_string(h), "r" + std::to_string(h), size + 1});
            }
            break;
        }
    }
    return n;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Welded:
            return "welded";
        case Family::Glued:
            return "glued";
        case Family::Hypercube:
            return "hypercube";
    }
    return "";
}

Family parse_family(const std::string& name) {
    if (name == "welded") return Family::Welded;
    if (name == "glued") return Family::Glued;
    if (name == "hypercube") return Family::Hypercube;
    throw DomainError("unknown family '" + name + "'");
}

std::int64_t HierarchicalSpec::up_degree(int i) const {
    return layer_edges.at(static_cast<std::size_t>(i - 1)) / sizes.at(static_cast<std::size_t>(i - 1));
}

std::int64_t HierarchicalSpec::down_degree(int i) const {
    return layer_edges.at(static_cast<std::size_t>(i - 1)) / sizes.at(static_cast<std::size_t>(i));
}

const HierarchicalSpec& validate_spec(const HierarchicalSpec& spec) {
    const int n = spec.layers();
    if (n < 1) {
        throw ConstraintViolationError(0, "at least one edge layer is required");
    }
    if (spec.sizes.size() != static_cast<std::size_t>(n) + 1) {
        throw ConstraintViolationError(0, "expected " + std::to_string(n + 1) + " vertex layers");
    }
    if (spec.sizes.front() != 1) {
        throw ConstraintViolationError(0, "|S_0| must be 1");
    }
    if (spec.sizes.back() != 1) {
        throw ConstraintViolationError(n, "|S_n| must be 1");
    }
    for (int i = 1; i <= n; ++i) {
        const std::int64_t left = spec.sizes[static_cast<std::size_t>(i - 1)];
        const std::int64_t right = spec.sizes[static_cast<std::size_t>(i)];
        const std::int64_t count = spec.layer_edges[static_cast<std::size_t>(i - 1)];
        if (left <= 0 || right <= 0 || count <= 0) {
            throw ConstraintViolationError(i, "sizes and edge counts must be positive");
        }
        if (count % left != 0) {
            throw ConstraintViolationError(i, "|L_i| is not a multiple of |S_{i-1}|");
        }
        if (count % right != 0) {
            throw ConstraintViolationError(i, "|L_i| is not a multiple of |S_i|");
        }
        if (count / left > right) {
            throw ConstraintViolationError(i, "up-degree exceeds the next layer size");
        }
    }
    return spec;
}

HierarchicalSpec family_spec(Family kind, int size) {
    if (size < 1) {
        throw DomainError("family size must be at least 1");
    }
    HierarchicalSpec spec;
    spec.family = kind;
    spec.family_size = size;
    switch (kind) {
        case Family::Welded:
        case Family::Glued: {
            if (size > 24) throw DomainError("tree depth too large");
            for (int i = 0; i <= size; ++i) spec.sizes.push_back(std::int64_t{1} << i);
            for (int i = size; i >= 0; --i) spec.sizes.push_back(std::int64_t{1} << i);
            for (int i = 1; i <= size; ++i) spec.layer_edges.push_back(std::int64_t{1} << i);
            spec.layer_edges.push_back(kind == Family::Welded ? std::int64_t{2} << size : std::int64_t{1} << size);
            for (int i = size; i >= 1; --i) spec.layer_edges.push_back(std::int64_t{1} << i);
            break;
        }
        case Family::Hypercube: {
            if (size > 30) throw DomainError("hypercube dimension too large");
            for (int i = 0; i <= size; ++i) spec.sizes.push_back(binomial(size, i));
            for (int i = 1; i <= size; ++i) spec.layer_edges.push_back(binomial(size, i - 1) * (size - i + 1));
            break;
        }
    }
    return spec;
}

HierarchicalSpec augment_even(const HierarchicalSpec& spec) {
    if (spec.layers() % 2 == 1) {
        std::clog << "warning: spec already has an odd number of layers; not augmenting\n";
        return spec;
    }
    HierarchicalSpec out = spec;
    out.sizes.push_back(1);
    out.layer_edges.push_back(1);
    out.augmented_layers += 1;
    return out;
}

std::vector<double> CProfile::as_double() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& c : values) out.push_back(to_double(c));
    return out;
}

Rational CProfile::complexity_bound(int n) const {
    Rational sum = 0;
    for (int k = 0; k < n; ++k) {
        sum += values.at(static_cast<std::size_t>(k)) + inverse(values[static_cast<std::size_t>(k)]);
    }
    return sum / 2;
}

CProfile c_profile(std::span<const Rational> weights) {
    CProfile out;
    Rational c = 1;
    for (std::size_t i = 1; i < weights.size(); ++i) {
        if (weights[i - 1] <= 0 || weights[i] <= 0) {
            throw DomainError("layer weights must be positive");
        }
        if (i % 2 == 1) {
            c *= weights[i] / weights[i - 1];
        } else {
            c *= weights[i - 1] / weights[i];
        }
        out.values.push_back(c);
    }
    return out;
}

CProfile c_profile(std::span<const double> weights) {
    std::vector<Rational> exact;
    exact.reserve(weights.size());
    for (double w : weights) {
        if (!std::isfinite(w)) throw DomainError("layer weights must be finite");
        exact.emplace_back(w);
    }
    return c_profile(std::span<const Rational>(exact));
}

Rational balance_terminal_weight(const Rational& w0, std::span<const Rational> interior) {
    if (interior.empty()) {
        throw DomainError("at least one interior weight is required");
    }
    std::vector<Rational> weights{w0};
    weights.insert(weights.end(), interior.begin(), interior.end());
    const Rational cn = c_profile(std::span<const Rational>(weights)).values.back();
    const std::size_t n = interior.size();
    // C_{n+1} = C_n * (W_n / W_{n+1})^{(-1)^{n+1}} = 1.
    return n % 2 == 1 ? Rational(cn * interior.back()) : Rational(interior.back() / cn);
}

double balance_terminal_weight(double w0, std::span<const double> interior) {
    std::vector<Rational> exact;
    for (double w : interior) exact.emplace_back(w);
    return to_double(balance_terminal_weight(Rational(w0), std::span<const Rational>(exact)));
}

std::vector<double> FlattenedLine::weights_double() const {
    std::vector<double> out;
    for (const auto& w : weights) out.push_back(to_double(w));
    return out;
}

ExtendedGraph FlattenedLine::graph() const {
    const int n = layers();
    std::vector<VertexId> a;
    std::vector<VertexId> b;
    for (int i = 0; i <= n; ++i) {
        (i % 2 == 0 ? a : b).push_back("s" + std::to_string(i));
    }
    std::vector<Edge> edges;
    for (int k = 1; k <= n; ++k) {
        const VertexId lower = "s" + std::to_string(k - 1);
        const VertexId upper = "s" + std::to_string(k);
        const double w = to_double(weights[static_cast<std::size_t>(k)]);
        if (k % 2 == 1) {
            edges.push_back({lower, upper, w});
        } else {
            edges.push_back({upper, lower, w});
        }
    }
    return ExtendedGraph(BipartiteGraph(std::move(a), std::move(b), std::move(edges)), "s0",
                         "s" + std::to_string(n), to_double(weights.front()), to_double(weights.back()));
}

Eigen::Index FlattenedLine::edge_index(int layer, int n) {
    if (layer == 0) return ExtendedGraph::kStartEdge;
    if (layer == n + 1) return ExtendedGraph::kEndEdge;
    return layer + 1;
}

EdgeVector FlattenedLine::to_edges(const Eigen::VectorXd& by_layer) const {
    const int n = layers();
    EdgeVector x = EdgeVector::Zero(n + 2);
    for (int k = 0; k <= n + 1; ++k) {
        x[edge_index(k, n)] = by_layer[k];
    }
    return x;
}

Eigen::VectorXd FlattenedLine::to_layers(const EdgeVector& x) const {
    const int n = layers();
    Eigen::VectorXd out(n + 2);
    for (int k = 0; k <= n + 1; ++k) {
        out[k] = x[edge_index(k, n)].real();
    }
    return out;
}

const VertexId& HierarchicalGraph::answer() const {
    return vertex_layers.at(vertex_layers.size() - 1 - static_cast<std::size_t>(spec.augmented_layers)).front();
}

ExtendedGraph HierarchicalGraph::extended(double w0, double w_end) const {
    return ExtendedGraph(graph, s(), t(), w0, w_end);
}

Eigen::MatrixXd HierarchicalGraph::layer_isometry() const {
    const int n = spec.layers();
    const Eigen::Index dim = static_cast<Eigen::Index>(graph.num_edges()) + 2;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, n + 2);
    v(ExtendedGraph::kStartEdge, FlattenedLine::edge_index(0, n)) = 1.0;
    v(ExtendedGraph::kEndEdge, FlattenedLine::edge_index(n + 1, n)) = 1.0;
    std::vector<std::size_t> counts(static_cast<std::size_t>(n) + 1, 0);
    for (int layer : edge_layer) counts[static_cast<std::size_t>(layer)]++;
    for (std::size_t e = 0; e < edge_layer.size(); ++e) {
        const int k = edge_layer[e];
        v(ExtendedGraph::base_edge(e), FlattenedLine::edge_index(k, n)) =
            1.0 / std::sqrt(static_cast<double>(counts[static_cast<std::size_t>(k)]));
    }
    return v;
}

HierarchicalGraph instantiate(const HierarchicalSpec& spec, std::uint64_t seed, Wiring wiring) {
    validate_spec(spec);
    std::uint64_t total = 0;
    for (auto c : spec.layer_edges) total += static_cast<std::uint64_t>(c);
    if (total > 100000) {
        throw DomainError("spec has " + std::to_string(total) + " edges; instantiation is limited to 1e5");
    }
    std::mt19937_64 rng(seed);
    const int n = spec.layers();
    std::vector<std::vector<VertexId>> layers;
    std::vector<LayeredEdge> edges;
    int built = 0;
    if (wiring == Wiring::Canonical) {
        if (!spec.family) {
            throw DomainError("canonical wiring needs a family spec");
        }
        built = canonical_layers(spec, seed, layers, edges);
    } else {
        layers.emplace_back(std::vector<VertexId>{"v0_0"});
    }
    for (int i = built + 1; i <= n; ++i) {
        std::vector<VertexId> next;
        for (std::int64_t j = 0; j < spec.sizes[static_cast<std::size_t>(i)]; ++j) {
            next.push_back("v" + std::to_string(i) + "_" + std::to_string(j));
        }
        auto layer = random_layer(layers.back(), next, spec.up_degree(i), spec.down_degree(i), i, rng);
        edges.insert(edges.end(), layer.begin(), layer.end());
        layers.push_back(std::move(next));
    }
    return assemble(spec, std::move(layers), edges);
}

FlattenedLine flatten(const HierarchicalGraph& g, const Rational& w0, const Rational& w_end) {
    const int n = g.spec.layers();
    FlattenedLine line;
    line.weights.assign(static_cast<std::size_t>(n) + 2, Rational(0));
    line.weights.front() = w0;
    line.weights.back() = w_end;
    for (int layer : g.edge_layer) {
        line.weights[static_cast<std::size_t>(layer)] += 1;
    }
    return line;
}

FlattenedLine flatten(const HierarchicalSpec& spec, const Rational& w0, const std::optional<Rational>& w_end) {
    validate_spec(spec);
    if (w0 <= 0) {
        throw DomainError("W_0 must be positive");
    }
    FlattenedLine line;
    line.weights.push_back(w0);
    for (auto c : spec.layer_edges) line.weights.emplace_back(c);
    const std::span<const Rational> interior(line.weights.data() + 1, spec.layer_edges.size());
    line.weights.push_back(w_end ? *w_end : balance_terminal_weight(w0, interior));
    return line;
}

int terminal_sign(int n) { return ((n + 1) / 2) % 2 == 0 ? 1 : -1; }

HierCatalysts hier_catalysts(const FlattenedLine& line) {
    const int n = line.layers();
    if (n % 2 == 0) {
        throw ParityError("the flattened line has an even number of layers; augment it first");
    }
    const CProfile profile = line.profile();
    if (profile.values.back() != 1) {
        throw UnbalancedWeightsError("C_{n+1} = " + profile.values.back().str() + ", expected 1");
    }
    HierCatalysts out{Eigen::VectorXd::Zero(n + 2), Eigen::VectorXd::Zero(n + 2)};
    for (int k = 1; k <= n; ++k) {
        const double c = to_double(profile.values[static_cast<std::size_t>(k - 1)]);
        const double floor_sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
        const double ceil_sign = ((k + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        out.v2[k] = floor_sign * std::sqrt(c);
        out.v3[k] = ceil_sign / std::sqrt(c);
    }
    return out;
}

HierarchicalReport verify_hierarchical(const HierarchicalSpec& input, const Rational& w0, std::uint64_t seed,
                                       double tolerance, std::size_t full_edge_limit) {
    const HierarchicalSpec spec = input.layers() % 2 == 0 ? augment_even(input) : input;
    validate_spec(spec);
    const FlattenedLine line = flatten(spec, w0);
    const int n = line.layers();
    const CProfile profile = line.profile();
    const HierCatalysts cat = hier_catalysts(line);

    HierarchicalReport report;
    report.layers = n;
    report.augmented = spec.augmented_layers > input.augmented_layers;
    report.w_end = to_double(line.weights.back());
    report.sign = terminal_sign(n);
    report.bound = to_double(profile.complexity_bound(n));

    const Eigen::VectorXd c = 0.5 * (cat.v2 + cat.v3);
    report.complexity = c.squaredNorm();
    Eigen::VectorXd in = c;
    in[0] = 1.0;
    Eigen::VectorXd out = c;
    out[n + 1] = report.sign;

    const ExtendedGraph flat = line.graph();
    const WalkOperator u = walk_step(flat, Phase::Minus);
    report.residual_flat = (u.apply(line.to_edges(in)) - line.to_edges(out)).norm();

    Eigen::VectorXcd xi(2);
    xi << 1.0, 0.0;
    const auto solved = solve_transduction(Transducer(u), xi, tolerance);
    report.min_norm_complexity = solved.complexity;
    report.tau_overlap = solved.tau[1].real();
    report.solve_residual = solved.residual;

    std::uint64_t total = 0;
    for (auto cnt : spec.layer_edges) total += static_cast<std::uint64_t>(cnt);
    bool full_ok = true;
    if (total <= full_edge_limit) {
        const HierarchicalGraph g = instantiate(spec, seed);
        const WalkOperator full = walk_step(g.extended(to_double(w0), report.w_end), Phase::Minus);
        const Eigen::MatrixXd iso = g.layer_isometry();
        const Eigen::VectorXcd lifted_in = (iso * line.to_edges(in).real()).cast<std::complex<double>>();
        const Eigen::VectorXcd lifted_out = (iso * line.to_edges(out).real()).cast<std::complex<double>>();
        report.residual_full = (full.apply(lifted_in) - lifted_out).norm();
        full_ok = *report.residual_full <= tolerance;
    }

    const double tau_error = (solved.tau - Eigen::Vector2cd(0.0, static_cast<double>(report.sign))).norm();
    report.passed = report.residual_flat <= tolerance && full_ok && report.solve_residual <= tolerance &&
                    tau_error <= tolerance && report.complexity <= report.bound + tolerance &&
                    report.min_norm_complexity <= report.complexity + tolerance;
    return report;
}

}  // namespace eqwalk
