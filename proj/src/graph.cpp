#include "eqwalk/graph.hpp"

#include <cmath>
#include <queue>
#include <set>
#include <utility>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "eqwalk/errors.hpp"

namespace eqwalk {

BipartiteGraph::BipartiteGraph(std::vector<VertexId> a, std::vector<VertexId> b, std::vector<Edge> edges)
    : a_(std::move(a)), b_(std::move(b)), edges_(std::move(edges)) {
    for (const auto& v : a_) {
        if (!index_.emplace(v, index_.size()).second) {
            throw DomainError("vertex '" + v + "' listed twice");
        }
    }
    for (const auto& v : b_) {
        if (!index_.emplace(v, index_.size()).second) {
            throw DomainError("vertex '" + v + "' listed twice");
        }
    }
    incident_.resize(num_vertices());
    ends_.reserve(edges_.size());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& edge = edges_[e];
        auto iu = index_.find(edge.u);
        auto iv = index_.find(edge.v);
        if (iu == index_.end() || iv == index_.end()) {
            throw SideMismatchError("edge " + edge.u + "-" + edge.v + " has an unknown endpoint");
        }
        std::size_t ia = iu->second;
        std::size_t ib = iv->second;
        if (side_of_index(ia) == Part::B && side_of_index(ib) == Part::A) {
            std::swap(edge.u, edge.v);
            std::swap(ia, ib);
        }
        if (side_of_index(ia) != Part::A || side_of_index(ib) != Part::B) {
            throw SideMismatchError("edge " + edge.u + "-" + edge.v + " does not join A to B");
        }
        if (!(edge.weight > 0.0) || !std::isfinite(edge.weight)) {
            throw DomainError("edge " + edge.u + "-" + edge.v + " has nonpositive weight");
        }
        if (!seen.emplace(ia, ib).second) {
            throw DomainError("duplicate edge " + edge.u + "-" + edge.v);
        }
        incident_[ia].push_back(e);
        incident_[ib].push_back(e);
        ends_.emplace_back(ia, ib);
    }
}

std::optional<Part> BipartiteGraph::side(const VertexId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return side_of_index(it->second);
}

std::size_t BipartiteGraph::index_of(const VertexId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) {
        throw NotAWalkVertexError("'" + v + "' is not a vertex of the graph");
    }
    return it->second;
}

const VertexId& BipartiteGraph::vertex(std::size_t index) const {
    return index < a_.size() ? a_[index] : b_[index - a_.size()];
}

ExtendedGraph::ExtendedGraph(BipartiteGraph base, VertexId s, VertexId t, double w0, double w_end)
    : base_(std::move(base)), s_(std::move(s)), t_(std::move(t)), w0_(w0), w_end_(w_end) {
    base_.index_of(s_);
    base_.index_of(t_);
    if (base_.side(s_) != Part::A) {
        throw SideMismatchError("start vertex '" + s_ + "' is not in A");
    }
    if (base_.side(t_) != Part::B) {
        throw SideMismatchError("marked vertex '" + t_ + "' is not in B");
    }
    if (!(w0_ > 0.0) || !(w_end_ > 0.0)) {
        throw DomainError("dangling edge weights must be positive");
    }
    stars_.resize(base_.num_vertices());
    star_norm2_.assign(base_.num_vertices(), 0.0);
    const std::size_t is = base_.index_of(s_);
    const std::size_t it = base_.index_of(t_);
    stars_[is].push_back({kStartEdge, std::sqrt(w0_)});
    stars_[it].push_back({kEndEdge, std::sqrt(w_end_)});
    for (std::size_t e = 0; e < base_.num_edges(); ++e) {
        const auto [ia, ib] = base_.endpoints(e);
        const double amp = std::sqrt(base_.edges()[e].weight);
        stars_[ia].push_back({base_edge(e), amp});
        stars_[ib].push_back({base_edge(e), amp});
    }
    for (std::size_t v = 0; v < stars_.size(); ++v) {
        for (const auto& entry : stars_[v]) {
            star_norm2_[v] += entry.amplitude * entry.amplitude;
        }
    }
}

const VertexId& ExtendedGraph::start_prime() {
    static const VertexId name = "s'";
    return name;
}

const VertexId& ExtendedGraph::end_prime() {
    static const VertexId name = "t'";
    return name;
}

std::pair<Eigen::Index, int> ExtendedGraph::oriented_edge(const VertexId& from, const VertexId& to) const {
    if (from == s_ && to == start_prime()) return {kStartEdge, +1};
    if (from == start_prime() && to == s_) return {kStartEdge, -1};
    if (from == end_prime() && to == t_) return {kEndEdge, +1};
    if (from == t_ && to == end_prime()) return {kEndEdge, -1};
    const std::size_t i = base_.index_of(from);
    const std::size_t j = base_.index_of(to);
    for (std::size_t e : base_.incident(i)) {
        const auto [ia, ib] = base_.endpoints(e);
        if (ia == i && ib == j) return {base_edge(e), +1};
        if (ia == j && ib == i) return {base_edge(e), -1};
    }
    throw NotAWalkVertexError("no edge between '" + from + "' and '" + to + "'");
}

std::complex<double> ExtendedGraph::amplitude(const EdgeVector& x, const VertexId& from, const VertexId& to) const {
    const auto [index, sign] = oriented_edge(from, to);
    return static_cast<double>(sign) * x[index];
}

EdgeVector ExtendedGraph::start_state() const {
    EdgeVector x = EdgeVector::Zero(dim());
    x[kStartEdge] = 1.0;
    return x;
}

EdgeVector ExtendedGraph::end_state() const {
    EdgeVector x = EdgeVector::Zero(dim());
    x[kEndEdge] = 1.0;
    return x;
}

ExtendedGraph extend(const BipartiteGraph& g, const VertexId& s, const VertexId& t, double w0, double w_end) {
    return ExtendedGraph(g, s, t, w0, w_end);
}

EdgeVector star_state(const ExtendedGraph& g, const VertexId& u) {
    if (u == ExtendedGraph::start_prime() || u == ExtendedGraph::end_prime()) {
        throw NotAWalkVertexError("'" + u + "' carries only a dangling edge");
    }
    EdgeVector psi = EdgeVector::Zero(g.dim());
    for (const auto& entry : g.star(g.base().index_of(u))) {
        psi[entry.edge] = entry.amplitude;
    }
    return psi;
}

double total_weight(const BipartiteGraph& g) {
    double w = 0.0;
    for (const auto& e : g.edges()) {
        w += e.weight;
    }
    return w;
}

std::vector<std::vector<std::size_t>> connected_components(const BipartiteGraph& g) {
    std::vector<int> comp(g.num_vertices(), -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t root = 0; root < g.num_vertices(); ++root) {
        if (comp[root] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        std::queue<std::size_t> q;
        q.push(root);
        comp[root] = id;
        while (!q.empty()) {
            const std::size_t v = q.front();
            q.pop();
            out.back().push_back(v);
            for (std::size_t e : g.incident(v)) {
                const auto [a, b] = g.endpoints(e);
                const std::size_t w = a == v ? b : a;
                if (comp[w] < 0) {
                    comp[w] = id;
                    q.push(w);
                }
            }
        }
    }
    return out;
}

std::vector<double> net_outflow(const BipartiteGraph& g, const std::vector<double>& flow) {
    std::vector<double> net(g.num_vertices(), 0.0);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto [a, b] = g.endpoints(e);
        net[a] += flow[e];
        net[b] -= flow[e];
    }
    return net;
}

double flow_energy(const BipartiteGraph& g, const std::vector<double>& flow) {
    double energy = 0.0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        energy += flow[e] * flow[e] / g.edges()[e].weight;
    }
    return energy;
}

ElectricFlow electric_flow(const BipartiteGraph& g, const VertexId& s, const VertexId& t) {
    const std::size_t is = g.index_of(s);
    const std::size_t it = g.index_of(t);
    if (is == it) {
        throw DomainError("source and sink coincide");
    }

    // Reduced Laplacian on the component of s, grounded at t.
    std::vector<long> slot(g.num_vertices(), -1);
    bool reached = false;
    long count = 0;
    for (const auto& comp : connected_components(g)) {
        bool has_s = false;
        for (std::size_t v : comp) has_s = has_s || v == is;
        if (!has_s) continue;
        for (std::size_t v : comp) {
            if (v == it) {
                reached = true;
            } else {
                slot[v] = count++;
            }
        }
    }
    if (!reached) {
        throw NoFlowError("'" + s + "' and '" + t + "' are disconnected");
    }

    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto [a, b] = g.endpoints(e);
        const double w = g.edges()[e].weight;
        const long sa = slot[a];
        const long sb = slot[b];
        if (sa >= 0) entries.emplace_back(sa, sa, w);
        if (sb >= 0) entries.emplace_back(sb, sb, w);
        if (sa >= 0 && sb >= 0) {
            entries.emplace_back(sa, sb, -w);
            entries.emplace_back(sb, sa, -w);
        }
    }
    Eigen::SparseMatrix<double> laplacian(count, count);
    laplacian.setFromTriplets(entries.begin(), entries.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(laplacian);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailureError("Laplacian factorization failed");
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
    rhs[slot[is]] = 1.0;
    const Eigen::VectorXd phi = solver.solve(rhs);

    auto potential = [&](std::size_t v) { return slot[v] >= 0 ? phi[slot[v]] : 0.0; };

    ElectricFlow out;
    out.flow.source = s;
    out.flow.sink = t;
    out.flow.value = 1.0;
    out.flow.values.assign(g.num_edges(), 0.0);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto [a, b] = g.endpoints(e);
        if (slot[a] < 0 && a != it) continue;
        out.flow.values[e] = g.edges()[e].weight * (potential(a) - potential(b));
    }
    out.resistance = potential(is);
    return out;
}

VertexId k2_vertex(const VertexId& u, int side) { return "(" + u + "," + std::to_string(side) + ")"; }

TensorK2 tensor_k2(const WeightedGraph& g, const VertexId& s) {
    std::vector<VertexId> a;
    std::vector<VertexId> b;
    a.reserve(g.vertices.size());
    b.reserve(g.vertices.size());
    for (const auto& v : g.vertices) {
        a.push_back(k2_vertex(v, 0));
        b.push_back(k2_vertex(v, 1));
    }
    std::vector<Edge> edges;
    edges.reserve(2 * g.edges.size());
    for (const auto& e : g.edges) {
        edges.push_back({k2_vertex(e.u, 0), k2_vertex(e.v, 1), e.weight});
        edges.push_back({k2_vertex(e.v, 0), k2_vertex(e.u, 1), e.weight});
    }
    return {BipartiteGraph(std::move(a), std::move(b), std::move(edges)), k2_vertex(s, 0)};
}

TensorK2 tensor_k2(const BipartiteGraph& g, const VertexId& s) {
    WeightedGraph plain;
    plain.vertices = g.part_a();
    plain.vertices.insert(plain.vertices.end(), g.part_b().begin(), g.part_b().end());
    plain.edges = g.edges();
    return tensor_k2(plain, s);
}

BipartiteGraph reweight(const BipartiteGraph& g, double alpha) {
    if (!(alpha > 0.0)) {
        throw DomainError("reweight factor must be positive");
    }
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) {
        e.weight *= alpha;
    }
    return BipartiteGraph(g.part_a(), g.part_b(), std::move(edges));
}

}  // namespace eqwalk
