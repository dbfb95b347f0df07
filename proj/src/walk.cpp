#include "eqwalk/walk.hpp"

#include <cmath>
#include <map>

#include "eqwalk/errors.hpp"

namespace eqwalk {

EdgeVector reflect_part(const ExtendedGraph& g, Part part, const EdgeVector& x) {
    if (x.size() != g.dim()) {
        throw DomainError("vector does not live on the graph's edge space");
    }
    EdgeVector y = x;
    const auto& base = g.base();
    const std::size_t begin = part == Part::A ? 0 : base.part_a().size();
    const std::size_t end = part == Part::A ? base.part_a().size() : base.num_vertices();
    for (std::size_t v = begin; v < end; ++v) {
        const double norm2 = g.star_norm2(v);
        if (norm2 == 0.0) continue;
        std::complex<double> overlap = 0.0;
        for (const auto& entry : g.star(v)) {
            overlap += entry.amplitude * x[entry.edge];
        }
        const std::complex<double> coef = 2.0 * overlap / norm2;
        for (const auto& entry : g.star(v)) {
            y[entry.edge] -= coef * entry.amplitude;
        }
    }
    return y;
}

WalkOperator::WalkOperator(ExtendedGraph graph, Phase phase) : graph_(std::move(graph)), phase_(phase) {}

EdgeVector WalkOperator::apply(const EdgeVector& x) const {
    EdgeVector y = reflect_part(graph_, Part::B, reflect_part(graph_, Part::A, x));
    if (phase_ == Phase::Minus) {
        y = -y;
    }
    return y;
}

Eigen::MatrixXcd WalkOperator::matrix() const {
    const Eigen::Index n = dim();
    Eigen::MatrixXcd m(n, n);
    EdgeVector basis = EdgeVector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        basis[j] = 1.0;
        m.col(j) = apply(basis);
        basis[j] = 0.0;
    }
    return m;
}

WalkOperator walk_step(const ExtendedGraph& g, Phase phase) { return WalkOperator(g, phase); }

EdgeVector apply_walk(const WalkOperator& u, EdgeVector x, int k) {
    if (k < 0) {
        throw DomainError("number of walk steps must be nonnegative");
    }
    for (int i = 0; i < k; ++i) {
        x = u.apply(x);
    }
    return x;
}

EdgeVector catalyst_v0(const ExtendedGraph& g) {
    EdgeVector v = EdgeVector::Zero(g.dim());
    const auto& edges = g.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        v[ExtendedGraph::base_edge(e)] = std::sqrt(edges[e].weight);
    }
    return v;
}

EdgeVector catalyst_v1(const ExtendedGraph& g) {
    const auto flow = electric_flow(g.base(), g.s(), g.t());
    EdgeVector v = EdgeVector::Zero(g.dim());
    const auto& edges = g.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        v[ExtendedGraph::base_edge(e)] = flow.flow.values[e] / std::sqrt(edges[e].weight);
    }
    return v;
}

DiffuseShiftWalk::DiffuseShiftWalk(ExtendedGraph graph) : graph_(std::move(graph)) {
    const auto& base = graph_.base();
    const std::size_t is = base.index_of(graph_.s());
    const std::size_t it = base.index_of(graph_.t());

    // Rows of D: first register u, second register its neighbours and, for s and t,
    // the bottom element. (s,bot) and (bot,t) come first so they line up with the
    // dangling edges of the extended graph.
    std::map<std::pair<std::size_t, std::size_t>, Eigen::Index> index;
    auto add = [&](std::size_t a, std::size_t b) {
        index.emplace(std::make_pair(a, b), static_cast<Eigen::Index>(pairs_.size()));
        pairs_.push_back({a, b});
    };
    add(is, kBottom);
    add(kBottom, it);
    for (std::size_t e = 0; e < base.num_edges(); ++e) {
        const auto [a, b] = base.endpoints(e);
        add(a, b);
    }
    for (std::size_t e = 0; e < base.num_edges(); ++e) {
        const auto [a, b] = base.endpoints(e);
        add(b, a);
    }
    add(kBottom, is);
    add(it, kBottom);

    swap_.resize(pairs_.size());
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        swap_[p] = index.at({pairs_[p].second, pairs_[p].first});
    }

    rows_.resize(base.num_vertices());
    row_norm2_.assign(base.num_vertices(), 0.0);
    rows_[is].emplace_back(index.at({is, kBottom}), std::sqrt(graph_.w0()));
    rows_[it].emplace_back(index.at({it, kBottom}), std::sqrt(graph_.w_end()));
    for (std::size_t e = 0; e < base.num_edges(); ++e) {
        const auto [a, b] = base.endpoints(e);
        const double amp = std::sqrt(base.edges()[e].weight);
        rows_[a].emplace_back(index.at({a, b}), amp);
        rows_[b].emplace_back(index.at({b, a}), amp);
    }
    for (std::size_t u = 0; u < rows_.size(); ++u) {
        for (const auto& [p, amp] : rows_[u]) {
            row_norm2_[u] += amp * amp;
        }
    }
}

Eigen::Index DiffuseShiftWalk::index_of(std::size_t first, std::size_t second) const {
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        if (pairs_[p].first == first && pairs_[p].second == second) {
            return static_cast<Eigen::Index>(p);
        }
    }
    throw DomainError("pair is outside the support of the diffuse-and-shift space");
}

Eigen::VectorXcd DiffuseShiftWalk::diffuse(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y = x;
    for (std::size_t u = 0; u < rows_.size(); ++u) {
        if (row_norm2_[u] == 0.0) continue;
        std::complex<double> overlap = 0.0;
        for (const auto& [p, amp] : rows_[u]) {
            overlap += amp * x[p];
        }
        const std::complex<double> coef = 2.0 * overlap / row_norm2_[u];
        for (const auto& [p, amp] : rows_[u]) {
            y[p] -= coef * amp;
        }
    }
    return y;
}

Eigen::VectorXcd DiffuseShiftWalk::shift(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y(x.size());
    for (std::size_t p = 0; p < swap_.size(); ++p) {
        y[swap_[p]] = x[static_cast<Eigen::Index>(p)];
    }
    return y;
}

Eigen::VectorXcd DiffuseShiftWalk::apply(const Eigen::VectorXcd& x) const {
    return shift(diffuse(shift(diffuse(x))));
}

Eigen::MatrixXcd DiffuseShiftWalk::matrix() const {
    const Eigen::Index n = dim();
    Eigen::MatrixXcd m(n, n);
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        basis[j] = 1.0;
        m.col(j) = apply(basis);
        basis[j] = 0.0;
    }
    return m;
}

std::vector<Eigen::Index> DiffuseShiftWalk::edge_identification() const {
    // By construction the first dim(G') pairs are (s,bot), (bot,t), then (a,b) in base
    // edge order.
    std::vector<Eigen::Index> map(static_cast<std::size_t>(graph_.dim()));
    for (std::size_t i = 0; i < map.size(); ++i) {
        map[i] = static_cast<Eigen::Index>(i);
    }
    return map;
}

DiffuseShiftWalk diffuse_shift_step(const ExtendedGraph& g) { return DiffuseShiftWalk(g); }

}  // namespace eqwalk
