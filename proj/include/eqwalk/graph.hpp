#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace eqwalk {

using VertexId = std::string;

/// Amplitudes over the oriented edges of an ExtendedGraph. Index 0 is ss', index 1
/// is t't, base edge i lives at index i + 2. Public coordinates come first, so a walk
/// matrix is directly a transducer with a two-dimensional public space.
using EdgeVector = Eigen::VectorXcd;

enum class Part { A, B };

/// Undirected weighted edge. In a BipartiteGraph `u` is always the A endpoint.
struct Edge {
    VertexId u;
    VertexId v;
    double weight = 1.0;
};

/// Weighted graph with no bipartiteness requirement; input to tensor_k2.
struct WeightedGraph {
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;
};

/// Weighted bipartite graph with parts A and B. Immutable after construction.
///
/// Vertices get dense indices: A in the given order, then B. Edges keep their
/// input order, and every edge is stored A -> B.
class BipartiteGraph {
  public:
    BipartiteGraph() = default;

    /// Throws SideMismatchError if an edge does not join A to B, DomainError on a
    /// nonpositive weight, a duplicate pair, or a vertex listed twice.
    BipartiteGraph(std::vector<VertexId> a, std::vector<VertexId> b, std::vector<Edge> edges);

    const std::vector<VertexId>& part_a() const { return a_; }
    const std::vector<VertexId>& part_b() const { return b_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::size_t num_vertices() const { return a_.size() + b_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    bool contains(const VertexId& v) const { return index_.count(v) != 0; }
    std::optional<Part> side(const VertexId& v) const;

    /// Dense index of `v`; throws NotAWalkVertexError when absent.
    std::size_t index_of(const VertexId& v) const;
    const VertexId& vertex(std::size_t index) const;
    Part side_of_index(std::size_t index) const { return index < a_.size() ? Part::A : Part::B; }

    /// Base edge indices incident to the vertex with dense index `index`.
    const std::vector<std::size_t>& incident(std::size_t index) const { return incident_[index]; }

    /// Dense endpoints of base edge `e`: (A endpoint, B endpoint).
    std::pair<std::size_t, std::size_t> endpoints(std::size_t e) const { return ends_[e]; }

  private:
    std::vector<VertexId> a_;
    std::vector<VertexId> b_;
    std::vector<Edge> edges_;
    std::unordered_map<VertexId, std::size_t> index_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::pair<std::size_t, std::size_t>> ends_;
};

/// One entry of a star state: edge index in the extended edge space and sqrt(w_e).
struct StarEntry {
    Eigen::Index edge;
    double amplitude;
};

/// G' = G plus the dangling edges ss' (s -> s') and t't (t' -> t).
class ExtendedGraph {
  public:
    static constexpr Eigen::Index kStartEdge = 0;
    static constexpr Eigen::Index kEndEdge = 1;

    ExtendedGraph(BipartiteGraph base, VertexId s, VertexId t, double w0, double w_end);

    const BipartiteGraph& base() const { return base_; }
    const VertexId& s() const { return s_; }
    const VertexId& t() const { return t_; }
    double w0() const { return w0_; }
    double w_end() const { return w_end_; }

    /// Dimension of C^{E u E'}.
    Eigen::Index dim() const { return static_cast<Eigen::Index>(base_.num_edges()) + 2; }
    static Eigen::Index base_edge(std::size_t e) { return static_cast<Eigen::Index>(e) + 2; }

    /// Star state entries of the vertex with dense index `index`, dangling edges included.
    const std::vector<StarEntry>& star(std::size_t index) const { return stars_[index]; }
    double star_norm2(std::size_t index) const { return star_norm2_[index]; }

    /// Position of the edge {from, to} and the sign of the orientation from -> to
    /// relative to the stored one. Accepts "s'" / "t'" via the dangling_* names.
    std::pair<Eigen::Index, int> oriented_edge(const VertexId& from, const VertexId& to) const;

    /// Amplitude of x on the edge oriented from -> to (|uv> = -|vu>).
    std::complex<double> amplitude(const EdgeVector& x, const VertexId& from, const VertexId& to) const;

    /// Unit vector on a dangling edge, in the stored orientation.
    EdgeVector start_state() const;
    EdgeVector end_state() const;

    /// Names used by oriented_edge for the two extra vertices.
    static const VertexId& start_prime();
    static const VertexId& end_prime();

  private:
    BipartiteGraph base_;
    VertexId s_;
    VertexId t_;
    double w0_;
    double w_end_;
    std::vector<std::vector<StarEntry>> stars_;
    std::vector<double> star_norm2_;
};

/// Unit s-t flow on base edges; values are signed along the A -> B orientation.
struct Flow {
    std::vector<double> values;
    VertexId source;
    VertexId sink;
    double value = 1.0;
};

struct ElectricFlow {
    Flow flow;
    double resistance = 0.0;
};

/// G x K2 together with its designated start vertex (s,0).
struct TensorK2 {
    BipartiteGraph graph;
    VertexId start;
};

ExtendedGraph extend(const BipartiteGraph& g, const VertexId& s, const VertexId& t, double w0 = 1.0,
                     double w_end = 1.0);

/// psi_u = sum over incident edges of sqrt(w_e)|e>. Throws NotAWalkVertexError for s', t'.
EdgeVector star_state(const ExtendedGraph& g, const VertexId& u);

/// Sum of base edge weights (dangling edges excluded).
double total_weight(const BipartiteGraph& g);

/// Unit electrical flow from s to t and the effective resistance R_{s,t}.
ElectricFlow electric_flow(const BipartiteGraph& g, const VertexId& s, const VertexId& t);

/// Net outflow of `flow` at every vertex, indexed densely.
std::vector<double> net_outflow(const BipartiteGraph& g, const std::vector<double>& flow);

/// Energy sum p_e^2 / w_e.
double flow_energy(const BipartiteGraph& g, const std::vector<double>& flow);

/// Vertex name of (u, side) in G x K2.
VertexId k2_vertex(const VertexId& u, int side);

TensorK2 tensor_k2(const WeightedGraph& g, const VertexId& s);
TensorK2 tensor_k2(const BipartiteGraph& g, const VertexId& s);

BipartiteGraph reweight(const BipartiteGraph& g, double alpha);

/// Connected components as lists of dense vertex indices.
std::vector<std::vector<std::size_t>> connected_components(const BipartiteGraph& g);

}  // namespace eqwalk
