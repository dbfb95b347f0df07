#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "eqwalk/graph.hpp"
#include "eqwalk/walk.hpp"

namespace eqwalk {

/// Exact rational used for layer weights and the C_k profile. Every finite double
/// converts to it exactly.
using Rational = boost::multiprecision::cpp_rational;

enum class Family { Welded, Glued, Hypercube };

std::string family_name(Family f);
/// Throws DomainError for an unknown name.
Family parse_family(const std::string& name);

/// Layer profile of a 1-D hierarchical graph: vertex layers S_0..S_n with
/// |S_0| = |S_n| = 1 and biregular edge layers L_1..L_n.
struct HierarchicalSpec {
    std::vector<std::int64_t> sizes;
    std::vector<std::int64_t> layer_edges;
    /// Family this spec came from, if any; enables canonical wiring.
    std::optional<Family> family;
    int family_size = 0;
    /// Trailing unit layers appended to make the layer count odd.
    int augmented_layers = 0;

    int layers() const { return static_cast<int>(layer_edges.size()); }
    /// d_{i-1}^+ : degree of an S_{i-1} vertex into L_i (1 <= i <= n).
    std::int64_t up_degree(int i) const;
    /// d_i^- : degree of an S_i vertex into L_i (1 <= i <= n).
    std::int64_t down_degree(int i) const;
};

/// Checks |S_{i-1}| d_{i-1}^+ = |S_i| d_i^- = |L_i| with integer degrees. Throws
/// ConstraintViolationError naming the first failing layer.
const HierarchicalSpec& validate_spec(const HierarchicalSpec& spec);

HierarchicalSpec family_spec(Family kind, int size);

/// Appends one unit layer when n is even; odd input is returned unchanged with a
/// warning on std::clog.
HierarchicalSpec augment_even(const HierarchicalSpec& spec);

/// C_k = prod_{i=1}^k (W_{i-1}/W_i)^{(-1)^i} for k = 1..m, given W_0..W_m.
struct CProfile {
    std::vector<Rational> values;

    std::vector<double> as_double() const;
    /// 1/2 sum_{k=1}^{n} (C_k + 1/C_k) over the first n values.
    Rational complexity_bound(int n) const;
};

CProfile c_profile(std::span<const Rational> weights);
CProfile c_profile(std::span<const double> weights);

/// The W_{n+1} with C_{n+1} = 1 for the given W_0 and interior W_1..W_n.
Rational balance_terminal_weight(const Rational& w0, std::span<const Rational> interior);
double balance_terminal_weight(double w0, std::span<const double> interior);

/// Weighted path s_0 - s_1 - ... - s_n with dangling weights W_0, W_{n+1}.
///
/// Layer coordinates k = 0..n+1 stand for |L_k>; in the path's edge space |L_0> and
/// |L_{n+1}> are the dangling edges (indices 0 and 1) and |L_k> sits at index k + 1.
struct FlattenedLine {
    std::vector<Rational> weights;

    int layers() const { return static_cast<int>(weights.size()) - 2; }
    std::vector<double> weights_double() const;
    CProfile profile() const { return c_profile(std::span<const Rational>(weights)); }

    /// Throws SideMismatchError when n is even (s_n would fall in A).
    ExtendedGraph graph() const;
    static Eigen::Index edge_index(int layer, int n);
    EdgeVector to_edges(const Eigen::VectorXd& by_layer) const;
    Eigen::VectorXd to_layers(const EdgeVector& x) const;
};

/// A concrete realization of a spec. Vertex layer i has ids in `vertex_layers[i]`.
struct HierarchicalGraph {
    HierarchicalSpec spec;
    BipartiteGraph graph;
    std::vector<std::vector<VertexId>> vertex_layers;
    /// 1-based layer of each base edge.
    std::vector<int> edge_layer;

    const VertexId& s() const { return vertex_layers.front().front(); }
    const VertexId& t() const { return vertex_layers.back().front(); }
    /// The terminal of the spec before augmentation.
    const VertexId& answer() const;

    ExtendedGraph extended(double w0, double w_end) const;
    /// Columns |L_0>, ..., |L_{n+1}> in the extended edge space, ordered like the
    /// flattened path's edge space.
    Eigen::MatrixXd layer_isometry() const;
};

enum class Wiring { Random, Canonical };

/// Seeded configuration-model realization (or the family's canonical graph).
/// Throws SamplingFailureError when parallel-edge rejection runs out of retries.
HierarchicalGraph instantiate(const HierarchicalSpec& spec, std::uint64_t seed, Wiring wiring = Wiring::Random);

FlattenedLine flatten(const HierarchicalGraph& g, const Rational& w0, const Rational& w_end);
/// Flattens the spec directly; W_{n+1} is balanced unless given.
FlattenedLine flatten(const HierarchicalSpec& spec, const Rational& w0 = 1,
                      const std::optional<Rational>& w_end = std::nullopt);

/// v2 and v3 in layer coordinates (entries 0 and n+1 are zero).
struct HierCatalysts {
    Eigen::VectorXd v2;
    Eigen::VectorXd v3;
};

/// Throws ParityError for even n and UnbalancedWeightsError unless C_{n+1} = 1.
HierCatalysts hier_catalysts(const FlattenedLine& line);

/// (-1)^{(n+1)/2}.
int terminal_sign(int n);

struct HierarchicalReport {
    int layers = 0;
    bool augmented = false;
    double w_end = 0.0;
    /// ||(v2 + v3)/2||^2.
    double complexity = 0.0;
    /// Minimum-norm complexity from the exact solver on the flattened line.
    double min_norm_complexity = 0.0;
    /// <t't| tau> from the exact solver.
    double tau_overlap = 0.0;
    double residual_flat = 0.0;
    std::optional<double> residual_full;
    double solve_residual = 0.0;
    double bound = 0.0;
    int sign = 1;
    bool passed = false;
};

/// Checks (-U)(|s> + c) = sign |t> + c with c = (v2 + v3)/2 on the flattened line
/// and, below `full_edge_limit` edges, on a seeded full realization.
HierarchicalReport verify_hierarchical(const HierarchicalSpec& spec, const Rational& w0, std::uint64_t seed,
                                       double tolerance = 1e-9, std::size_t full_edge_limit = 100000);

}  // namespace eqwalk
