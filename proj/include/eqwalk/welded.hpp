#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqwalk/graph.hpp"
#include "eqwalk/walk.hpp"

namespace eqwalk {

/// Where a welded-tree edge sits: layer L_level of the left tree, the middle
/// weld M, or layer R_level of the right tree. Layer 1 touches a root.
struct WeldedLayer {
    enum class Region { Left, Middle, Right };
    Region region;
    int level;
};

/// Two complete binary trees of depth n whose leaves are joined by an alternating
/// cycle. Vertex ids are heap indices ("l1" is the left root s, "r1" the right root
/// t); labels are the opaque bitstrings the oracle exposes.
struct WeldedTree {
    int depth = 0;
    BipartiteGraph graph;
    VertexId root_left;
    VertexId root_right;
    std::unordered_map<VertexId, std::string> labels;
    /// Layer of every base edge, parallel to graph.edges().
    std::vector<WeldedLayer> layers;

    /// G'_n with the given dangling weights.
    ExtendedGraph extended(double w0 = 1.0, double w_end = 1.0) const;

    /// Position of an edge layer along the 2n+1 layers from s to t (1-based).
    int line_position(const WeldedLayer& layer) const;
};

WeldedTree generate_welded(int n, std::uint64_t seed);

/// Black-box access to a welded tree: the entry label and neighbour queries only.
class WeldOracle {
  public:
    explicit WeldOracle(const WeldedTree& tree);

    const std::string& entry() const { return entry_; }
    int label_bits() const { return bits_; }

    /// Neighbour labels in sorted order; empty for a label that names no vertex.
    std::vector<std::string> neighbors(const std::string& label) const;

  private:
    std::string entry_;
    int bits_;
    std::unordered_map<std::string, std::vector<std::string>> adjacency_;
};

/// Amplitude (-1/2)^i on left levels 2i, 2i+1 and right levels 2i, 2i-1; the weld
/// is level n+1 of both trees. Throws ParityError for even depth.
EdgeVector catalyst_v2(const WeldedTree& tree);

/// Mirror image of v2.
EdgeVector catalyst_v3(const WeldedTree& tree);

struct WeldedReport {
    int depth = 0;
    /// ||(v2 + v3)/2||^2 of the explicit catalyst.
    double complexity = 0.0;
    /// ||(-U)(|s> + c) - (|t> + c)||.
    double residual = 0.0;
    /// 3(n + 1).
    double bound = 0.0;
    bool passed = false;
};

/// Checks the phase-flipped transduction |s> -> |t> with catalyst (v2 + v3)/2.
WeldedReport verify_welded(int n, std::uint64_t seed, double tolerance = 1e-9);

}  // namespace eqwalk
