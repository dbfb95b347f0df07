#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "eqwalk/graph.hpp"

namespace eqwalk {

/// Global phase of the walk step. Minus is the phase-flipped walk -U.
enum class Phase : int { Plus = 1, Minus = -1 };

inline double phase_sign(Phase p) { return static_cast<double>(static_cast<int>(p)); }

/// Reflection that negates span{psi_u : u in `part`} and fixes its complement.
/// Star states of one part have disjoint supports, so the projector is a plain
/// sum of rank-one terms.
EdgeVector reflect_part(const ExtendedGraph& g, Part part, const EdgeVector& x);

/// U = phase * R_B * R_A, applied matrix-free.
class WalkOperator {
  public:
    WalkOperator(ExtendedGraph graph, Phase phase);

    const ExtendedGraph& graph() const { return graph_; }
    Phase phase() const { return phase_; }
    Eigen::Index dim() const { return graph_.dim(); }

    EdgeVector apply(const EdgeVector& x) const;
    EdgeVector reflect(Part part, const EdgeVector& x) const { return reflect_part(graph_, part, x); }

    /// Dense matrix. Intended for desk-scale graphs.
    Eigen::MatrixXcd matrix() const;

  private:
    ExtendedGraph graph_;
    Phase phase_;
};

WalkOperator walk_step(const ExtendedGraph& g, Phase phase = Phase::Plus);

/// U^k x.
EdgeVector apply_walk(const WalkOperator& u, EdgeVector x, int k);

/// v0 = sum over base edges of sqrt(w_e)|e>.
EdgeVector catalyst_v0(const ExtendedGraph& g);

/// v1 = sum over base edges of p_e / sqrt(w_e) |e>, p the unit electrical s-t flow.
EdgeVector catalyst_v1(const ExtendedGraph& g);

/// Diffuse-and-shift realization U = S D S D on the two-register space |u>|v>.
///
/// A register value is either a vertex (dense index into the base graph) or the
/// reserved bottom element. Only pairs that can carry amplitude are indexed: (u,v)
/// for every ordered pair of adjacent vertices, plus (s,bot), (bot,s), (t,bot),
/// (bot,t). Pair (u,v) stands for the edge (u,0)-(v,1) of G x K2.
class DiffuseShiftWalk {
  public:
    static constexpr std::size_t kBottom = static_cast<std::size_t>(-1);

    struct Pair {
        std::size_t first;
        std::size_t second;
    };

    explicit DiffuseShiftWalk(ExtendedGraph graph);

    Eigen::Index dim() const { return static_cast<Eigen::Index>(pairs_.size()); }
    const std::vector<Pair>& pairs() const { return pairs_; }
    Eigen::Index index_of(std::size_t first, std::size_t second) const;

    /// D: reflection about psi_(u,0) = |u> (x) sum_v sqrt(w_uv)|v>, for all u.
    Eigen::VectorXcd diffuse(const Eigen::VectorXcd& x) const;
    /// S: swap of the two registers.
    Eigen::VectorXcd shift(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::MatrixXcd matrix() const;

    /// Pair indices of the component of (s,0), in extended edge order: the pair for
    /// edge index i of the graph sits at position i. Maps edge space -> pair space.
    std::vector<Eigen::Index> edge_identification() const;

    const ExtendedGraph& graph() const { return graph_; }

  private:
    ExtendedGraph graph_;
    std::vector<Pair> pairs_;
    std::vector<Eigen::Index> swap_;
    // Rows of D: for each first-register vertex, its pair indices and amplitudes.
    std::vector<std::vector<std::pair<Eigen::Index, double>>> rows_;
    std::vector<double> row_norm2_;
};

DiffuseShiftWalk diffuse_shift_step(const ExtendedGraph& g);

}  // namespace eqwalk
