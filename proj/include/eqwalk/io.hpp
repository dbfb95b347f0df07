#pragma once

#include <optional>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "eqwalk/graph.hpp"
#include "eqwalk/hierarchical.hpp"
#include "eqwalk/transducer.hpp"

namespace eqwalk {

inline constexpr const char* kVersion = "0.3.0";

/// Graph interchange document. Optional blocks: welded-tree labels and the
/// hierarchical profile the graph was built from.
struct GraphDocument {
    ExtendedGraph graph;
    std::optional<int> depth;
    std::unordered_map<VertexId, std::string> labels;
    std::optional<HierarchicalSpec> hierarchical;
};

nlohmann::json to_json(const GraphDocument& doc);
/// Throws IoError on a malformed document; graph errors propagate unchanged.
GraphDocument graph_from_json(const nlohmann::json& j);

void write_graph_file(const std::string& path, const GraphDocument& doc);
GraphDocument read_graph_file(const std::string& path);

/// {"<edge index>": [re, im], ...}
nlohmann::json edge_vector_to_json(const EdgeVector& x);
EdgeVector edge_vector_from_json(const nlohmann::json& j, Eigen::Index dim);

/// {"tau": [[re, im], ...], "complexity": c, "residual": r}
nlohmann::json to_json(const TransductionResult& r);

/// Hierarchical spec file: {"sizes": [...], "layer_edges": [...], "w0": x} with an
/// optional "w_end" override.
struct SpecDocument {
    HierarchicalSpec spec;
    Rational w0 = 1;
    std::optional<Rational> w_end;
};

nlohmann::json to_json(const SpecDocument& doc);
/// Validates the spec; an explicit w_end must balance the profile or
/// UnbalancedWeightsError is thrown.
SpecDocument spec_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);

}  // namespace eqwalk
