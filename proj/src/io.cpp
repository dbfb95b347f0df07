#include "eqwalk/io.hpp"

#include <fstream>

#include "eqwalk/errors.hpp"

namespace eqwalk {

using nlohmann::json;

namespace {

json spec_fields(const HierarchicalSpec& spec) {
    json j;
    j["sizes"] = spec.sizes;
    j["layer_edges"] = spec.layer_edges;
    if (spec.family) {
        j["family"] = family_name(*spec.family);
        j["size"] = spec.family_size;
    }
    if (spec.augmented_layers > 0) {
        j["augmented_layers"] = spec.augmented_layers;
    }
    return j;
}

HierarchicalSpec spec_from_fields(const json& j) {
    HierarchicalSpec spec;
    spec.sizes = j.at("sizes").get<std::vector<std::int64_t>>();
    spec.layer_edges = j.at("layer_edges").get<std::vector<std::int64_t>>();
    if (j.contains("family")) {
        spec.family = parse_family(j.at("family").get<std::string>());
        spec.family_size = j.at("size").get<int>();
    }
    spec.augmented_layers = j.value("augmented_layers", 0);
    return spec;
}

}  // namespace

json to_json(const GraphDocument& doc) {
    const auto& g = doc.graph;
    json j;
    j["a"] = g.base().part_a();
    j["b"] = g.base().part_b();
    json edges = json::array();
    for (const auto& e : g.base().edges()) {
        edges.push_back(json::array({e.u, e.v, e.weight}));
    }
    j["edges"] = std::move(edges);
    j["s"] = g.s();
    j["t"] = g.t();
    j["w0"] = g.w0();
    j["w_end"] = g.w_end();
    if (doc.depth) {
        j["depth"] = *doc.depth;
        json labels = json::object();
        for (const auto& v : g.base().part_a()) {
            if (auto it = doc.labels.find(v); it != doc.labels.end()) labels[v] = it->second;
        }
        for (const auto& v : g.base().part_b()) {
            if (auto it = doc.labels.find(v); it != doc.labels.end()) labels[v] = it->second;
        }
        j["labels"] = std::move(labels);
    }
    if (doc.hierarchical) {
        j["hierarchical"] = spec_fields(*doc.hierarchical);
    }
    return j;
}

GraphDocument graph_from_json(const json& j) {
    try {
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) {
                throw IoError("edge entries must be [u, v, weight]");
            }
            edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<double>()});
        }
        BipartiteGraph base(j.at("a").get<std::vector<VertexId>>(), j.at("b").get<std::vector<VertexId>>(),
                            std::move(edges));
        GraphDocument doc{ExtendedGraph(std::move(base), j.at("s").get<std::string>(), j.at("t").get<std::string>(),
                                        j.value("w0", 1.0), j.value("w_end", 1.0)),
                          std::nullopt,
                          {},
                          std::nullopt};
        if (j.contains("depth")) {
            doc.depth = j.at("depth").get<int>();
            if (j.contains("labels")) {
                doc.labels = j.at("labels").get<std::unordered_map<VertexId, std::string>>();
            }
        }
        if (j.contains("hierarchical")) {
            doc.hierarchical = spec_from_fields(j.at("hierarchical"));
        }
        return doc;
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed graph document: ") + ex.what());
    }
}

void write_graph_file(const std::string& path, const GraphDocument& doc) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << to_json(doc).dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& ex) {
        throw IoError("'" + path + "' is not valid JSON: " + ex.what());
    }
}

GraphDocument read_graph_file(const std::string& path) { return graph_from_json(read_json_file(path)); }

json edge_vector_to_json(const EdgeVector& x) {
    json j = json::object();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        j[std::to_string(i)] = json::array({x[i].real(), x[i].imag()});
    }
    return j;
}

EdgeVector edge_vector_from_json(const json& j, Eigen::Index dim) {
    EdgeVector x = EdgeVector::Zero(dim);
    try {
        for (const auto& [key, value] : j.items()) {
            const long index = std::stol(key);
            if (index < 0 || index >= dim) {
                throw IoError("edge id " + key + " out of range");
            }
            x[index] = {value.at(0).get<double>(), value.at(1).get<double>()};
        }
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed edge vector: ") + ex.what());
    } catch (const std::invalid_argument&) {
        throw IoError("edge ids must be integers");
    }
    return x;
}

json to_json(const TransductionResult& r) {
    json tau = json::array();
    for (Eigen::Index i = 0; i < r.tau.size(); ++i) {
        tau.push_back(json::array({r.tau[i].real(), r.tau[i].imag()}));
    }
    return {{"tau", tau}, {"complexity", r.complexity}, {"residual", r.residual}};
}

json to_json(const SpecDocument& doc) {
    json j = spec_fields(doc.spec);
    j["w0"] = doc.w0.convert_to<double>();
    if (doc.w_end) {
        j["w_end"] = doc.w_end->convert_to<double>();
    }
    return j;
}

SpecDocument spec_from_json(const json& j) {
    SpecDocument doc;
    try {
        doc.spec = spec_from_fields(j);
        doc.w0 = Rational(j.value("w0", 1.0));
        if (j.contains("w_end")) {
            doc.w_end = Rational(j.at("w_end").get<double>());
        }
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed spec document: ") + ex.what());
    }
    validate_spec(doc.spec);
    if (doc.w_end) {
        const FlattenedLine line = flatten(doc.spec, doc.w0, doc.w_end);
        if (line.profile().values.back() != 1) {
            throw UnbalancedWeightsError("w_end override does not balance the profile (C_{n+1} = " +
                                         line.profile().values.back().str() + ")");
        }
    }
    return doc;
}

}  // namespace eqwalk
