#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eqwalk/classical.hpp"
#include "eqwalk/errors.hpp"
#include "eqwalk/hierarchical.hpp"
#include "eqwalk/random_graphs.hpp"
#include "eqwalk/transducer.hpp"
#include "eqwalk/welded.hpp"

namespace eqwalk::cli {

using nlohmann::json;

namespace {

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Auto:
            return "auto";
        case Backend::Full:
            return "full";
        case Backend::Flat:
            return "flat";
    }
    return "auto";
}

Phase to_phase(int p) {
    if (p == 1) return Phase::Plus;
    if (p == -1) return Phase::Minus;
    throw DomainError("phase must be +1 or -1");
}

// Writes `body` to --out when given, otherwise to `out`.
void emit(const ExperimentConfig& cfg, const std::string& body, std::ostream& out) {
    if (cfg.out.empty()) {
        out << body;
        return;
    }
    std::ofstream file(cfg.out);
    if (!file) {
        throw IoError("cannot open '" + cfg.out + "' for writing");
    }
    file << body;
    if (!file) {
        throw IoError("failed writing '" + cfg.out + "'");
    }
}

std::string csv_preamble(const ExperimentConfig& cfg) {
    return "# eqwalk " + std::string(kVersion) + "\n# config: " + cfg.to_json().dump() + "\n";
}

GraphDocument load_document(const ExperimentConfig& cfg) {
    if (!cfg.graph.empty()) {
        return read_graph_file(cfg.graph);
    }
    if (cfg.family.empty()) {
        throw DomainError("either --graph or --family/--size is required");
    }
    return family_document(cfg.family, cfg.size, cfg.seed);
}

// Transducer for the requested backend plus the name of the backend used.
std::pair<Transducer, std::string> build_transducer(const GraphDocument& doc, Backend backend, Phase phase) {
    const bool flat = backend == Backend::Flat || (backend == Backend::Auto && doc.hierarchical.has_value());
    if (!flat) {
        return {Transducer(walk_step(doc.graph, phase)), "full"};
    }
    if (!doc.hierarchical) {
        throw DomainError("the flattened backend needs a graph that carries a hierarchical spec");
    }
    const FlattenedLine line = flatten(*doc.hierarchical, Rational(doc.graph.w0()), Rational(doc.graph.w_end()));
    return {Transducer(walk_step(line.graph(), phase)), "flat"};
}

struct Check {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;

    bool ok() const { return error <= tolerance; }
};

void merge(std::vector<Check>& checks, const std::string& name, double error, double tolerance) {
    for (auto& c : checks) {
        if (c.name == name) {
            c.error = std::max(c.error, error);
            return;
        }
    }
    checks.push_back({name, error, tolerance});
}

void electric_checks(const ExtendedGraph& g, bool corrupt, std::vector<Check>& checks) {
    const EdgeVector s = g.start_state();
    const EdgeVector t = g.end_state();
    const EdgeVector v0 = catalyst_v0(g);

    const EdgeVector x = s + v0 - t;
    const EdgeVector ya = reflect_part(g, Part::A, x);
    const EdgeVector yb = reflect_part(g, Part::B, ya);
    merge(checks, "sum-catalyst-chain", std::max((ya - (-s - v0 - t)).norm(), (yb - (-s + v0 + t)).norm()), 1e-10);

    const EdgeVector v1 = catalyst_v1(g);
    EdgeVector checked = v1;
    if (corrupt) {
        // Misweight the edge carrying the most flow.
        Eigen::Index worst = 0;
        v1.cwiseAbs().maxCoeff(&worst);
        checked[worst] /= std::sqrt(1.5);
    }
    const EdgeVector f = -s + checked - t;
    merge(checks, "flow-catalyst-fixed",
          std::max((reflect_part(g, Part::A, f) - f).norm(), (reflect_part(g, Part::B, f) - f).norm()), 1e-10);

    const EdgeVector c = 0.5 * (v0 - v1);
    const WalkOperator u = walk_step(g, Phase::Plus);
    merge(checks, "electric-transduction", (u.apply(s + c) - (t + c)).norm(), 1e-10);

    if (g.base().num_edges() <= 60) {
        Eigen::VectorXcd xi(2);
        xi << 1.0, 0.0;
        const auto solved = solve_transduction(Transducer(u), xi, 1e-8);
        const double bound = 0.5 * (total_weight(g.base()) + electric_flow(g.base(), g.s(), g.t()).resistance);
        merge(checks, "electric-complexity-bound", std::max(0.0, solved.complexity - bound), 1e-9);
    }
}

void welded_checks(int n, std::uint64_t seed, std::vector<Check>& checks) {
    const WeldedTree tree = generate_welded(n, seed);
    const ExtendedGraph g = tree.extended();
    const EdgeVector s = g.start_state();
    const EdgeVector t = g.end_state();
    const EdgeVector v2 = catalyst_v2(tree);
    const EdgeVector v3 = catalyst_v3(tree);

    const EdgeVector x2 = s + v2 - t;
    const EdgeVector a2 = reflect_part(g, Part::A, x2);
    const EdgeVector b2 = reflect_part(g, Part::B, a2);
    merge(checks, "v2-chain", std::max((a2 - (-s - v2 - t)).norm(), (b2 - a2).norm()), 1e-10);

    const EdgeVector x3 = s + v3 + t;
    const EdgeVector a3 = reflect_part(g, Part::A, x3);
    const EdgeVector b3 = reflect_part(g, Part::B, a3);
    merge(checks, "v3-chain", std::max((a3 - x3).norm(), (b3 - (s - v3 - t)).norm()), 1e-10);

    const WeldedReport report = verify_welded(n, seed);
    merge(checks, "phase-flipped-transduction", report.residual, 1e-9);
    merge(checks, "catalyst-norm-bound", std::max(0.0, std::max(v2.squaredNorm(), report.complexity) - report.bound),
          1e-9);
}

void hierarchical_checks(const HierarchicalSpec& input, std::uint64_t seed, std::vector<Check>& checks) {
    const HierarchicalSpec spec = input.layers() % 2 == 0 ? augment_even(input) : input;
    const FlattenedLine line = flatten(spec);
    const int n = line.layers();
    const auto weights = line.weights_double();
    const HierarchicalGraph hg = instantiate(spec, seed);
    const ExtendedGraph full = hg.extended(weights.front(), weights.back());
    const Eigen::MatrixXd iso = hg.layer_isometry();

    double star_error = 0.0;
    for (int i = 0; i <= n; ++i) {
        EdgeVector sum = EdgeVector::Zero(full.dim());
        for (const auto& u : hg.vertex_layers[static_cast<std::size_t>(i)]) {
            sum += star_state(full, u);
        }
        const Eigen::VectorXd expected =
            std::sqrt(weights[static_cast<std::size_t>(i)]) * iso.col(FlattenedLine::edge_index(i, n)) +
            std::sqrt(weights[static_cast<std::size_t>(i) + 1]) * iso.col(FlattenedLine::edge_index(i + 1, n));
        star_error = std::max(star_error, (sum - expected.cast<std::complex<double>>()).norm());
    }
    merge(checks, "layer-star-sum", star_error, 1e-10);

    const Eigen::MatrixXcd isoc = iso.cast<std::complex<double>>();
    const Eigen::MatrixXcd lhs = walk_step(full, Phase::Plus).matrix() * isoc;
    const Eigen::MatrixXcd rhs = isoc * walk_step(line.graph(), Phase::Plus).matrix();
    merge(checks, "flattening-invariance", (lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);

    const HierarchicalReport report = verify_hierarchical(spec, Rational(1), seed);
    const double err = report.passed ? std::max(report.residual_flat, report.residual_full.value_or(0.0)) : 1.0;
    merge(checks, "hierarchical-transduction", err, 1e-9);
}

}  // namespace

json ExperimentConfig::to_json() const {
    json j;
    j["command"] = command;
    if (!graph.empty()) j["graph"] = graph;
    if (!family.empty()) {
        j["family"] = family;
        j["size"] = size;
    }
    j["seed"] = seed;
    j["phase"] = phase;
    if (!ks.empty()) j["K"] = ks;
    j["steps"] = steps;
    j["trials"] = trials;
    j["tolerance"] = tolerance;
    j["backend"] = backend_name(backend);
    if (command == "verify") {
        j["scope"] = scope;
        j["corrupt"] = corrupt;
    }
    j["version"] = kVersion;
    return j;
}

GraphDocument family_document(const std::string& family, int size, std::uint64_t seed) {
    const Family kind = parse_family(family);
    HierarchicalSpec spec = family_spec(kind, size);
    if (spec.layers() % 2 == 0) {
        spec = augment_even(spec);
    }
    const double w_end = flatten(spec).weights.back().convert_to<double>();
    if (kind == Family::Welded) {
        WeldedTree tree = generate_welded(size, seed);
        return GraphDocument{tree.extended(1.0, w_end), tree.depth, std::move(tree.labels), spec};
    }
    const HierarchicalGraph hg = instantiate(spec, seed, Wiring::Canonical);
    return GraphDocument{hg.extended(1.0, w_end), std::nullopt, {}, spec};
}

int cmd_gen(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.family.empty()) {
        throw DomainError("gen needs --family and --size");
    }
    const GraphDocument doc = family_document(cfg.family, cfg.size, cfg.seed);
    json j = to_json(doc);
    j["config"] = cfg.to_json();
    j["version"] = kVersion;
    if (cfg.out.empty()) {
        out << j.dump(2) << '\n';
    } else {
        emit(cfg, j.dump(2) + "\n", out);
        out << "vertices " << doc.graph.base().num_vertices() << " edges " << doc.graph.base().num_edges()
            << '\n';
    }
    return kOk;
}

int cmd_hit(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.ks.empty()) {
        throw DomainError("hit needs at least one --K");
    }
    const GraphDocument doc = load_document(cfg);
    const auto [transducer, backend] = build_transducer(doc, cfg.backend, to_phase(cfg.phase));
    Eigen::VectorXcd xi(2);
    xi << 1.0, 0.0;
    Eigen::VectorXcd target(2);
    target << 0.0, 1.0;

    std::ostringstream csv;
    csv << csv_preamble(cfg) << "# backend: " << backend << "\n";
    csv << "k,success_probability\n";
    csv << std::setprecision(17);
    for (int k : cfg.ks) {
        const Eigen::VectorXcd tau = run_iterative(transducer, xi, k);
        csv << k << ',' << success_probability(tau, target) << '\n';
    }
    emit(cfg, csv.str(), out);
    return kOk;
}

int cmd_classical(const ExperimentConfig& cfg, std::ostream& out) {
    const GraphDocument doc = load_document(cfg);
    const auto hits =
        classical_hitting(doc.graph.base(), doc.graph.s(), doc.graph.t(), cfg.steps, cfg.trials, cfg.seed);
    std::ostringstream csv;
    csv << csv_preamble(cfg) << "trial,hit_step\n";
    for (std::size_t i = 0; i < hits.size(); ++i) {
        csv << i << ',';
        if (hits[i]) {
            csv << *hits[i];
        } else {
            csv << "timeout";
        }
        csv << '\n';
    }
    emit(cfg, csv.str(), out);
    return kOk;
}

int cmd_transduce(const ExperimentConfig& cfg, std::ostream& out) {
    const GraphDocument doc = load_document(cfg);
    const auto [transducer, backend] = build_transducer(doc, cfg.backend, to_phase(cfg.phase));
    Eigen::VectorXcd xi(2);
    xi << 1.0, 0.0;
    const TransductionResult result = solve_transduction(transducer, xi, cfg.tolerance);
    json j = to_json(result);
    j["overlap"] = json::array({result.tau[1].real(), result.tau[1].imag()});
    j["overlap_magnitude"] = std::abs(result.tau[1]);
    j["backend"] = backend;
    j["config"] = cfg.to_json();
    j["version"] = kVersion;
    emit(cfg, j.dump(2) + "\n", out);
    return kOk;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
    const std::string& scope = cfg.scope;
    if (scope != "all" && scope != "welded" && scope != "hierarchical" && scope != "electric") {
        throw DomainError("unknown scope '" + scope + "'");
    }
    std::vector<Check> checks;
    if (scope == "all" || scope == "electric") {
        for (std::uint64_t i = 0; i < 20; ++i) {
            electric_checks(random_extended_graph(cfg.seed * 1000 + i, 60), cfg.corrupt, checks);
        }
        electric_checks(generate_welded(3, cfg.seed).extended(), cfg.corrupt, checks);
    }
    if (scope == "all" || scope == "welded") {
        for (int n : {1, 3, 5, 7}) {
            welded_checks(n, cfg.seed, checks);
        }
    }
    if (scope == "all" || scope == "hierarchical") {
        for (const auto& spec : {family_spec(Family::Welded, 3), family_spec(Family::Welded, 2),
                                 family_spec(Family::Hypercube, 3), family_spec(Family::Hypercube, 4),
                                 family_spec(Family::Glued, 2)}) {
            hierarchical_checks(spec, cfg.seed, checks);
        }
    }

    std::ostringstream report;
    report << csv_preamble(cfg) << "identity,status,max_error,tolerance\n";
    bool all_ok = true;
    for (const auto& c : checks) {
        all_ok = all_ok && c.ok();
        report << c.name << ',' << (c.ok() ? "PASS" : "FAIL") << ',' << std::scientific << std::setprecision(3)
               << c.error << ',' << c.tolerance << '\n';
    }
    emit(cfg, report.str(), out);
    if (!cfg.out.empty()) {
        for (const auto& c : checks) {
            if (!c.ok()) out << "FAIL " << c.name << '\n';
        }
    }
    return all_ok ? kOk : kVerificationFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Electric quantum walk simulator"};
    app.require_subcommand(1);
    ExperimentConfig cfg;
    std::string backend = "auto";

    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--graph", cfg.graph, "Graph JSON file");
        sub->add_option("--family", cfg.family, "welded, glued or hypercube")
            ->check(CLI::IsMember({"welded", "glued", "hypercube"}));
        sub->add_option("--size", cfg.size, "Family size parameter");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_option("--out", cfg.out, "Output path (stdout when omitted)");
        sub->add_option("--tolerance", cfg.tolerance, "Residual tolerance");
    };

    auto* gen = app.add_subcommand("gen", "Generate a graph file");
    add_source(gen);
    add_common(gen);

    auto* hit = app.add_subcommand("hit", "Success probability of the iterative transduction");
    add_source(hit);
    add_common(hit);
    hit->add_option("--phase", cfg.phase, "+1 or -1")->check(CLI::IsMember({1, -1}));
    hit->add_option("--K", cfg.ks, "Controlled applications (repeatable)")->required();
    hit->add_option("--backend", backend, "auto, full or flat")->check(CLI::IsMember({"auto", "full", "flat"}));

    auto* verify = app.add_subcommand("verify", "Check the walk identities");
    add_common(verify);
    verify->add_option("--scope", cfg.scope, "all, welded, hierarchical or electric")
        ->check(CLI::IsMember({"all", "welded", "hierarchical", "electric"}));
    verify->add_flag("--corrupt", cfg.corrupt, "Negative control: perturb one weight in the flow solve");

    auto* classical = app.add_subcommand("classical", "Classical random-walk hitting baseline");
    add_source(classical);
    add_common(classical);
    classical->add_option("--steps", cfg.steps, "Step budget per trial");
    classical->add_option("--trials", cfg.trials, "Number of trials");

    auto* transduce = app.add_subcommand("transduce", "Exact transduction report");
    add_source(transduce);
    add_common(transduce);
    transduce->add_option("--phase", cfg.phase, "+1 or -1")->check(CLI::IsMember({1, -1}));
    transduce->add_option("--backend", backend, "auto, full or flat")
        ->check(CLI::IsMember({"auto", "full", "flat"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    cfg.backend = backend == "full" ? Backend::Full : backend == "flat" ? Backend::Flat : Backend::Auto;
    try {
        if (gen->parsed()) {
            cfg.command = "gen";
            return cmd_gen(cfg, out);
        }
        if (hit->parsed()) {
            cfg.command = "hit";
            return cmd_hit(cfg, out);
        }
        if (verify->parsed()) {
            cfg.command = "verify";
            return cmd_verify(cfg, out);
        }
        if (classical->parsed()) {
            cfg.command = "classical";
            return cmd_classical(cfg, out);
        }
        cfg.command = "transduce";
        return cmd_transduce(cfg, out);
    } catch (const NumericalFailureError& e) {
        err << "error: " << e.what() << '\n';
        return kVerificationFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace eqwalk::cli
