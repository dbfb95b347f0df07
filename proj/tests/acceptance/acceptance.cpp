// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every tolerance and runtime budget is pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eqwalk/classical.hpp"
#include "eqwalk/hierarchical.hpp"
#include "eqwalk/random_graphs.hpp"
#include "eqwalk/transducer.hpp"
#include "eqwalk/walk.hpp"
#include "eqwalk/welded.hpp"
#include "support/oracles.hpp"

using namespace eqwalk;

namespace {

constexpr double kExactTol = 1e-9;
constexpr double kOrthoTol = 1e-8;
constexpr double kIdentityTol = 1e-10;
constexpr double kTrajectoryTol = 1e-8;

struct Check {
    bool ok = true;
    std::ostringstream notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (ok) notes << "failed: ";
            else notes << "; ";
            notes << what;
            ok = false;
        }
    }
};

Eigen::VectorXcd unit(Eigen::Index dim, Eigen::Index i) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
    x[i] = 1.0;
    return x;
}

const Eigen::VectorXcd kStart = unit(2, 0);
const Eigen::VectorXcd kTarget = unit(2, 1);

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

double transduction_residual(const Transducer& s, const TransductionResult& r, const Eigen::VectorXcd& xi) {
    Eigen::VectorXcd in(s.dim());
    in << xi, r.catalyst;
    Eigen::VectorXcd out(s.dim());
    out << r.tau, r.catalyst;
    return (s.apply(in) - out).norm();
}

FlattenedLine welded_line(int n) { return flatten(family_spec(Family::Welded, n)); }

// Exact complexity of the welded walk, computed on the flattened line (the minimum
// norm catalyst lies in the layer-symmetric subspace).
double welded_complexity(int n, Phase phase) {
    return solve_transduction(Transducer(walk_step(welded_line(n).graph(), phase)), kStart).complexity;
}

double welded_success(int n, Phase phase, int k) {
    const Transducer s(walk_step(welded_line(n).graph(), phase));
    return success_probability(run_iterative(s, kStart, k), kTarget);
}

// ---------------------------------------------------------------------------

void exactness(Check& c) {
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<int> dim_dist(8, 32);
    std::normal_distribution<double> normal;
    double worst_residual = 0.0;
    double worst_ortho = 0.0;

    for (int trial = 0; trial < 50; ++trial) {
        const int dim = dim_dist(rng);
        const int h = std::uniform_int_distribution<int>(1, dim - 1)(rng);
        const Transducer s(oracle::haar_unitary(dim, rng), h);
        const int m = std::min(h, 4);
        Eigen::MatrixXcd inputs(h, m);
        for (Eigen::Index i = 0; i < inputs.size(); ++i) inputs.data()[i] = {normal(rng), normal(rng)};
        inputs = Eigen::HouseholderQR<Eigen::MatrixXcd>(inputs).householderQ() * Eigen::MatrixXcd::Identity(h, m);
        Eigen::MatrixXcd taus(h, m);
        for (int i = 0; i < m; ++i) {
            const auto r = solve_transduction(s, inputs.col(i), kExactTol);
            worst_residual = std::max(worst_residual, transduction_residual(s, r, inputs.col(i)));
            taus.col(i) = r.tau;
        }
        worst_ortho = std::max(worst_ortho,
                               (taus.adjoint() * taus - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff());
    }

    std::vector<ExtendedGraph> graphs;
    for (std::uint64_t seed = 0; seed < 20; ++seed) graphs.push_back(random_extended_graph(seed, 60));
    for (int n : {1, 3, 5}) graphs.push_back(generate_welded(n, 1).extended());
    for (const auto& spec : {family_spec(Family::Welded, 3), family_spec(Family::Welded, 2),
                             family_spec(Family::Hypercube, 3)}) {
        graphs.push_back(flatten(spec).graph());
    }
    for (const auto& g : graphs) {
        for (Phase phase : {Phase::Plus, Phase::Minus}) {
            const Transducer s(walk_step(g, phase));
            const auto a = solve_transduction(s, kStart, kExactTol);
            const auto b = solve_transduction(s, kTarget, kExactTol);
            worst_residual = std::max({worst_residual, transduction_residual(s, a, kStart),
                                       transduction_residual(s, b, kTarget)});
            Eigen::Matrix2cd taus;
            taus << a.tau, b.tau;
            worst_ortho =
                std::max(worst_ortho, (taus.adjoint() * taus - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
        }
    }
    c.expect(worst_residual <= kExactTol, "residual " + fmt(worst_residual));
    c.expect(worst_ortho <= kOrthoTol, "orthonormality defect " + fmt(worst_ortho));
    c.notes << (c.ok ? "" : "; ") << "max residual " << fmt(worst_residual) << ", max orthonormality defect "
            << fmt(worst_ortho) << " over 50 random unitaries and " << 2 * graphs.size() << " walk operators";
}

void electric(Check& c) {
    std::vector<ExtendedGraph> graphs;
    for (std::uint64_t seed = 0; seed < 20; ++seed) graphs.push_back(random_extended_graph(1000 + seed, 60));
    graphs.push_back(generate_welded(3, 1).extended());
    double worst_identity = 0.0;
    double worst_gap = -1e300;
    double welded_bound = 0.0;
    for (const auto& g : graphs) {
        c.expect(g.base().num_edges() <= 60, "graph exceeds 60 edges");
        const EdgeVector cat = 0.5 * (catalyst_v0(g) - catalyst_v1(g));
        const WalkOperator u = walk_step(g, Phase::Plus);
        worst_identity = std::max(worst_identity, (u.apply(g.start_state() + cat) - (g.end_state() + cat)).norm());
        const double bound =
            0.5 * (total_weight(g.base()) + electric_flow(g.base(), g.s(), g.t()).resistance);
        const double complexity = solve_transduction(Transducer(u), kStart, kExactTol).complexity;
        worst_gap = std::max(worst_gap, complexity - bound);
        welded_bound = bound;
    }
    c.expect(worst_identity <= kIdentityTol, "identity error " + fmt(worst_identity));
    c.expect(worst_gap <= 1e-9, "complexity exceeds bound by " + fmt(worst_gap));
    c.expect(std::abs(welded_bound - 22.90625) <= 1e-12, "welded bound " + fmt(welded_bound));
    c.notes << (c.ok ? "" : "; ") << "identity error " << fmt(worst_identity) << ", max(complexity - bound) "
            << fmt(worst_gap) << ", welded n=3 bound " << fmt(welded_bound);
}

void headline(Check& c) {
    double worst_tau = 0.0;
    double worst_identity = 0.0;
    double max_ratio = 0.0;
    double explicit_n3 = 0.0;
    for (int n : {1, 3, 5, 7}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const WeldedTree tree = generate_welded(n, seed);
            const ExtendedGraph g = tree.extended();
            const WalkOperator u = walk_step(g, Phase::Minus);
            const auto r = solve_transduction(Transducer(u), kStart, kExactTol);
            worst_tau = std::max(worst_tau, (r.tau - kTarget).norm());
            max_ratio = std::max(max_ratio, r.complexity / (3.0 * (n + 1)));

            const EdgeVector cat = 0.5 * (catalyst_v2(tree) + catalyst_v3(tree));
            worst_identity = std::max(worst_identity, (u.apply(g.start_state() + cat) - (g.end_state() + cat)).norm());
            if (n == 3) explicit_n3 = cat.squaredNorm();
        }
    }
    c.expect(worst_tau <= kExactTol, "tau error " + fmt(worst_tau));
    c.expect(max_ratio <= 1.0 + 1e-12, "complexity above 3(n+1)");
    c.expect(worst_identity <= kIdentityTol, "explicit catalyst error " + fmt(worst_identity));
    c.expect(std::abs(explicit_n3 - 3.5) <= 1e-12, "explicit norm^2 " + fmt(explicit_n3));
    c.notes << (c.ok ? "" : "; ") << "tau error " << fmt(worst_tau) << ", max complexity/3(n+1) " << fmt(max_ratio)
            << ", explicit catalyst error " << fmt(worst_identity) << ", norm^2 at n=3 " << fmt(explicit_n3);
}

void iterative(Check& c) {
    const ExtendedGraph g = generate_welded(3, 1).extended();
    const Transducer s(walk_step(g, Phase::Minus));
    const auto exact = solve_transduction(s, kStart, kExactTol);

    const Eigen::VectorXcd tau = run_iterative(s, kStart, 1400);
    const double err1400 = (tau - kTarget).norm();
    const double p = success_probability(tau, kTarget);
    c.expect(err1400 <= 0.1, "error at K=1400 " + fmt(err1400));
    c.expect(p >= 0.81, "success at K=1400 " + fmt(p));

    double prev = 1e300;
    std::ostringstream sweep;
    for (int k : {25, 100, 400, 1600}) {
        const double err = (run_iterative(s, kStart, k) - kTarget).norm();
        const double bound = 2.0 * std::sqrt(3.5 / k);
        c.expect(err <= bound, "K=" + std::to_string(k) + " error " + fmt(err) + " > " + fmt(bound));
        c.expect(err <= prev + 1e-12, "error grew at K=" + std::to_string(k));
        prev = err;
        sweep << " K=" << k << ":" << fmt(err);
    }
    c.expect(std::abs(exact.complexity - 3.5) <= 1e-9 || exact.complexity < 3.5, "complexity oracle");
    c.notes << (c.ok ? "" : "; ") << "K=1400 error " << fmt(err1400) << " success " << fmt(p) << "; errors"
            << sweep.str();
}

void linear_hitting(Check& c) {
    std::vector<double> ratios;
    std::ostringstream table;
    for (int n : {3, 5, 7, 9}) {
        const int k = 150 * (n + 1);
        const double minus = welded_success(n, Phase::Minus, k);
        const double plus = welded_success(n, Phase::Plus, k);
        const double ratio = welded_complexity(n, Phase::Plus) / welded_complexity(n, Phase::Minus);
        c.expect(minus >= 0.5, "n=" + std::to_string(n) + " success " + fmt(minus));
        c.expect(plus < minus, "n=" + std::to_string(n) + " phase +1 not lower");
        if (!ratios.empty()) c.expect(ratio > ratios.back(), "ratio not increasing at n=" + std::to_string(n));
        if (n == 5) c.expect(ratio >= 2.0, "ratio at n=5 " + fmt(ratio));
        ratios.push_back(ratio);
        table << (table.tellp() > 0 ? " " : "") << "n=" << n << "(K=" << k << " p-=" << fmt(minus) << " p+=" << fmt(plus) << " ratio=" << fmt(ratio)
              << ")";
    }
    c.notes << (c.ok ? "" : "; ") << table.str();
}

void flattening(Check& c) {
    double worst_traj = 0.0;
    double worst_matrix = 0.0;
    const std::vector<std::pair<HierarchicalSpec, Wiring>> cases{
        {family_spec(Family::Welded, 5), Wiring::Canonical},
        {augment_even(family_spec(Family::Hypercube, 4)), Wiring::Canonical}};
    for (const auto& [spec, wiring] : cases) {
        const FlattenedLine line = flatten(spec);
        const auto w = line.weights_double();
        const HierarchicalGraph g = instantiate(spec, 1, wiring);
        const ExtendedGraph full = g.extended(w.front(), w.back());
        const Eigen::MatrixXcd iso = g.layer_isometry().cast<std::complex<double>>();
        for (Phase phase : {Phase::Minus, Phase::Plus}) {
            const WalkOperator uf = walk_step(full, phase);
            const WalkOperator ul = walk_step(line.graph(), phase);
            EdgeVector x = full.start_state();
            EdgeVector y = line.graph().start_state();
            for (int k = 0; k <= 50; ++k) {
                worst_traj = std::max(worst_traj, (iso.adjoint() * x - y).cwiseAbs().maxCoeff());
                x = uf.apply(x);
                y = ul.apply(y);
            }
            const Eigen::MatrixXcd image = uf.matrix() * iso;
            worst_matrix = std::max(worst_matrix, (iso.adjoint() * image - ul.matrix()).cwiseAbs().maxCoeff());
            // The layer span is invariant, so nothing leaks outside it.
            worst_matrix = std::max(worst_matrix, (image - iso * ul.matrix()).cwiseAbs().maxCoeff());
        }
    }
    c.expect(worst_traj <= kTrajectoryTol, "trajectory mismatch " + fmt(worst_traj));
    c.expect(worst_matrix <= kIdentityTol, "matrix mismatch " + fmt(worst_matrix));
    c.notes << (c.ok ? "" : "; ") << "welded depth 5 and augmented hypercube d=4: trajectory mismatch "
            << fmt(worst_traj) << ", restricted matrix mismatch " << fmt(worst_matrix);
}

void hierarchical(Check& c) {
    struct Case {
        const char* name;
        HierarchicalSpec spec;
        double bound;
        int sign;
        double w_end;
    };
    const std::vector<Case> cases{{"welded depth 3", family_spec(Family::Welded, 3), 8.0, 1, 1.0},
                                  {"welded depth 2", family_spec(Family::Welded, 2), 55.0 / 8.0, -1, 4.0},
                                  {"hypercube 3", family_spec(Family::Hypercube, 3), 91.0 / 24.0, 1, 2.25}};
    std::ostringstream summary;
    for (const auto& cs : cases) {
        const HierarchicalReport r = verify_hierarchical(cs.spec, 1, 1);
        const double residual = std::max({r.residual_flat, r.residual_full.value_or(0.0), r.solve_residual});
        c.expect(r.passed, std::string(cs.name) + " did not pass");
        c.expect(std::abs(r.bound - cs.bound) <= 1e-12, std::string(cs.name) + " bound " + fmt(r.bound));
        c.expect(r.sign == cs.sign, std::string(cs.name) + " sign");
        c.expect(std::abs(r.tau_overlap - cs.sign) <= kExactTol, std::string(cs.name) + " overlap");
        c.expect(r.w_end == cs.w_end, std::string(cs.name) + " terminal weight " + fmt(r.w_end));
        c.expect(residual <= kExactTol, std::string(cs.name) + " residual " + fmt(residual));
        summary << (summary.tellp() > 0 ? "; " : "") << cs.name << ": bound " << fmt(r.bound) << " sign " << r.sign
                << " W_end " << fmt(r.w_end) << " residual " << fmt(residual);
    }
    c.notes << (c.ok ? "" : "; ") << summary.str();
}

void scaling(Check& c) {
    std::ostringstream v1s;
    for (int n = 1; n <= 9; ++n) {
        const ExtendedGraph g = generate_welded(n, 1).extended();
        const double v0 = catalyst_v0(g).squaredNorm();
        const EdgeVector v1 = catalyst_v1(g);
        const double v1_base = v1.tail(v1.size() - 2).squaredNorm();
        c.expect(std::abs(v0 - oracle::welded_edge_count(n)) <= 1e-9, "||v0||^2 at n=" + std::to_string(n));
        c.expect(v1_base < 2.0, "||v1||^2 at n=" + std::to_string(n) + " = " + fmt(v1_base));
        if (n == 3) {
            c.expect(std::abs(v0 - 44.0) <= 1e-12, "||v0||^2 at n=3");
            c.expect(std::abs(v1_base - 29.0 / 16.0) <= 1e-12, "||v1||^2 at n=3 = " + fmt(v1_base));
        }
        v1s << " " << fmt(v1_base);
    }
    c.notes << (c.ok ? "" : "; ") << "||v0||^2 = 3*2^(n+1)-4 for n=1..9; ||v1||^2 over E:" << v1s.str();
}

void diffuse_shift(Check& c) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ExtendedGraph g = random_extended_graph(500 + seed, 100, 1.0, 1.5);
        c.expect(g.base().num_edges() <= 100, "graph exceeds 100 edges");
        const DiffuseShiftWalk w = diffuse_shift_step(g);
        const Eigen::MatrixXcd sd = w.matrix();
        const TensorK2 k = tensor_k2(g.base(), g.s());
        const ExtendedGraph kg(k.graph, k.start, k2_vertex(g.t(), 1), g.w0(), g.w_end());
        const Eigen::MatrixXcd uk = walk_step(kg).matrix();
        std::vector<Eigen::Index> tensor_index{ExtendedGraph::kStartEdge, ExtendedGraph::kEndEdge};
        for (std::size_t e = 0; e < g.base().num_edges(); ++e) tensor_index.push_back(ExtendedGraph::base_edge(2 * e));
        const auto ident = w.edge_identification();
        for (Eigen::Index i = 0; i < g.dim(); ++i) {
            for (Eigen::Index j = 0; j < g.dim(); ++j) {
                worst = std::max(worst, std::abs(sd(ident[static_cast<std::size_t>(i)], ident[static_cast<std::size_t>(j)]) -
                                                 uk(tensor_index[static_cast<std::size_t>(i)],
                                                    tensor_index[static_cast<std::size_t>(j)])));
            }
        }
    }
    c.expect(worst <= kIdentityTol, "mismatch " + fmt(worst));
    c.notes << (c.ok ? "" : "; ") << "max entry mismatch " << fmt(worst) << " over 10 graphs";
}

void classical_baseline(Check& c) {
    const WeldedTree tree = generate_welded(9, 1);
    const auto hits = classical_hitting(tree.graph, tree.root_left, tree.root_right, 100000, 100, 1);
    int timeouts = 0;
    double mean_hit = 0.0;
    for (const auto& h : hits) {
        timeouts += h ? 0 : 1;
        mean_hit += h ? static_cast<double>(*h) : 0.0;
    }
    if (timeouts < static_cast<int>(hits.size())) mean_hit /= static_cast<double>(hits.size()) - timeouts;
    const double quantum = welded_success(9, Phase::Minus, 1500);
    c.expect(timeouts >= 95, "only " + std::to_string(timeouts) + " timeouts");
    c.expect(quantum >= 0.5, "quantum success " + fmt(quantum));
    c.notes << (c.ok ? "" : "; ") << "classical timeouts " << timeouts << "/100 at 1e5 steps, mean hit step "
            << fmt(mean_hit) << " (exact expectation " << fmt(oracle::welded_mean_hitting_time(9))
            << "); quantum K=1500 success " << fmt(quantum);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_seconds;
        std::function<void(Check&)> body;
    };
    const std::vector<Criterion> criteria{
        {1, "transduction exactness and unitarity", 10, exactness},
        {2, "electric walk transduction and complexity bound", 10, electric},
        {3, "phase-flipped welded-tree transduction", 60, headline},
        {4, "iterative transduction error", 60, iterative},
        {5, "linear hitting with the phase-flipped walk", 300, linear_hitting},
        {6, "flattening equivalence", 60, flattening},
        {7, "hierarchical bounds and signs", 30, hierarchical},
        {8, "catalyst norm scaling", 10, scaling},
        {9, "diffuse-and-shift equivalence", 10, diffuse_shift},
        {10, "classical baseline contrast", 120, classical_baseline},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.expect(seconds < cr.budget_seconds, "runtime " + fmt(seconds) + " s over budget");
        failures += check.ok ? 0 : 1;
        std::printf("%s criterion %d: %s [%.2f s / %.0f s] %s\n", check.ok ? "PASS" : "FAIL", cr.id, cr.title, seconds,
                    cr.budget_seconds, check.notes.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
