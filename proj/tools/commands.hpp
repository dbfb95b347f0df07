#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eqwalk/io.hpp"
#include "eqwalk/walk.hpp"

namespace eqwalk::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kInputError = 2 };

enum class Backend { Auto, Full, Flat };

/// Everything needed to rerun a command; serialized into every output.
struct ExperimentConfig {
    std::string command;
    std::string graph;
    std::string family;
    int size = 0;
    std::uint64_t seed = 1;
    int phase = -1;
    std::vector<int> ks;
    std::int64_t steps = 100000;
    int trials = 100;
    std::string out;
    double tolerance = 1e-9;
    Backend backend = Backend::Auto;
    std::string scope = "all";
    bool corrupt = false;

    nlohmann::json to_json() const;
};

/// Graph document for a named family, with the terminal weight balanced so the
/// phase-flipped walk applies.
GraphDocument family_document(const std::string& family, int size, std::uint64_t seed);

int cmd_gen(const ExperimentConfig& cfg, std::ostream& out);
int cmd_hit(const ExperimentConfig& cfg, std::ostream& out);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_classical(const ExperimentConfig& cfg, std::ostream& out);
int cmd_transduce(const ExperimentConfig& cfg, std::ostream& out);

/// Parses argv and dispatches. Human-readable progress goes to `out`, errors to
/// `err`; result files go to --out or, without it, to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eqwalk::cli
