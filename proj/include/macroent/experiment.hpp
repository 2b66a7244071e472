#pragma once

// Experiment orchestration shared by the `macroent` tool and the tests.
//
// An ExperimentSpec is built from a JSON object whose keys mirror the CLI
// flags (unknown keys are rejected). run() validates it, computes, and writes
//   <out_dir>/<command>.csv           family,N,quantity,value,stderr,seed
//   <out_dir>/<command>_summary.json  fits, classifications, tolerances, seed
// through temp-file-and-rename. Nothing is written when validation or the
// computation fails.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "macroent/noise.hpp"
#include "macroent/stategen.hpp"

namespace macroent {

inline constexpr const char *kToolName = "macroent";
inline constexpr const char *kToolVersion = "0.1.0";

enum class ExitCode : int { ok = 0, validation_error = 2, numerical_failure = 3 };

enum class Command { index_p, cluster, stability, reduce, decoherence, shor };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view name);

struct ExperimentSpec {
    Command command = Command::index_p;
    StateFamily family;
    std::vector<int> n_list;
    NoiseKind noise = NoiseKind::white;
    double gamma = 1.0;
    double xi = 1.0;
    double gamma_t = 1e-3;
    double epsilon = 0.01;
    std::uint64_t seed = 0;
    int runs = 4000;
    int parallelism = 1;
    std::filesystem::path out_dir = ".";
    std::string estimator = "both";  // relaxed | oracle | both (fit uses relaxed unless oracle)
    std::string pairs = "all";       // all | distant (distance >= 2)
    std::string policy = "argmax_pair";
    int trajectories = 100;
    std::uint64_t modulus = 15;
    std::uint64_t base = 7;

    NoiseModel noise_model() const;
};

// All keys accepted in a config object (also the long CLI flag names, with
// '-' for '_').
const std::vector<std::string> &spec_keys();

// Throws ValidationError on unknown keys, wrong types or out-of-range values.
ExperimentSpec spec_from_json(const nlohmann::json &config);

struct RunOutput {
    std::string csv;
    nlohmann::json summary;
};

// Pure computation: no filesystem access. Throws on failure.
RunOutput execute(const ExperimentSpec &spec);

// Writes `content` to `path` via a temporary sibling file and rename.
void write_atomically(const std::filesystem::path &path, const std::string &content);

struct RunResult {
    ExitCode code = ExitCode::ok;
    std::string message;
    std::filesystem::path csv_path;
    std::filesystem::path summary_path;
};

// Validate, execute, write. Never throws.
RunResult run(const nlohmann::json &config);

} // namespace macroent
