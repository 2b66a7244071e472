// macroent: command-line front end for the experiment runner.
//
//   macroent index-p --family cat --N 4,6,8,10,12 --out-dir out
//   macroent shor --M 15 --x 7 --noise collective --gamma-t 1e-3
//   macroent stability --config run.json --seed 3
//
// Flags given on the command line override the values in --config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "macroent/experiment.hpp"
#include "macroent/statevec.hpp"

namespace {

using nlohmann::json;

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> family, n_list, noise, out_dir, estimator, pairs, policy;
    std::optional<double> gamma, xi, epsilon, gamma_t, J, h;
    std::optional<std::uint64_t> seed, modulus, base;
    std::optional<int> runs, parallelism, k, trajectories;
};

void add_flags(CLI::App *sub, Flags &f) {
    sub->add_option("--config", f.config, "JSON config file with the same keys as the flags");
    sub->add_option("--family", f.family, "product_random|plus_all|cat|w|bell_pair|dicke_k|ising_ground|haar_random");
    sub->add_option("--N", f.n_list, "comma-separated qubit counts, increasing");
    sub->add_option("--noise", f.noise, "white|collective|exponential");
    sub->add_option("--gamma", f.gamma, "noise strength");
    sub->add_option("--xi", f.xi, "correlation length (exponential noise)");
    sub->add_option("--gamma-t", f.gamma_t, "dimensionless exposure gamma*t");
    sub->add_option("--epsilon", f.epsilon, "correlation threshold");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--runs", f.runs, "Monte Carlo runs (0 skips sampling)");
    sub->add_option("--parallelism", f.parallelism, "worker threads (0 = all cores)");
    sub->add_option("--out-dir", f.out_dir, "output directory");
    sub->add_option("--J", f.J, "Ising coupling");
    sub->add_option("--h", f.h, "Ising transverse field");
    sub->add_option("--k", f.k, "Dicke excitation number");
    sub->add_option("--estimator", f.estimator, "relaxed|oracle|both");
    sub->add_option("--pairs", f.pairs, "all|distant");
    sub->add_option("--policy", f.policy, "argmax_pair|round_robin_z");
    sub->add_option("--trajectories", f.trajectories, "reduction trajectories");
    sub->add_option("--M", f.modulus, "modulus to factor");
    sub->add_option("--x", f.base, "base coprime to M");
}

template <typename T> void put(json &j, const char *key, const std::optional<T> &v) {
    if (v) {
        j[key] = *v;
    }
}

json merge(const std::string &command, const Flags &f) {
    json j = json::object();
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) {
            throw macroent::ValidationError("cannot read config " + *f.config);
        }
        try {
            j = json::parse(in);
        } catch (const json::parse_error &e) {
            throw macroent::ValidationError(std::string("malformed config: ") + e.what());
        }
        if (!j.is_object()) {
            throw macroent::ValidationError("config must be a JSON object");
        }
        if (j.contains("command") && j["command"] != command) {
            throw macroent::ValidationError("config command does not match the subcommand");
        }
    }
    j["command"] = command;
    put(j, "family", f.family);
    put(j, "N", f.n_list);
    put(j, "noise", f.noise);
    put(j, "gamma", f.gamma);
    put(j, "xi", f.xi);
    put(j, "gamma_t", f.gamma_t);
    put(j, "epsilon", f.epsilon);
    put(j, "seed", f.seed);
    put(j, "runs", f.runs);
    put(j, "parallelism", f.parallelism);
    put(j, "out_dir", f.out_dir);
    put(j, "J", f.J);
    put(j, "h", f.h);
    put(j, "k", f.k);
    put(j, "estimator", f.estimator);
    put(j, "pairs", f.pairs);
    put(j, "policy", f.policy);
    put(j, "trajectories", f.trajectories);
    put(j, "M", f.modulus);
    put(j, "x", f.base);
    return j;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Macroscopic entanglement measures for small qubit systems"};
    app.set_version_flag("--version", std::string(macroent::kToolVersion));
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    Flags flags;
    const std::pair<const char *, const char *> commands[] = {
        {"index-p", "fluctuation scaling and NFS/AFS classification"},
        {"cluster", "correlation cluster size Omega(epsilon)"},
        {"stability", "pair strength and measurement disturbance"},
        {"reduce", "measurements needed to remove strong correlations"},
        {"decoherence", "decoherence rate scaling under dephasing noise"},
        {"shor", "per-stage fluctuation and noise sensitivity of order finding"},
    };
    for (const auto &[name, description] : commands) {
        add_flags(app.add_subcommand(name, description), flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return static_cast<int>(macroent::ExitCode::validation_error);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    json config;
    try {
        config = merge(command, flags);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(macroent::ExitCode::validation_error);
    }

    const macroent::RunResult result = macroent::run(config);
    if (result.code != macroent::ExitCode::ok) {
        std::cerr << "error: " << result.message << '\n';
        return static_cast<int>(result.code);
    }
    std::cout << result.csv_path.string() << '\n' << result.summary_path.string() << '\n';
    return 0;
}
