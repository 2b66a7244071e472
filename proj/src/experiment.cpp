#include "macroent/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "macroent/correlator.hpp"
#include "macroent/decoherence.hpp"
#include "macroent/parallel.hpp"
#include "macroent/scaling.hpp"
#include "macroent/shor_probe.hpp"
#include "macroent/stability.hpp"

namespace macroent {

namespace {

using nlohmann::json;

constexpr double kDiscrepancyWarning = 0.10;

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommands{{
    {Command::index_p, "index-p"},
    {Command::cluster, "cluster"},
    {Command::stability, "stability"},
    {Command::reduce, "reduce"},
    {Command::decoherence, "decoherence"},
    {Command::shor, "shor"},
}};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter() { out_ << "family,N,quantity,value,stderr,seed\n"; }
    void row(const std::string &family, int n, const std::string &quantity, double value, double std_error,
             std::uint64_t seed) {
        out_ << family << ',' << n << ',' << quantity << ',' << format_double(value) << ','
             << format_double(std_error) << ',' << seed << '\n';
    }
    std::string str() const { return out_.str(); }

  private:
    std::ostringstream out_;
};

std::string csv_label(const StateFamily &f) {
    // commas would break the CSV
    std::string s = f.label();
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

template <typename T> T get_as(const json &j, const std::string &key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ValidationError("config key '" + key + "' has the wrong type");
    }
}

std::vector<int> parse_n_list(const json &value) {
    std::vector<int> out;
    if (value.is_array()) {
        for (const auto &v : value) {
            if (!v.is_number_integer()) {
                throw ValidationError("N must be a list of integers");
            }
            out.push_back(v.get<int>());
        }
    } else if (value.is_string()) {
        std::stringstream ss(value.get<std::string>());
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                const int n = std::stoi(tok, &used);
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
                out.push_back(n);
            } catch (const std::exception &) {
                throw ValidationError("N list entry '" + tok + "' is not an integer");
            }
        }
    } else if (value.is_number_integer()) {
        out.push_back(value.get<int>());
    } else {
        throw ValidationError("N must be an integer, a list, or a comma-separated string");
    }
    return out;
}

json tolerances_json(const ExperimentSpec &spec) {
    const FluctuationOptions fo;
    const DisturbanceOptions dopt;
    const EigenSolverOptions eo;
    const ClassifyThresholds ct;
    return json{
        {"norm_tolerance", kNormTolerance},
        {"site_operator_norm_tolerance", 1e-12},
        {"vanishing_branch_probability", kVanishingBranch},
        {"fluctuation_rel_tolerance", fo.rel_tolerance},
        {"fluctuation_max_sweeps", fo.max_sweeps},
        {"fluctuation_multistart", fo.multistart},
        {"relaxed_oracle_discrepancy_warning", kDiscrepancyWarning},
        {"lanczos_residual_tolerance", eo.residual_tolerance},
        {"lanczos_max_iterations", eo.max_iterations},
        {"classify_nfs_below", ct.nfs_below},
        {"classify_afs_above", ct.afs_above},
        {"min_fit_points", kMinFitPoints},
        {"disturbance_design_points", dopt.design_points},
        {"disturbance_refine_tolerance", dopt.refine_tolerance},
        {"stability_c", kDefaultStabilityC},
        {"fragility_threshold", kDefaultFragilityThreshold},
        {"short_time_bound", kShortTimeBound},
        {"monte_carlo_chunk", kMonteCarloChunk},
        {"stage_afs_fraction", kStageAfsFraction},
        {"epsilon", spec.epsilon},
        {"qubit_cap", qubit_cap()},
    };
}

json fit_json(const ScalingFit &fit) {
    return json{{"exponent", fit.exponent},
                {"prefactor", fit.prefactor},
                {"stderr", fit.std_error},
                {"r_squared", fit.r_squared},
                {"points", fit.n_points}};
}

FluctuationMethod parse_estimator(const std::string &s) {
    if (s == "relaxed") {
        return FluctuationMethod::relaxed;
    }
    if (s == "oracle") {
        return FluctuationMethod::oracle;
    }
    return FluctuationMethod::both;
}

// ---------------------------------------------------------------------------
// Commands

void run_index_p(const ExperimentSpec &spec, CsvWriter &csv, json &summary) {
    const FluctuationMethod method = parse_estimator(spec.estimator);
    const FluctuationMethod fit_on = method == FluctuationMethod::oracle ? FluctuationMethod::oracle
                                                                         : FluctuationMethod::relaxed;
    std::vector<FluctuationResult> results(spec.n_list.size());
    parallel_for(spec.n_list.size(), spec.parallelism, [&](std::size_t i) {
        const int n = spec.n_list[i];
        FluctuationOptions opts;
        opts.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(n));
        results[i] = max_fluctuation(build_vcm(generate(spec.family, n)), method, opts);
    });

    std::vector<ScalingPoint> points;
    json per_n = json::array();
    json warnings = json::array();
    const std::string label = csv_label(spec.family);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const int n = spec.n_list[i];
        const FluctuationResult &r = results[i];
        json entry{{"N", n}, {"e_max", r.e_max}};
        if (method != FluctuationMethod::oracle) {
            csv.row(label, n, "relaxed_max", r.relaxed_max, 0.0, spec.seed);
            entry["relaxed_max"] = r.relaxed_max;
        }
        if (method != FluctuationMethod::relaxed) {
            csv.row(label, n, "oracle_max", r.oracle_max, 0.0, spec.seed);
            entry["oracle_max"] = r.oracle_max;
        }
        if (method == FluctuationMethod::both) {
            entry["discrepancy"] = r.discrepancy();
            if (r.discrepancy() > kDiscrepancyWarning) {
                warnings.push_back("N=" + std::to_string(n) + ": relaxed and oracle estimates differ by " +
                                   format_double(100.0 * r.discrepancy()) + "%");
            }
        }
        per_n.push_back(entry);
        points.push_back(ScalingPoint{n, r.value(fit_on), 0.0});
    }
    summary["points"] = per_n;
    summary["fit_estimator"] = fit_on == FluctuationMethod::oracle ? "oracle" : "relaxed";
    if (static_cast<int>(points.size()) >= kMinFitPoints) {
        const ScalingFit fit = fit_exponent(points);
        summary["fit"] = fit_json(fit);
        summary["classification"] = std::string(to_string(classify(fit)));
    } else {
        summary["fit"] = nullptr;
        warnings.push_back("fewer than " + std::to_string(kMinFitPoints) + " sizes: no exponent fit");
    }
    summary["warnings"] = warnings;
}

void run_cluster(const ExperimentSpec &spec, CsvWriter &csv, json &summary) {
    std::vector<std::pair<int, double>> results(spec.n_list.size());
    parallel_for(spec.n_list.size(), spec.parallelism, [&](std::size_t i) {
        const CovarianceMatrix vcm = build_vcm(generate(spec.family, spec.n_list[i]));
        results[i] = {omega_range(vcm, spec.epsilon), max_pair_strength(vcm)};
    });
    json per_n = json::array();
    std::set<int> distinct;
    bool any_violation = false;
    const std::string label = csv_label(spec.family);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const int n = spec.n_list[i];
        csv.row(label, n, "omega", results[i].first, 0.0, spec.seed);
        csv.row(label, n, "max_pair_strength", results[i].second, 0.0, spec.seed);
        per_n.push_back(json{{"N", n}, {"omega", results[i].first}, {"max_pair_strength", results[i].second}});
        distinct.insert(results[i].first);
        any_violation = any_violation || results[i].first == n;
    }
    summary["points"] = per_n;
    summary["omega_constant_over_checked_range"] = distinct.size() == 1 && !any_violation;
    summary["checked_range"] = spec.n_list.empty() ? json(nullptr)
                                                   : json::array({spec.n_list.front(), spec.n_list.back()});
}

void run_stability(const ExperimentSpec &spec, CsvWriter &csv, json &summary) {
    const int min_distance = spec.pairs == "distant" ? 2 : 1;
    json per_n = json::array();
    const std::string label = csv_label(spec.family);
    for (int n : spec.n_list) {
        const StabilityReport rep = stability_vs_cluster(generate(spec.family, n), spec.epsilon, kDefaultStabilityC,
                                                         min_distance, {}, spec.parallelism);
        for (const StabilityRow &row : rep.rows) {
            const std::string pair = std::to_string(row.x) + "-" + std::to_string(row.y);
            csv.row(label, n, "pair_strength:" + pair, row.pair_strength, 0.0, spec.seed);
            csv.row(label, n, "disturbance:" + pair, row.disturbance, 0.0, spec.seed);
        }
        per_n.push_back(json{{"N", n},
                             {"pairs", rep.rows.size()},
                             {"c_threshold", rep.c_threshold},
                             {"c_calibrated", rep.c_calibrated},
                             {"violations", rep.violations.size()}});
    }
    summary["points"] = per_n;
    summary["pairs"] = spec.pairs;
}

void run_reduce(const ExperimentSpec &spec, CsvWriter &csv, json &summary) {
    const ReductionPolicy policy =
        spec.policy == "round_robin_z" ? ReductionPolicy::round_robin_z : ReductionPolicy::argmax_pair;
    json per_n = json::array();
    const std::string label = csv_label(spec.family);
    for (int n : spec.n_list) {
        const StateVector state = generate(spec.family, n);
        std::vector<int> counts(spec.trajectories);
        parallel_for(counts.size(), spec.parallelism, [&](std::size_t t) {
            Rng rng(derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(n)), t));
            counts[t] = iterated_reduction(state, spec.epsilon, policy, rng).count;
        });
        std::vector<int> sorted = counts;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t m = sorted.size();
        const double median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
        double mean = 0.0;
        for (int c : counts) {
            mean += c;
        }
        mean /= static_cast<double>(m);
        csv.row(label, n, "median_count", median, 0.0, spec.seed);
        csv.row(label, n, "mean_count", mean, 0.0, spec.seed);
        per_n.push_back(json{{"N", n}, {"median_count", median}, {"mean_count", mean},
                             {"max_count", sorted.back()}, {"median_le_N_over_3", median <= n / 3.0}});
    }
    summary["points"] = per_n;
    summary["policy"] = spec.policy;
    summary["trajectories"] = spec.trajectories;
}

void run_decoherence(const ExperimentSpec &spec, CsvWriter &csv, json &summary) {
    const NoiseModel noise = spec.noise_model();
    const double t = spec.gamma_t / noise.gamma;
    json per_n = json::array();
    std::vector<ScalingPoint> points;
    const std::string label = csv_label(spec.family);
    for (int n : spec.n_list) {
        const StateVector state = generate(spec.family, n);
        const double gp = gamma_perturbative(state, noise);
        csv.row(label, n, "gamma_pert", gp, 0.0, spec.seed);
        json entry{{"N", n}, {"gamma_pert", gp}};
        points.push_back(ScalingPoint{n, gp, 0.0});
        if (spec.runs > 0 && noise.gamma * t * n * n <= kShortTimeBound) {
            const GammaReport mc = gamma_montecarlo(state, noise, t, spec.runs,
                                                    derive_seed(spec.seed, static_cast<std::uint64_t>(n)),
                                                    spec.parallelism);
            csv.row(label, n, "gamma_mc", mc.gamma_mc, mc.mc_stderr, spec.seed);
            entry["gamma_mc"] = mc.gamma_mc;
            entry["gamma_mc_stderr"] = mc.mc_stderr;
        } else if (spec.runs > 0) {
            entry["gamma_mc"] = nullptr;
            entry["note"] = "Monte Carlo skipped: not in short-time regime";
        }
        per_n.push_back(entry);
    }
    summary["points"] = per_n;
    summary["noise"] = json{{"kind", std::string(to_string(noise.kind))},
                            {"gamma", noise.gamma},
                            {"xi", noise.xi},
                            {"gamma_t", spec.gamma_t}};
    if (static_cast<int>(points.size()) >= kMinFitPoints) {
        const ScalingFit fit = fit_exponent(points);
        summary["fit"] = fit_json(fit);
        summary["delta"] = fit.exponent - 1.0;
        summary["fragile"] = fit.exponent > 1.0 + kDefaultFragilityThreshold;
    } else {
        summary["fit"] = nullptr;
    }
}

void run_shor(const ExperimentSpec &spec, CsvWriter &csv, json &summary) {
    const ShorInstance inst = make_shor_instance(spec.modulus, spec.base);
    const NoiseModel noise = spec.noise_model();
    const double t = spec.gamma_t / noise.gamma;
    const std::string label = "shor(M=" + std::to_string(inst.modulus) + ";x=" + std::to_string(inst.base) + ")";
    json stages = json::array();
    for (ShorStage stage : {ShorStage::HT, ShorStage::ME, ShorStage::FINAL}) {
        const StageAnalysis a = stage_index_p(inst, stage);
        const NoisyStageReport noisy = noisy_stage_report(
            inst, stage, noise, t, spec.runs, derive_seed(spec.seed, static_cast<std::uint64_t>(stage)));
        const std::string q = std::string(to_string(stage)) + ":";
        csv.row(label, a.n_total, q + "max_fluctuation", a.fluctuation.relaxed_max, 0.0, spec.seed);
        csv.row(label, a.n_total, q + "oracle_max", a.fluctuation.oracle_max, 0.0, spec.seed);
        csv.row(label, a.n_total, q + "one_minus_F", noisy.one_minus_f, noisy.one_minus_f_stderr, spec.seed);
        csv.row(label, a.n_total, q + "delta_T", noisy.delta_t, noisy.delta_t_stderr, spec.seed);
        stages.push_back(json{{"stage", std::string(to_string(stage))},
                              {"max_fluctuation", a.fluctuation.relaxed_max},
                              {"oracle_max", a.fluctuation.oracle_max},
                              {"effective_exponent", a.effective_exponent},
                              {"classification", std::string(to_string(a.classification))},
                              {"afs_band_witness", a.afs_band_witness},
                              {"one_minus_F", noisy.one_minus_f},
                              {"delta_T", noisy.delta_t}});
    }
    summary["instance"] = json{{"M", inst.modulus}, {"x", inst.base}, {"L", inst.l_bits},
                               {"n1", inst.n1}, {"order", inst.order}};
    summary["T_clean"] = success_probability(build_stage(inst, ShorStage::FINAL).state, inst);
    summary["stages"] = stages;
    summary["noise"] = json{{"kind", std::string(to_string(noise.kind))}, {"gamma_t", spec.gamma_t}};
}

} // namespace

std::string_view to_string(Command c) {
    for (const auto &[cmd, name] : kCommands) {
        if (cmd == c) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Command> command_from_string(std::string_view name) {
    for (const auto &[cmd, n] : kCommands) {
        if (n == name) {
            return cmd;
        }
    }
    return std::nullopt;
}

NoiseModel ExperimentSpec::noise_model() const {
    switch (noise) {
    case NoiseKind::white:
        return NoiseModel::white(gamma);
    case NoiseKind::collective:
        return NoiseModel::collective(gamma);
    case NoiseKind::exponential:
        return NoiseModel::exponential(gamma, xi);
    }
    throw ValidationError("unknown noise kind");
}

const std::vector<std::string> &spec_keys() {
    static const std::vector<std::string> keys{
        "command", "family", "N",     "noise",     "gamma",  "xi",     "gamma_t",      "epsilon",
        "seed",    "runs",   "parallelism", "out_dir", "J",  "h",      "k",            "estimator",
        "pairs",   "policy", "trajectories", "M",      "x",
    };
    return keys;
}

ExperimentSpec spec_from_json(const json &config) {
    if (!config.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    const auto &keys = spec_keys();
    for (const auto &[key, value] : config.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ValidationError("unknown config field '" + key + "'");
        }
    }

    ExperimentSpec spec;
    if (!config.contains("command")) {
        throw ValidationError("missing 'command'");
    }
    const auto cmd = command_from_string(get_as<std::string>(config, "command"));
    if (!cmd) {
        throw ValidationError("unknown command '" + get_as<std::string>(config, "command") + "'");
    }
    spec.command = *cmd;

    if (config.contains("family")) {
        const auto kind = family_kind_from_string(get_as<std::string>(config, "family"));
        if (!kind) {
            throw ValidationError("unknown family '" + get_as<std::string>(config, "family") + "'");
        }
        spec.family.kind = *kind;
    } else if (spec.command != Command::shor) {
        throw ValidationError("missing 'family'");
    }
    if (config.contains("N")) {
        spec.n_list = parse_n_list(config.at("N"));
    } else if (spec.command != Command::shor) {
        throw ValidationError("missing 'N'");
    }
    if (config.contains("noise")) {
        const auto kind = noise_kind_from_string(get_as<std::string>(config, "noise"));
        if (!kind) {
            throw ValidationError("unknown noise '" + get_as<std::string>(config, "noise") + "'");
        }
        spec.noise = *kind;
    }
    if (config.contains("gamma")) spec.gamma = get_as<double>(config, "gamma");
    if (config.contains("xi")) spec.xi = get_as<double>(config, "xi");
    if (config.contains("gamma_t")) spec.gamma_t = get_as<double>(config, "gamma_t");
    if (config.contains("epsilon")) spec.epsilon = get_as<double>(config, "epsilon");
    if (config.contains("seed")) spec.seed = get_as<std::uint64_t>(config, "seed");
    if (config.contains("runs")) spec.runs = get_as<int>(config, "runs");
    if (config.contains("parallelism")) spec.parallelism = get_as<int>(config, "parallelism");
    if (config.contains("out_dir")) spec.out_dir = get_as<std::string>(config, "out_dir");
    if (config.contains("J")) spec.family.J = get_as<double>(config, "J");
    if (config.contains("h")) spec.family.h = get_as<double>(config, "h");
    if (config.contains("k")) spec.family.k = get_as<int>(config, "k");
    if (config.contains("estimator")) spec.estimator = get_as<std::string>(config, "estimator");
    if (config.contains("pairs")) spec.pairs = get_as<std::string>(config, "pairs");
    if (config.contains("policy")) spec.policy = get_as<std::string>(config, "policy");
    if (config.contains("trajectories")) spec.trajectories = get_as<int>(config, "trajectories");
    if (config.contains("M")) spec.modulus = get_as<std::uint64_t>(config, "M");
    if (config.contains("x")) spec.base = get_as<std::uint64_t>(config, "x");
    spec.family.seed = spec.seed;

    // range checks
    if (spec.command != Command::shor) {
        if (spec.n_list.empty()) {
            throw ValidationError("N list is empty");
        }
        for (std::size_t i = 0; i < spec.n_list.size(); ++i) {
            check_qubit_count(spec.n_list[i]);
            if (i > 0 && spec.n_list[i] <= spec.n_list[i - 1]) {
                throw ValidationError("N list must be strictly increasing");
            }
        }
        if (spec.family.kind == FamilyKind::ising_ground && spec.n_list.back() > kIsingMaxQubits) {
            throw ValidationError("ising_ground is limited to N <= " + std::to_string(kIsingMaxQubits));
        }
        if (spec.family.kind == FamilyKind::ising_ground && !(spec.family.J > 0.0 && spec.family.h > 0.0)) {
            throw ValidationError("ising_ground needs J > 0 and h > 0");
        }
        if (spec.family.kind == FamilyKind::bell_pair && spec.n_list.front() < 2) {
            throw ValidationError("bell_pair needs N >= 2");
        }
        if (spec.family.kind == FamilyKind::dicke_k &&
            (spec.family.k < 0 || spec.family.k > spec.n_list.front())) {
            throw ValidationError("dicke k must lie in [0, N] for every N");
        }
        if ((spec.command == Command::stability || spec.command == Command::reduce ||
             spec.command == Command::cluster) &&
            spec.n_list.front() < 2) {
            throw ValidationError("pair analyses need N >= 2");
        }
    } else {
        make_shor_instance(spec.modulus, spec.base);
    }
    if (!(spec.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    if (!(spec.gamma_t > 0.0)) throw ValidationError("gamma_t must be positive");
    if (spec.runs < 0 || (spec.command == Command::shor && spec.runs < 2)) {
        throw ValidationError("runs out of range");
    }
    if (spec.runs == 1) throw ValidationError("runs must be 0 or at least 2");
    if (spec.parallelism < 0) throw ValidationError("parallelism must be >= 0 (0 = all cores)");
    if (spec.trajectories < 1) throw ValidationError("trajectories must be >= 1");
    if (spec.estimator != "relaxed" && spec.estimator != "oracle" && spec.estimator != "both") {
        throw ValidationError("estimator must be relaxed, oracle or both");
    }
    if (spec.pairs != "all" && spec.pairs != "distant") {
        throw ValidationError("pairs must be 'all' or 'distant'");
    }
    if (spec.policy != "argmax_pair" && spec.policy != "round_robin_z") {
        throw ValidationError("policy must be argmax_pair or round_robin_z");
    }
    spec.noise_model(); // validates gamma, xi
    if (spec.command == Command::shor) {
        check_short_time(spec.noise_model(), make_shor_instance(spec.modulus, spec.base).total_qubits(),
                         spec.gamma_t / spec.gamma);
    }
    return spec;
}

RunOutput execute(const ExperimentSpec &spec) {
    CsvWriter csv;
    json summary{{"tool", kToolName},
                 {"version", kToolVersion},
                 {"command", std::string(to_string(spec.command))},
                 {"seed", spec.seed},
                 {"parallelism", spec.parallelism},
                 {"tolerances", tolerances_json(spec)}};
    if (spec.command != Command::shor) {
        summary["family"] = spec.family.label();
        summary["N"] = spec.n_list;
    }
    switch (spec.command) {
    case Command::index_p:
        run_index_p(spec, csv, summary);
        break;
    case Command::cluster:
        run_cluster(spec, csv, summary);
        break;
    case Command::stability:
        run_stability(spec, csv, summary);
        break;
    case Command::reduce:
        run_reduce(spec, csv, summary);
        break;
    case Command::decoherence:
        run_decoherence(spec, csv, summary);
        break;
    case Command::shor:
        run_shor(spec, csv, summary);
        break;
    }
    return RunOutput{csv.str(), std::move(summary)};
}

void write_atomically(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw ValidationError("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

RunResult run(const json &config) {
    RunResult result;
    ExperimentSpec spec;
    try {
        spec = spec_from_json(config);
        std::error_code ec;
        std::filesystem::create_directories(spec.out_dir, ec);
        if (ec) {
            throw ValidationError("cannot create output directory " + spec.out_dir.string());
        }
    } catch (const std::exception &e) {
        result.code = ExitCode::validation_error;
        result.message = e.what();
        return result;
    }

    RunOutput output;
    try {
        output = execute(spec);
    } catch (const ValidationError &e) {
        result.code = ExitCode::validation_error;
        result.message = e.what();
        return result;
    } catch (const std::exception &e) {
        result.code = ExitCode::numerical_failure;
        result.message = e.what();
        return result;
    }

    const std::string stem(to_string(spec.command));
    result.csv_path = spec.out_dir / (stem + ".csv");
    result.summary_path = spec.out_dir / (stem + "_summary.json");
    try {
        write_atomically(result.csv_path, output.csv);
        write_atomically(result.summary_path, output.summary.dump(2) + "\n");
    } catch (const std::exception &e) {
        result.code = ExitCode::numerical_failure;
        result.message = std::string("writing outputs failed: ") + e.what();
        return result;
    }
    result.message = "ok";
    return result;
}

} // namespace macroent
