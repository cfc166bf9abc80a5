// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0
//
// revemb: decide reversible embeddability of stochastic matrices, compute
// the reversible generator when it exists, and estimate generators from
// discretely observed trajectories.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "revemb/io.hpp"
#include "revemb/simulation.hpp"

namespace fs = std::filesystem;
using namespace revemb;

namespace {

struct CommonConfig {
    std::string input;
    std::string output;
    std::string batch_dir;
    std::string format; // "", "csv", or "json"
    double tol = kDefaultTol;
    int max_dim = 64;
    bool restrict_states = false;
};

std::optional<FileFormat> parse_format(const std::string &name) {
    if (name == "csv") {
        return FileFormat::Csv;
    }
    if (name == "json") {
        return FileFormat::Json;
    }
    return std::nullopt;
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open output file: " + path);
    }
    out << text;
}

StochasticMatrix load_stochastic(const CommonConfig &cfg,
                                 const std::string &path) {
    const Matrix raw = parse_matrix_file(path, parse_format(cfg.format));
    if (raw.dim() > cfg.max_dim) {
        std::ostringstream msg;
        msg << "matrix dimension " << raw.dim() << " exceeds the cap of "
            << cfg.max_dim << " (override with --max-dim)";
        throw DimensionError(msg.str());
    }
    StochasticMatrix p = validate_stochastic(raw, cfg.tol);
    if (cfg.restrict_states && !is_irreducible(p)) {
        const auto cls = largest_closed_class(p);
        if (cls.empty()) {
            throw Error("no closed communicating class found");
        }
        std::cerr << "note: restricted to the largest closed communicating "
                     "class ("
                  << cls.size() << " of " << p.dim() << " states)\n";
        p = restrict_to_states(p, cls, cfg.tol);
    }
    return p;
}

int run_embed_one(const CommonConfig &cfg, const std::string &path,
                  std::string *rendered, Verdict *verdict) {
    const StochasticMatrix p = load_stochastic(cfg, path);
    EmbedOptions opts;
    opts.tol = cfg.tol;
    const EmbeddingReport report = reversible_embedding(p, opts);
    *rendered = emit_report(
        report, parse_format(cfg.format).value_or(FileFormat::Json));
    *verdict = report.verdict;
    return exit_code(report);
}

int run_embed(const CommonConfig &cfg) {
    if (cfg.batch_dir.empty()) {
        std::string rendered;
        Verdict verdict;
        const int code = run_embed_one(cfg, cfg.input, &rendered, &verdict);
        write_output(cfg.output, rendered);
        return code;
    }

    // Batch mode: every matrix file in the directory, processed
    // concurrently (the core is reentrant); reports land next to the
    // inputs or in --output.
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(cfg.batch_dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".csv" || ext == ".json")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw Error("no .csv or .json files in " + cfg.batch_dir);
    }

    const std::string report_ext =
        parse_format(cfg.format).value_or(FileFormat::Json) ==
                FileFormat::Json
            ? ".report.json"
            : ".report.csv";
    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{0};
    std::mutex io_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= files.size()) {
                return;
            }
            const fs::path &file = files[index];
            fs::path out_path = cfg.output.empty()
                                    ? file
                                    : fs::path(cfg.output) / file.filename();
            out_path.replace_extension(report_ext);
            std::string line;
            int code = 0;
            try {
                std::string rendered;
                Verdict verdict;
                code = run_embed_one(cfg, file.string(), &rendered, &verdict);
                std::ofstream out(out_path);
                out << rendered;
                line = file.filename().string() + ": " + to_string(verdict);
            } catch (const Error &e) {
                code = 2;
                line = file.filename().string() + ": error: " + e.what();
            }
            int seen = worst.load();
            while (seen < code && !worst.compare_exchange_weak(seen, code)) {
            }
            const std::lock_guard<std::mutex> lock(io_mutex);
            std::cout << line << "\n";
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(std::thread::hardware_concurrency(),
                              files.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < std::max<std::size_t>(n_threads, 1); ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &thread : pool) {
        thread.join();
    }
    return worst.load();
}

// Necessary conditions only: validation, irreducibility, reversibility,
// spectrum positivity. No candidate is built.
int run_check(const CommonConfig &cfg) {
    const StochasticMatrix p = load_stochastic(cfg, cfg.input);

    std::string verdict = "NecessaryConditionsHold";
    bool irreducible = is_irreducible(p);
    bool reversible = false;
    std::optional<ProbabilityDistribution> mu;
    std::optional<SpectralData> spec;
    bool spectrum_positive = false;

    if (!irreducible) {
        verdict = "NotIrreducible";
    } else {
        mu = invariant_distribution(p);
        reversible = is_reversible(p, *mu, cfg.tol);
        if (!reversible) {
            verdict = "NotReversible";
        } else {
            spec = spectral_decompose(p, *mu);
            spectrum_positive = check_positive_spectrum(*spec);
            if (!spectrum_positive) {
                verdict = "NonpositiveEigenvalue";
            }
        }
    }

    std::ostringstream out;
    out << "{\n";
    out << "  \"n\": " << p.dim() << ",\n";
    out << "  \"verdict\": \"" << verdict << "\",\n";
    out << "  \"irreducible\": " << (irreducible ? "true" : "false") << ",\n";
    out << "  \"reversible\": " << (reversible ? "true" : "false") << ",\n";
    out << "  \"spectrum_positive\": "
        << (spectrum_positive ? "true" : "false") << ",\n";
    out << "  \"invariant_distribution\": ";
    if (mu) {
        out << "[";
        for (int i = 0; i < mu->dim(); ++i) {
            out << (i ? ", " : "") << format_double((*mu)[i]);
        }
        out << "]";
    } else {
        out << "null";
    }
    out << ",\n  \"eigenvalues\": ";
    if (spec) {
        out << "[";
        for (std::size_t i = 0; i < spec->lambdas.size(); ++i) {
            out << (i ? ", " : "") << format_double(spec->lambdas[i]);
        }
        out << "]";
    } else {
        out << "null";
    }
    out << ",\n  \"distinct_eigenvalues\": ";
    if (spec) {
        out << "[";
        for (std::size_t i = 0; i < spec->gammas.size(); ++i) {
            out << (i ? ", " : "") << "{\"value\": "
                << format_double(spec->gammas[i])
                << ", \"multiplicity\": " << spec->multiplicities[i] << "}";
        }
        out << "]";
    } else {
        out << "null";
    }
    out << "\n}\n";
    write_output(cfg.output, out.str());
    return verdict == "NecessaryConditionsHold" ? 0 : 1;
}

struct EstimateConfig {
    CommonConfig common;
    std::vector<std::string> inputs;
    double interval = 1.0;
    int states = 0; // 0 means infer
    double pseudocount = 0.0;
};

int run_estimate(const EstimateConfig &cfg) {
    std::vector<Trajectory> trajs;
    int n = cfg.states;
    for (const auto &path : cfg.inputs) {
        trajs.push_back(parse_trajectory_file(
            path, cfg.interval,
            cfg.states > 0 ? std::optional<int>(cfg.states) : std::nullopt));
        n = std::max(n, trajs.back().n);
    }
    if (n > cfg.common.max_dim) {
        std::ostringstream msg;
        msg << "state space of size " << n << " exceeds the cap of "
            << cfg.common.max_dim << " (override with --max-dim)";
        throw DimensionError(msg.str());
    }
    for (auto &traj : trajs) {
        traj.n = n;
    }

    EstimateOptions opts;
    opts.embed.tol = cfg.common.tol;
    opts.restrict_states = cfg.common.restrict_states;
    opts.pseudocount = cfg.pseudocount;
    EstimationResult result = estimate_generator(trajs, opts);

    bool identity = result.kept_states.size() == static_cast<std::size_t>(n);
    if (!identity) {
        std::ostringstream mapping;
        mapping << "state mapping (report index -> original index):";
        for (std::size_t i = 0; i < result.kept_states.size(); ++i) {
            mapping << (i ? "," : " ") << i << "->" << result.kept_states[i];
        }
        result.report.warnings.push_back(mapping.str());
    }

    write_output(cfg.common.output,
                 emit_report(result.report,
                             parse_format(cfg.common.format)
                                 .value_or(FileFormat::Json)));
    return exit_code(result.report);
}

struct SimulateConfig {
    CommonConfig common;
    std::int64_t steps = 0;
    double horizon = 0.0;
    double interval = 1.0;
    int initial = 0;
    std::uint64_t seed = 1;
};

int run_simulate(const SimulateConfig &cfg) {
    const Matrix raw =
        parse_matrix_file(cfg.common.input, parse_format(cfg.common.format));
    if (raw.dim() > cfg.common.max_dim) {
        throw DimensionError("matrix dimension exceeds the cap "
                             "(override with --max-dim)");
    }

    Trajectory traj;
    if (cfg.steps > 0) {
        const StochasticMatrix p = validate_stochastic(raw, cfg.common.tol);
        traj = simulate_dtmc(p, cfg.steps, cfg.initial, cfg.seed);
    } else {
        const GeneratorMatrix q = validate_generator(raw, cfg.common.tol);
        const JumpPath path =
            simulate_ctmc(q, cfg.horizon, cfg.initial, cfg.seed);
        traj = sample_skeleton(path, cfg.interval);
    }

    std::ostringstream out;
    write_trajectory(out, traj);
    write_output(cfg.common.output, out.str());
    return 0;
}

void add_common_flags(CLI::App *cmd, CommonConfig &cfg, bool with_input) {
    if (with_input) {
        cmd->add_option("input", cfg.input, "matrix file (CSV or JSON)");
    }
    cmd->add_option("-o,--output", cfg.output,
                    "output file (default: standard output)");
    cmd->add_option("--format", cfg.format,
                    "file format: csv or json (default: inferred from the "
                    "input extension; reports default to json)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", cfg.tol,
                    "validation and detailed-balance tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-dim", cfg.max_dim, "dimension cap for matrices")
        ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"reversible embedding of finite Markov chains: decide "
                 "embeddability, compute the unique reversible generator, "
                 "and estimate generators from sampled trajectories"};
    app.require_subcommand(1);

    CommonConfig check_cfg;
    auto *check = app.add_subcommand(
        "check", "validate a stochastic matrix and test the necessary "
                 "conditions (irreducibility, reversibility, positive "
                 "spectrum)");
    add_common_flags(check, check_cfg, true);
    check->add_flag("--restrict", check_cfg.restrict_states,
                    "restrict reducible input to its largest closed "
                    "communicating class");
    check->get_option("input")->required();

    CommonConfig embed_cfg;
    auto *embed = app.add_subcommand(
        "embed", "decide reversible embeddability and report the generator");
    add_common_flags(embed, embed_cfg, true);
    embed->add_flag("--restrict", embed_cfg.restrict_states,
                    "restrict reducible input to its largest closed "
                    "communicating class");
    embed->add_option("--batch", embed_cfg.batch_dir,
                      "process every .csv/.json matrix in a directory");

    EstimateConfig est_cfg;
    auto *estimate = app.add_subcommand(
        "estimate", "estimate the transition matrix from trajectories "
                    "(one state index per line) and recover the generator");
    estimate->add_option("inputs", est_cfg.inputs, "trajectory files")
        ->required();
    add_common_flags(estimate, est_cfg.common, false);
    estimate
        ->add_option("--interval", est_cfg.interval,
                     "sampling interval T between observations")
        ->check(CLI::PositiveNumber);
    estimate->add_option("--states", est_cfg.states,
                         "state-space size (default: 1 + largest index)");
    estimate->add_flag("--restrict", est_cfg.common.restrict_states,
                       "drop unvisited states and restrict to the largest "
                       "closed communicating class");
    estimate
        ->add_option("--pseudocount", est_cfg.pseudocount,
                     "additive smoothing applied to every transition count "
                     "(departs from the plain maximum likelihood estimate)")
        ->check(CLI::NonNegativeNumber);

    SimulateConfig sim_cfg;
    auto *simulate = app.add_subcommand(
        "simulate", "sample a trajectory: --steps for a discrete-time "
                    "chain, --horizon for the skeleton of a "
                    "continuous-time chain");
    add_common_flags(simulate, sim_cfg.common, true);
    simulate->get_option("input")->required();
    auto *steps_opt =
        simulate->add_option("--steps", sim_cfg.steps,
                             "number of discrete transitions to sample");
    auto *horizon_opt =
        simulate->add_option("--horizon", sim_cfg.horizon,
                             "time horizon for the continuous-time chain");
    steps_opt->excludes(horizon_opt);
    simulate
        ->add_option("--interval", sim_cfg.interval,
                     "skeleton sampling interval (with --horizon)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--initial", sim_cfg.initial, "initial state");
    simulate->add_option("--seed", sim_cfg.seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            return run_check(check_cfg);
        }
        if (embed->parsed()) {
            if (embed_cfg.input.empty() && embed_cfg.batch_dir.empty()) {
                std::cerr << "error: embed needs an input file or --batch\n";
                return 2;
            }
            return run_embed(embed_cfg);
        }
        if (estimate->parsed()) {
            return run_estimate(est_cfg);
        }
        if (simulate->parsed()) {
            if (sim_cfg.steps <= 0 && !(sim_cfg.horizon > 0.0)) {
                std::cerr
                    << "error: simulate needs --steps or --horizon > 0\n";
                return 2;
            }
            return run_simulate(sim_cfg);
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
