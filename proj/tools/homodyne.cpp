// homodyne: command-line front end for the adaptive homodyne simulator.
//
// Subcommands:
//   simulate    Monte Carlo mutual-information estimate for one ensemble and policy
//   table1      heterodyne / Wiseman / LMMI comparison on 8psk, 16qam and star
//   bounds      capacity-bound curves I1, I2, I3 as CSV
//   holevo      Holevo information of an ensemble
//   povm        sampled POVM projectors as Wigner-ellipse CSV
//   trajectory  full (t, phi, dQ, posterior) record of one trajectory
//
// Exit codes: 0 success, 1 a result failed its sanity checks, 2 bad arguments
// or configuration.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "homodyne/ensemble.hpp"
#include "homodyne/information.hpp"
#include "homodyne/io.hpp"
#include "homodyne/montecarlo.hpp"
#include "homodyne/policy.hpp"
#include "homodyne/povm.hpp"
#include "homodyne/trajectory.hpp"

namespace fs = std::filesystem;
using namespace homodyne;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr const char *kOutDirEnv = "HOMODYNE_OUT_DIR";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raw flag values shared by the subcommands.
struct RunOptions {
    std::string ensemble = "8psk";
    std::string policy = "lmmi";
    std::size_t n = 10000;
    double dt = 5e-3;
    double t_max = 10.0;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::string out;
    std::string format = "json";
    double het_step = 0.1;
    double fixed_phase = 0.0;
    double wiseman_phase = 0.0;
    std::size_t fock_nmax = 100;
    bool crn = false;
};

std::string default_out_dir() {
    const char *env = std::getenv(kOutDirEnv);
    return (env != nullptr && *env != '\0') ? std::string(env) : std::string(".");
}

Ensemble resolve_ensemble(const std::string &source) {
    if (source == "8psk" || source == "16qam" || source == "star") {
        return make_builtin(source);
    }
    if (!fs::exists(source)) {
        throw ConfigError("ensemble '" + source +
                          "' is neither a builtin (8psk, 16qam, star) nor an existing file");
    }
    try {
        return load_ensemble_file(source);
    } catch (const std::exception &ex) {
        throw ConfigError(ex.what());
    }
}

PolicySpec resolve_policy(const RunOptions &o) {
    PolicySpec spec;
    try {
        spec.kind = parse_policy_kind(o.policy);
        spec.heterodyne_step = o.het_step;
        spec.fixed_phase = o.fixed_phase;
        spec.wiseman_initial_phase = o.wiseman_phase;
        spec.validate();
    } catch (const std::invalid_argument &ex) {
        throw ConfigError(ex.what());
    }
    return spec;
}

SimConfig resolve_sim(const RunOptions &o) {
    SimConfig cfg;
    cfg.dt = o.dt;
    cfg.t_max = o.t_max;
    cfg.seed = o.seed;
    try {
        cfg.validate();
    } catch (const std::invalid_argument &ex) {
        throw ConfigError(ex.what());
    }
    return cfg;
}

fs::path prepare_out_dir(const RunOptions &o) {
    const fs::path dir = o.out.empty() ? fs::path(default_out_dir()) : fs::path(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigError("cannot create output directory " + dir.string());
    }
    return dir;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json metadata() {
    return {{"created_utc", utc_timestamp()}, {"tool", "homodyne"}};
}

/// Resolved configuration echoed into every artifact.
json config_json(const std::string &command, const RunOptions &o, const Ensemble *ensemble,
                 const PolicySpec *policy, const SimConfig *sim) {
    json j = {{"command", command}, {"seed", o.seed}};
    if (ensemble != nullptr) {
        j["ensemble"] = ensemble_to_json(*ensemble);
        j["ensemble_source"] = o.ensemble;
    }
    if (policy != nullptr) {
        j["policy"] = to_json(*policy);
    }
    if (sim != nullptr) {
        j["sim"] = to_json(*sim);
    }
    return j;
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << text;
}

void write_json(const fs::path &path, const json &j) { write_text(path, j.dump(2) + "\n"); }

/// CSV artifacts carry their configuration in a sibling <name>.config.json.
fs::path sidecar(const fs::path &csv) {
    fs::path p = csv;
    p.replace_extension(".config.json");
    return p;
}

void add_sim_options(CLI::App &cmd, RunOptions &o) {
    cmd.add_option("--dt", o.dt, "Time step in cavity lifetimes")->capture_default_str();
    cmd.add_option("--tmax", o.t_max, "Final time")->capture_default_str();
    cmd.add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd.add_option("--workers", o.workers, "Worker threads")->capture_default_str();
    cmd.add_flag("--crn", o.crn, "Common random numbers: share noise streams across policies");
}

void add_policy_options(CLI::App &cmd, RunOptions &o) {
    cmd.add_option("--policy", o.policy, "heterodyne | wiseman | lmmi | fixed")
        ->capture_default_str();
    cmd.add_option("--het-step", o.het_step, "Heterodyne phase advance per step (rad)")
        ->capture_default_str();
    cmd.add_option("--fixed-phase", o.fixed_phase, "Phase of the fixed policy (rad)")
        ->capture_default_str();
    cmd.add_option("--wiseman-phase", o.wiseman_phase, "Initial phase of Wiseman's rule (rad)")
        ->capture_default_str();
}

void add_output_options(CLI::App &cmd, RunOptions &o) {
    cmd.add_option("--out", o.out,
                   std::string("Output directory (default: $") + kOutDirEnv + " or .)");
}

int report_violations(const std::vector<std::string> &violations, const std::string &context) {
    for (const auto &v : violations) {
        std::cerr << "invariant violated (" << context << "): " << v << '\n';
    }
    return violations.empty() ? 0 : kExitInvariant;
}

int cmd_simulate(const RunOptions &o) {
    if (o.format != "json" && o.format != "csv") {
        throw ConfigError("--format must be json or csv");
    }
    if (o.n == 0) {
        throw ConfigError("--n must be at least 1");
    }
    const auto ensemble = resolve_ensemble(o.ensemble);
    const auto policy = resolve_policy(o);
    const auto sim = resolve_sim(o);
    const auto dir = prepare_out_dir(o);

    if (o.n < 2) {
        std::cerr << "warning: with --n " << o.n
                  << " the standard deviation is undefined and reported as null\n";
    }
    const BatchOptions options{.workers = o.workers, .common_random_numbers = o.crn};
    const auto stats = run_batch(ensemble, policy, sim, o.n, options);

    json config = config_json("simulate", o, &ensemble, &policy, &sim);
    config["n"] = o.n;
    config["workers"] = o.workers;
    config["crn"] = o.crn;
    config["format"] = o.format;

    const std::string stem =
        "simulate_" + ensemble.label() + "_" + std::string(to_string(policy.kind));
    if (o.format == "json") {
        write_json(dir / (stem + ".json"),
                   {{"config", config}, {"result", to_json(stats)}, {"metadata", metadata()}});
    } else {
        std::ostringstream csv;
        write_batch_csv(csv, stats);
        write_text(dir / (stem + ".csv"), csv.str());
        write_json(sidecar(dir / (stem + ".csv")), {{"config", config}, {"metadata", metadata()}});
    }

    std::cout << ensemble.label() << ' ' << to_string(policy.kind) << " n=" << stats.n_trajectories
              << " mean_gain=" << format_real(stats.mean_gain) << " bits";
    if (stats.ci_half_width) {
        std::cout << " +- " << format_real(*stats.ci_half_width);
    }
    std::cout << '\n';
    return report_violations(check_batch_invariants(stats, ensemble), "simulate");
}

int cmd_table1(const RunOptions &o) {
    if (o.n == 0) {
        throw ConfigError("--n must be at least 1");
    }
    const auto sim = resolve_sim(o);
    const auto dir = prepare_out_dir(o);
    const BatchOptions options{.workers = o.workers, .common_random_numbers = o.crn};

    std::vector<PolicyComparison> rows;
    int status = 0;
    json results = json::array();
    for (const char *name : {"8psk", "16qam", "star"}) {
        const auto ensemble = make_builtin(name);
        rows.push_back(compare_policies(ensemble, sim, o.n, options, o.fock_nmax));
        results.push_back(to_json(rows.back()));
        for (const auto *s : {&rows.back().heterodyne, &rows.back().wiseman, &rows.back().lmmi}) {
            status |= report_violations(check_batch_invariants(*s, ensemble),
                                        std::string(name) + "/" +
                                            std::string(to_string(s->policy.kind)));
        }
    }
    json config = config_json("table1", o, nullptr, nullptr, &sim);
    config["n"] = o.n;
    config["workers"] = o.workers;
    config["crn"] = o.crn;
    config["fock_nmax"] = o.fock_nmax;

    const auto table = format_comparison_table(rows);
    write_json(dir / "table1.json",
               {{"config", config}, {"result", results}, {"metadata", metadata()}});
    write_text(dir / "table1.txt", table);
    std::cout << table;
    return status;
}

int cmd_bounds(const RunOptions &o, double max_photons, std::size_t steps) {
    if (!(max_photons > 0.0) || steps == 0) {
        throw ConfigError("bounds needs --nmax > 0 and --steps >= 1");
    }
    const auto dir = prepare_out_dir(o);
    const auto curve = capacity_curve(max_photons, steps);
    std::ostringstream csv;
    write_bounds_csv(csv, curve);
    write_text(dir / "bounds.csv", csv.str());
    json config = {{"command", "bounds"}, {"nmax", max_photons}, {"steps", steps}};
    write_json(sidecar(dir / "bounds.csv"), {{"config", config}, {"metadata", metadata()}});
    std::cout << "wrote " << (dir / "bounds.csv").string() << " (" << steps << " rows)\n";
    return 0;
}

int cmd_holevo(const RunOptions &o) {
    const auto ensemble = resolve_ensemble(o.ensemble);
    const auto dir = prepare_out_dir(o);
    double chi = 0.0;
    try {
        chi = holevo_information(ensemble, o.fock_nmax);
    } catch (const std::domain_error &ex) {
        throw ConfigError(ex.what());
    }
    const double n = mean_photon_number(ensemble);
    json config = config_json("holevo", o, &ensemble, nullptr, nullptr);
    config["fock_nmax"] = o.fock_nmax;
    json result = {{"holevo_chi", chi},
                   {"mean_photons", n},
                   {"heterodyne_limit_I1", capacity_heterodyne(n)},
                   {"holevo_bound_I3", capacity_holevo_bound(n)},
                   {"prior_entropy", shannon_entropy(ensemble.priors())}};
    write_json(dir / ("holevo_" + ensemble.label() + ".json"),
               {{"config", config}, {"result", result}, {"metadata", metadata()}});
    std::cout << ensemble.label() << " chi=" << format_real(chi) << " bits\n";
    return 0;
}

int cmd_povm(const RunOptions &o, std::size_t samples) {
    if (samples == 0) {
        throw ConfigError("--samples must be at least 1");
    }
    const auto ensemble = resolve_ensemble(o.ensemble);
    const auto policy = resolve_policy(o);
    const auto sim = resolve_sim(o);
    const auto dir = prepare_out_dir(o);

    const auto result = sample_povm(ensemble, policy, sim, samples, o.workers, o.crn);
    const auto path =
        dir / ("povm_" + ensemble.label() + "_" + std::string(to_string(policy.kind)) + ".csv");
    std::ostringstream csv;
    write_povm_csv(csv, result);
    write_text(path, csv.str());

    json config = config_json("povm", o, &ensemble, &policy, &sim);
    config["samples"] = samples;
    config["workers"] = o.workers;
    config["crn"] = o.crn;
    write_json(sidecar(path), {{"config", config}, {"metadata", metadata()}});

    double max_xi = 0.0;
    for (const auto &s : result) {
        max_xi = std::max(max_xi, std::abs(s.projector.xi));
    }
    std::cout << "wrote " << path.string() << " (" << samples
              << " ellipses, max |xi| = " << format_real(max_xi) << ")\n";
    return 0;
}

int cmd_trajectory(const RunOptions &o, std::size_t symbol) {
    const auto ensemble = resolve_ensemble(o.ensemble);
    const auto policy = resolve_policy(o);
    auto sim = resolve_sim(o);
    if (symbol >= ensemble.size()) {
        throw ConfigError("--symbol must be below the ensemble size " +
                          std::to_string(ensemble.size()));
    }
    const auto dir = prepare_out_dir(o);
    sim.log_record = true;

    Rng rng(derive_stream_seed(noise_master_seed(sim.seed, policy.kind, o.crn), 0,
                               StreamPurpose::noise));
    const auto result = run_trajectory(ensemble, symbol, policy, sim, rng);

    const auto path = dir / ("trajectory_" + ensemble.label() + "_" +
                             std::string(to_string(policy.kind)) + "_" + std::to_string(symbol) +
                             ".csv");
    std::ostringstream csv;
    write_record_csv(csv, *result.record, ensemble.size());
    write_text(path, csv.str());

    json config = config_json("trajectory", o, &ensemble, &policy, &sim);
    config["symbol"] = symbol;
    config["crn"] = o.crn;
    write_json(sidecar(path),
               {{"config", config},
                {"result", {{"total_gain", result.total_gain},
                            {"final_posterior", result.final_posterior}}},
                {"metadata", metadata()}});
    std::cout << "wrote " << path.string() << " (gain " << format_real(result.total_gain)
              << " bits)\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Adaptive homodyne detection of coherent-state ensembles"};
    app.require_subcommand(1);

    RunOptions opts;
    double bounds_nmax = 10.0;
    std::size_t bounds_steps = 100;
    std::size_t povm_samples = 50;
    std::size_t symbol = 0;

    auto *simulate = app.add_subcommand("simulate", "Estimate mutual information for one policy");
    simulate->add_option("--ensemble", opts.ensemble, "8psk | 16qam | star | path to JSON")
        ->capture_default_str();
    simulate->add_option("--n", opts.n, "Number of trajectories")->capture_default_str();
    simulate->add_option("--format", opts.format, "json | csv")->capture_default_str();
    add_policy_options(*simulate, opts);
    add_sim_options(*simulate, opts);
    add_output_options(*simulate, opts);

    auto *table1 = app.add_subcommand("table1", "Compare the three policies on all ensembles");
    table1->add_option("--n", opts.n, "Trajectories per cell")->capture_default_str();
    table1->add_option("--fock-nmax", opts.fock_nmax, "Fock truncation for chi")
        ->capture_default_str();
    add_sim_options(*table1, opts);
    add_output_options(*table1, opts);

    auto *bounds = app.add_subcommand("bounds", "Capacity bounds I1, I2, I3 as CSV");
    bounds->add_option("--nmax", bounds_nmax, "Largest mean photon number")->capture_default_str();
    bounds->add_option("--steps", bounds_steps, "Grid points")->capture_default_str();
    add_output_options(*bounds, opts);

    auto *holevo = app.add_subcommand("holevo", "Holevo information of an ensemble");
    holevo->add_option("--ensemble", opts.ensemble, "8psk | 16qam | star | path to JSON")
        ->capture_default_str();
    holevo->add_option("--fock-nmax", opts.fock_nmax, "Fock truncation")->capture_default_str();
    add_output_options(*holevo, opts);

    auto *povm = app.add_subcommand("povm", "Sample POVM projectors as Wigner ellipses");
    povm->add_option("--ensemble", opts.ensemble, "8psk | 16qam | star | path to JSON")
        ->capture_default_str();
    povm->add_option("--samples", povm_samples, "Number of sampled projectors")
        ->capture_default_str();
    add_policy_options(*povm, opts);
    add_sim_options(*povm, opts);
    add_output_options(*povm, opts);

    auto *trajectory = app.add_subcommand("trajectory", "Dump the record of one trajectory");
    trajectory->add_option("--ensemble", opts.ensemble, "8psk | 16qam | star | path to JSON")
        ->capture_default_str();
    trajectory->add_option("--symbol", symbol, "Index of the true state")->capture_default_str();
    add_policy_options(*trajectory, opts);
    add_sim_options(*trajectory, opts);
    add_output_options(*trajectory, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*simulate) {
            return cmd_simulate(opts);
        }
        if (*table1) {
            return cmd_table1(opts);
        }
        if (*bounds) {
            return cmd_bounds(opts, bounds_nmax, bounds_steps);
        }
        if (*holevo) {
            return cmd_holevo(opts);
        }
        if (*povm) {
            return cmd_povm(opts, povm_samples);
        }
        if (*trajectory) {
            return cmd_trajectory(opts, symbol);
        }
    } catch (const ConfigError &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitInvariant;
    }
    return kExitConfig;
}
