// Command-line driver for the reservoir sweeps.
//
//   qrc memory      --config cfg.json --delta-x 0 10 30 --jx 0 3 --out runs/pd
//   qrc multitask   --k 2 3 4 5 6 7 --delta-x 0 5 10 20 40 --critical-scan
//   qrc spectra     --n 10 --k 2 5 9 --delta-x 0 10 40
//   qrc diagnostics --k 3 --delta-x 1 10 30 --realizations 20
//
// Exit codes: 0 success, 2 config error, 3 sweep aborted.

#include "qrc/experiment.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Overrides {
    std::string config_path;
    std::optional<int> n_total;
    std::vector<int> k;
    std::vector<double> dt;
    std::vector<double> delta_x;
    std::vector<double> jx;
    std::optional<double> delta_z;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    std::optional<std::string> out;
    std::optional<int> workers;
    std::optional<int> n_transient;
    std::optional<int> n_train;
    std::optional<int> n_test;
    std::optional<double> lambda;
    std::optional<double> length_scale;
    std::optional<double> penalty;
    std::optional<int> tau_max;
    std::optional<double> noise;
    std::optional<double> threshold;
    bool critical_scan = false;
    std::vector<double> times;
    bool central_half = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--n", o.n_total, "total number of spins");
    cmd->add_option("--k", o.k, "graph degrees");
    cmd->add_option("--dt", o.dt, "evolution time per input, units of 1/J^z");
    cmd->add_option("--delta-x", o.delta_x, "x-field disorder amplitudes");
    cmd->add_option("--jx", o.jx, "XX coupling strengths");
    cmd->add_option("--delta-z", o.delta_z, "z-field disorder amplitude");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--realizations", o.realizations, "realizations per grid point");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--workers", o.workers, "worker threads");
}

void add_learning(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--transient", o.n_transient, "discarded steps");
    cmd->add_option("--train", o.n_train, "training steps");
    cmd->add_option("--test", o.n_test, "test steps");
}

qrc::ExperimentConfig build_config(qrc::Task task, const Overrides& o) {
    qrc::ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream is(o.config_path);
        nlohmann::json j;
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            throw qrc::ConfigError(std::string("cannot parse ") + o.config_path + ": " + e.what());
        }
        if (j.contains("task") && qrc::task_from_string(j["task"].get<std::string>()) != task) {
            throw qrc::ConfigError("config file is for task '" + j["task"].get<std::string>() + "'");
        }
        cfg = qrc::config_from_json(j);
    }
    cfg.task = task;
    if (task == qrc::Task::Spectra && o.config_path.empty() && !o.n_total) cfg.n_total = 10;
    if (o.n_total) cfg.n_total = *o.n_total;
    if (!o.k.empty()) cfg.k_values = o.k;
    if (!o.dt.empty()) cfg.dt_values = o.dt;
    if (!o.delta_x.empty()) cfg.delta_x_values = o.delta_x;
    if (!o.jx.empty()) cfg.jx_values = o.jx;
    if (o.delta_z) cfg.hamiltonian.delta_z = *o.delta_z;
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.realizations) cfg.realizations = *o.realizations;
    if (o.out) cfg.out_dir = *o.out;
    if (o.workers) cfg.workers = *o.workers;
    if (o.n_transient) cfg.split.n_transient = *o.n_transient;
    if (o.n_train) cfg.split.n_train = *o.n_train;
    if (o.n_test) cfg.split.n_test = *o.n_test;
    if (o.lambda) cfg.lambda = *o.lambda;
    if (o.length_scale) cfg.length_scale = *o.length_scale;
    if (o.penalty) cfg.penalty = *o.penalty;
    if (o.tau_max) cfg.tau_max = *o.tau_max;
    if (o.noise) cfg.encoding_noise = *o.noise;
    if (o.threshold) cfg.threshold = *o.threshold;
    if (o.critical_scan) cfg.critical_scan = true;
    if (!o.times.empty()) cfg.times = o.times;
    if (o.central_half) cfg.central_half = true;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum reservoir computing on random regular graphs"};
    app.require_subcommand(1);

    Overrides o;
    auto* memory = app.add_subcommand("memory", "delayed Werner-parameter reconstruction");
    add_common(memory, o);
    add_learning(memory, o);
    memory->add_option("--lambda", o.lambda, "ridge regularization");
    memory->add_option("--tau-max", o.tau_max, "largest delay");
    memory->add_option("--noise", o.noise, "encoding noise amplitude");

    auto* multitask = app.add_subcommand("multitask", "AND/OR/XOR of two bit streams");
    add_common(multitask, o);
    add_learning(multitask, o);
    multitask->add_option("--length-scale", o.length_scale, "RBF kernel length scale on unit-norm standardized features");
    multitask->add_option("--penalty", o.penalty, "soft-margin penalty C");
    multitask->add_option("--threshold", o.threshold, "XOR accuracy threshold for the critical scan");
    multitask->add_flag("--critical-scan", o.critical_scan, "locate the critical disorder per degree");

    auto* spectra = app.add_subcommand("spectra", "mean level-spacing ratio");
    add_common(spectra, o);
    spectra->add_flag("--central-half", o.central_half, "use only the central half of the spectrum");

    auto* diagnostics = app.add_subcommand("diagnostics", "correlation norm and negativity trajectories");
    add_common(diagnostics, o);
    diagnostics->add_option("--times", o.times, "evolution times, units of 1/J^z");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        if (memory->parsed()) {
            const auto cfg = build_config(qrc::Task::Memory, o);
            const auto results = qrc::run_memory_experiment(cfg);
            qrc::write_memory_outputs(cfg, results, elapsed());
        } else if (multitask->parsed()) {
            const auto cfg = build_config(qrc::Task::Multitask, o);
            const auto outcome = qrc::run_multitask_experiment(cfg);
            qrc::write_multitask_outputs(cfg, outcome, elapsed());
        } else if (spectra->parsed()) {
            const auto cfg = build_config(qrc::Task::Spectra, o);
            const auto results = qrc::run_spectra_experiment(cfg);
            qrc::write_spectra_outputs(cfg, results, elapsed());
        } else if (diagnostics->parsed()) {
            const auto cfg = build_config(qrc::Task::Diagnostics, o);
            const auto results = qrc::run_diagnostics_experiment(cfg);
            qrc::write_diagnostics_outputs(cfg, results, elapsed());
        }
    } catch (const qrc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qrc::SweepAborted& e) {
        std::cerr << "sweep aborted: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
