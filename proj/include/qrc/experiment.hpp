#pragma once

#include "qrc/graph.hpp"
#include "qrc/hamiltonian.hpp"
#include "qrc/readout.hpp"
#include "qrc/tasks.hpp"
#include "qrc/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace qrc {

enum class Task { Memory, Multitask, Diagnostics, Spectra };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Raised when more than the allowed fraction of realizations at a grid
/// point failed.
class SweepAborted : public Error {
public:
    using Error::Error;
};

struct ExperimentConfig {
    Task task = Task::Memory;
    int n_total = 8;
    int n_aux = 2;
    std::vector<int> k_values{3};
    std::vector<double> dt_values{3.0};
    std::vector<double> delta_x_values{10.0};
    std::vector<double> jx_values{0.0};
    // Fixed couplings; delta_x and jx come from the grid.
    HamiltonianSpec hamiltonian{};
    int realizations = 100;
    TrainTestSplit split{};
    std::uint64_t master_seed = 1;

    double lambda = 1e-3;
    double length_scale = 1.0;
    double penalty = 1.0;

    int tau_max = 6;
    double encoding_noise = 0.02;

    // multitask
    bool critical_scan = false;
    double threshold = 0.7;

    // diagnostics
    std::vector<double> times;

    // spectra
    bool central_half = false;

    int workers = 1;
    std::string out_dir = "out";
    double max_failure_fraction = 0.05;

    void validate() const;
    /// Times for diagnostics, defaulting to 60 log-spaced points on [0.1, 100].
    std::vector<double> time_grid() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults. Throws ConfigError on bad values or
/// unknown keys.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

/// FNV-1a hash of the canonical JSON form, as 16 hex digits. Worker count
/// and output path do not enter it.
std::string fingerprint(const ExperimentConfig& cfg);

/// Pure function of (master seed, grid index, realization index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t grid_index, std::size_t realization);

struct GridPoint {
    std::size_t index = 0;
    int k = 3;
    double dt = 3.0;
    double delta_x = 0.0;
    double jx = 0.0;
};

/// Cartesian product of the grids, k slowest and jx fastest.
std::vector<GridPoint> grid_points(const ExperimentConfig& cfg);

struct Stat {
    double mean = 0.0;
    double stderr_ = 0.0;
    int count = 0;
};

/// Mean and sample standard deviation over sqrt(count).
Stat summarize(std::span<const double> values);

struct SweepResult {
    GridPoint point;
    std::map<std::string, Stat> metrics;
    int n_realizations = 0;
    int n_failed = 0;
    std::vector<std::string> failures;
    std::vector<std::uint64_t> seeds;
    double seconds = 0.0;
    std::string fingerprint;
};

using Metrics = std::map<std::string, double>;

/// Single-realization pipelines. Each draws graph, disorder and inputs
/// from one stream seeded with `seed`.
Metrics memory_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed);
Metrics multitask_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed);
Metrics spectra_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed);
Metrics diagnostics_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed);

/// Runs every realization at one grid point on cfg.workers threads and
/// reduces in realization order.
SweepResult run_grid_point(const ExperimentConfig& cfg, const GridPoint& point);

std::vector<SweepResult> run_memory_experiment(const ExperimentConfig& cfg);
std::vector<SweepResult> run_spectra_experiment(const ExperimentConfig& cfg);
std::vector<SweepResult> run_diagnostics_experiment(const ExperimentConfig& cfg);

struct MultitaskOutcome {
    std::vector<SweepResult> results;
    // Keyed by (k, dt, jx) and filled only when cfg.critical_scan is set.
    std::map<std::tuple<int, double, double>, CriticalDisorder> critical;
};

/// With critical_scan set, the delta_x grid is walked in ascending order
/// per (k, dt, jx) and stops once mean XOR accuracy drops below the
/// threshold.
MultitaskOutcome run_multitask_experiment(const ExperimentConfig& cfg);

/// CSV tables plus manifest.json under cfg.out_dir.
void write_memory_outputs(const ExperimentConfig& cfg, const std::vector<SweepResult>& results, double seconds);
void write_multitask_outputs(const ExperimentConfig& cfg, const MultitaskOutcome& outcome, double seconds);
void write_spectra_outputs(const ExperimentConfig& cfg, const std::vector<SweepResult>& results, double seconds);
void write_diagnostics_outputs(const ExperimentConfig& cfg, const std::vector<SweepResult>& results, double seconds);

/// Graph record {n, k, seed, edges}.
nlohmann::json graph_to_json(const Graph& g, std::uint64_t seed);

} // namespace qrc
