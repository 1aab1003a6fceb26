#include "qrc/experiment.hpp"

#include "qrc/diagnostics.hpp"
#include "qrc/qstate.hpp"
#include "qrc/reservoir.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace qrc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Runs fn(i) for i in [0, count) on `workers` threads. Each slot of the
// returned vector is written by exactly one job.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
    if (n_threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(n_threads, count);
    pool.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

struct Realization {
    Graph graph;
    CMatrix hamiltonian;
    Rng rng;
};

Realization draw_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed) {
    Realization r{Graph{}, CMatrix{}, Rng(seed)};
    r.graph = sample_rrg(cfg.n_total, point.k, r.rng);
    HamiltonianSpec spec = cfg.hamiltonian;
    spec.delta_x = point.delta_x;
    spec.jx = point.jx;
    const DisorderRealization dis = sample_disorder(spec, cfg.n_total, r.rng);
    r.hamiltonian = build_hamiltonian(r.graph, spec, dis);
    return r;
}

ReservoirConfig reservoir_config(const ExperimentConfig& cfg, double dt) {
    ReservoirConfig rc;
    rc.n_total = cfg.n_total;
    rc.n_aux = cfg.n_aux;
    rc.dt = dt;
    rc.aux_sites.resize(static_cast<std::size_t>(cfg.n_aux));
    std::iota(rc.aux_sites.begin(), rc.aux_sites.end(), 0);
    return rc;
}

struct SplitFeatures {
    RMatrix train;
    RMatrix test;
};

// Standardizes with statistics from the training rows only.
SplitFeatures split_features(const RMatrix& x, const TrainTestSplit& split) {
    const RMatrix train_raw = x.middleRows(split.n_transient, split.n_train);
    const RMatrix test_raw = x.middleRows(split.n_transient + split.n_train, split.n_test);
    const Standardizer st = Standardizer::fit(train_raw);
    return SplitFeatures{st.apply(train_raw), st.apply(test_raw)};
}

std::string metric_key(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
    return buf;
}

template <typename T>
std::vector<T> as_vector(const nlohmann::json& j, const char* key) {
    if (j.is_array()) return j.get<std::vector<T>>();
    if (j.is_number()) return {j.get<T>()};
    throw ConfigError(std::string("'") + key + "' must be a number or an array of numbers");
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream os(std::filesystem::path(cfg.out_dir) / name);
    if (!os) throw Error("cannot write " + (std::filesystem::path(cfg.out_dir) / name).string());
    os << std::setprecision(17);
    return os;
}

nlohmann::json manifest(const ExperimentConfig& cfg, const std::vector<SweepResult>& results, double seconds) {
    nlohmann::json m;
    m["config"] = to_json(cfg);
    m["config_fingerprint"] = fingerprint(cfg);
    m["seed_derivation"] = "splitmix64(master_seed, grid_index, realization_index)";
    m["feature_standardization"] = "zero mean, unit variance from the training split; SVM inputs further scaled by 1/sqrt(N_O)";
    m["elapsed_seconds"] = seconds;
    m["workers"] = cfg.workers;
    nlohmann::json points = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json p;
        p["grid_index"] = r.point.index;
        p["k"] = r.point.k;
        p["dt"] = r.point.dt;
        p["delta_x"] = r.point.delta_x;
        p["j_x"] = r.point.jx;
        p["n_realizations"] = r.n_realizations;
        p["n_failed"] = r.n_failed;
        p["failures"] = r.failures;
        p["seeds"] = r.seeds;
        p["seconds"] = r.seconds;
        points.push_back(std::move(p));
    }
    m["grid_points"] = std::move(points);
    return m;
}

void write_manifest(const ExperimentConfig& cfg, const nlohmann::json& m) {
    auto os = open_output(cfg, "manifest.json");
    os << m.dump(2) << '\n';
}

} // namespace

std::string to_string(Task task) {
    switch (task) {
    case Task::Memory:
        return "memory";
    case Task::Multitask:
        return "multitask";
    case Task::Diagnostics:
        return "diagnostics";
    case Task::Spectra:
        return "spectra";
    }
    return "unknown";
}

Task task_from_string(const std::string& name) {
    if (name == "memory") return Task::Memory;
    if (name == "multitask") return Task::Multitask;
    if (name == "diagnostics") return Task::Diagnostics;
    if (name == "spectra") return Task::Spectra;
    throw ConfigError("unknown task '" + name + "'");
}

void ExperimentConfig::validate() const {
    if (k_values.empty() || dt_values.empty() || delta_x_values.empty() || jx_values.empty()) {
        throw ConfigError("parameter grids must be non-empty");
    }
    if (realizations < 1) throw ConfigError("realizations must be at least 1");
    if (n_total < 2 || n_total > 12) throw ConfigError("n_total must lie in [2, 12]");
    if (n_aux < 1 || n_aux >= n_total) throw ConfigError("n_aux must lie in [1, n_total)");
    if ((task == Task::Memory || task == Task::Multitask) && n_aux != 2) {
        throw ConfigError("memory and multitask inputs occupy exactly two auxiliary qubits");
    }
    for (int k : k_values) {
        if (k < 1 || k >= n_total || (n_total * k) % 2 != 0 || (k == 1 && n_total > 2)) {
            throw ConfigError("no connected " + std::to_string(k) + "-regular graph on " + std::to_string(n_total) +
                              " vertices");
        }
    }
    for (double dt : dt_values) {
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    }
    for (double dx : delta_x_values) {
        if (!(dx >= 0.0)) throw ConfigError("delta_x must be non-negative");
    }
    if (!(hamiltonian.delta_z >= 0.0)) throw ConfigError("delta_z must be non-negative");
    if (task == Task::Memory || task == Task::Multitask) {
        try {
            split.validate(split.total());
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
        if (!(length_scale > 0.0) || !(penalty > 0.0)) throw ConfigError("length_scale and penalty must be positive");
    }
    if (task == Task::Memory) {
        if (tau_max < 1 || tau_max > split.n_transient) throw ConfigError("tau_max must lie in [1, n_transient]");
        if (!(encoding_noise >= 0.0 && encoding_noise < 1.0)) throw ConfigError("encoding_noise must lie in [0, 1)");
    }
    if (task == Task::Multitask && critical_scan) {
        if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
        if (!std::is_sorted(delta_x_values.begin(), delta_x_values.end())) {
            throw ConfigError("critical scan needs an ascending delta_x grid");
        }
    }
    if (task == Task::Diagnostics && !times.empty()) {
        for (double t : times) {
            if (!(t >= 0.0)) throw ConfigError("times must be non-negative");
        }
    }
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (!(max_failure_fraction >= 0.0 && max_failure_fraction < 1.0)) {
        throw ConfigError("max_failure_fraction must lie in [0, 1)");
    }
}

std::vector<double> ExperimentConfig::time_grid() const {
    if (!times.empty()) return times;
    return log_spaced_times(0.1, 100.0, 60);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["task"] = to_string(cfg.task);
    j["n_total"] = cfg.n_total;
    j["n_aux"] = cfg.n_aux;
    j["k"] = cfg.k_values;
    j["dt"] = cfg.dt_values;
    j["delta_x"] = cfg.delta_x_values;
    j["jx"] = cfg.jx_values;
    j["jz"] = cfg.hamiltonian.jz;
    j["hx"] = cfg.hamiltonian.hx;
    j["hz"] = cfg.hamiltonian.hz;
    j["delta_z"] = cfg.hamiltonian.delta_z;
    j["realizations"] = cfg.realizations;
    j["n_transient"] = cfg.split.n_transient;
    j["n_train"] = cfg.split.n_train;
    j["n_test"] = cfg.split.n_test;
    j["master_seed"] = cfg.master_seed;
    j["lambda"] = cfg.lambda;
    j["length_scale"] = cfg.length_scale;
    j["penalty"] = cfg.penalty;
    j["tau_max"] = cfg.tau_max;
    j["encoding_noise"] = cfg.encoding_noise;
    j["critical_scan"] = cfg.critical_scan;
    j["threshold"] = cfg.threshold;
    j["times"] = cfg.time_grid();
    j["central_half"] = cfg.central_half;
    j["max_failure_fraction"] = cfg.max_failure_fraction;
    j["workers"] = cfg.workers;
    j["out_dir"] = cfg.out_dir;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c = std::move(base);
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "task") c.task = task_from_string(value.get<std::string>());
            else if (key == "n_total") c.n_total = value.get<int>();
            else if (key == "n_aux") c.n_aux = value.get<int>();
            else if (key == "k") c.k_values = as_vector<int>(value, "k");
            else if (key == "dt") c.dt_values = as_vector<double>(value, "dt");
            else if (key == "delta_x") c.delta_x_values = as_vector<double>(value, "delta_x");
            else if (key == "jx") c.jx_values = as_vector<double>(value, "jx");
            else if (key == "jz") c.hamiltonian.jz = value.get<double>();
            else if (key == "hx") c.hamiltonian.hx = value.get<double>();
            else if (key == "hz") c.hamiltonian.hz = value.get<double>();
            else if (key == "delta_z") c.hamiltonian.delta_z = value.get<double>();
            else if (key == "realizations") c.realizations = value.get<int>();
            else if (key == "n_transient") c.split.n_transient = value.get<int>();
            else if (key == "n_train") c.split.n_train = value.get<int>();
            else if (key == "n_test") c.split.n_test = value.get<int>();
            else if (key == "master_seed") c.master_seed = value.get<std::uint64_t>();
            else if (key == "lambda") c.lambda = value.get<double>();
            else if (key == "length_scale") c.length_scale = value.get<double>();
            else if (key == "penalty") c.penalty = value.get<double>();
            else if (key == "tau_max") c.tau_max = value.get<int>();
            else if (key == "encoding_noise") c.encoding_noise = value.get<double>();
            else if (key == "critical_scan") c.critical_scan = value.get<bool>();
            else if (key == "threshold") c.threshold = value.get<double>();
            else if (key == "times") c.times = as_vector<double>(value, "times");
            else if (key == "central_half") c.central_half = value.get<bool>();
            else if (key == "max_failure_fraction") c.max_failure_fraction = value.get<double>();
            else if (key == "workers") c.workers = value.get<int>();
            else if (key == "out_dir") c.out_dir = value.get<std::string>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

std::string fingerprint(const ExperimentConfig& cfg) {
    nlohmann::json j = to_json(cfg);
    j.erase("workers");
    j.erase("out_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t grid_index, std::size_t realization) {
    std::uint64_t x = splitmix64(master_seed);
    x = splitmix64(x ^ (0xA0761D6478BD642FULL * (static_cast<std::uint64_t>(grid_index) + 1)));
    x = splitmix64(x ^ (0xE7037ED1A0B428DBULL * (static_cast<std::uint64_t>(realization) + 1)));
    return x;
}

std::vector<GridPoint> grid_points(const ExperimentConfig& cfg) {
    std::vector<GridPoint> out;
    std::size_t index = 0;
    for (int k : cfg.k_values) {
        for (double dt : cfg.dt_values) {
            for (double dx : cfg.delta_x_values) {
                for (double jx : cfg.jx_values) out.push_back(GridPoint{index++, k, dt, dx, jx});
            }
        }
    }
    return out;
}

Stat summarize(std::span<const double> values) {
    Stat s;
    s.count = static_cast<int>(values.size());
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        s.stderr_ = sd / std::sqrt(static_cast<double>(values.size()));
    }
    return s;
}

Metrics memory_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed) {
    Realization r = draw_realization(cfg, point, seed);
    const ReservoirChannel channel(evolution_operator(herm_eig(r.hamiltonian), point.dt),
                                   reservoir_config(cfg, point.dt));

    MemoryTaskSpec task;
    task.sequence_length = cfg.split.total();
    task.tau_max = cfg.tau_max;
    task.encoding_noise = cfg.encoding_noise;
    task.seed = r.rng();
    const MemoryInputs inputs = gen_memory_inputs(task);

    std::vector<DensityMatrix> encoded;
    encoded.reserve(inputs.encoded.size());
    for (double eta : inputs.encoded) encoded.push_back(encode_werner(eta));
    const auto records =
        run_reservoir(encoded, channel, DensityMatrix::maximally_mixed(cfg.n_total - cfg.n_aux).matrix());
    const SplitFeatures x = split_features(feature_matrix(records), cfg.split);

    const auto train_begin = static_cast<std::size_t>(cfg.split.n_transient);
    const auto test_begin = train_begin + static_cast<std::size_t>(cfg.split.n_train);
    Metrics m;
    std::vector<double> capacities;
    for (int tau = 1; tau <= cfg.tau_max; ++tau) {
        const DelayedTargets targets = memory_targets(inputs.clean, tau);
        const RVector y_train = Eigen::Map<const RVector>(targets.values.data() + train_begin, cfg.split.n_train);
        const std::span<const double> y_test(targets.values.data() + test_begin,
                                             static_cast<std::size_t>(cfg.split.n_test));
        const RidgeModel model = ridge_fit(x.train, y_train, cfg.lambda);
        const RVector pred = ridge_predict(model, x.test);
        const std::span<const double> pred_span(pred.data(), static_cast<std::size_t>(pred.size()));
        const double cap = pearson_capacity(y_test, pred_span);
        capacities.push_back(cap);
        m["capacity_tau" + std::to_string(tau)] = cap;
        m["mse_tau" + std::to_string(tau)] = mse(y_test, pred_span);
        m["weights_norm_tau" + std::to_string(tau)] = model.weights.norm();
    }
    m["total_capacity"] = total_memory_capacity(capacities);
    return m;
}

Metrics multitask_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed) {
    Realization r = draw_realization(cfg, point, seed);
    const ReservoirChannel channel(evolution_operator(herm_eig(r.hamiltonian), point.dt),
                                   reservoir_config(cfg, point.dt));

    MultitaskSpec task;
    task.sequence_length = cfg.split.total();
    task.seed = r.rng();
    const MultitaskSequence seq = gen_multitask(task);

    std::vector<DensityMatrix> encoded;
    encoded.reserve(seq.bits_a.size());
    for (std::size_t n = 0; n < seq.bits_a.size(); ++n) encoded.push_back(encode_bits(seq.bits_a[n], seq.bits_b[n]));
    const auto records =
        run_reservoir(encoded, channel, DensityMatrix::maximally_mixed(cfg.n_total - cfg.n_aux).matrix());
    SplitFeatures x = split_features(feature_matrix(records), cfg.split);
    // Unit expected squared norm per feature vector, so the kernel width
    // does not shrink with the number of observables.
    const double norm = 1.0 / std::sqrt(static_cast<double>(x.train.cols()));
    x.train *= norm;
    x.test *= norm;

    const auto train_begin = static_cast<std::size_t>(cfg.split.n_transient);
    const auto test_begin = train_begin + static_cast<std::size_t>(cfg.split.n_train);
    SvmOptions opts;
    opts.length_scale = cfg.length_scale;
    opts.penalty = cfg.penalty;

    Metrics m;
    const std::pair<const char*, const std::vector<int>*> ops[] = {
        {"and", &seq.targets_and}, {"or", &seq.targets_or}, {"xor", &seq.targets_xor}};
    for (const auto& [name, bits] : ops) {
        RVector labels(cfg.split.n_train);
        for (int i = 0; i < cfg.split.n_train; ++i) labels(i) = (*bits)[train_begin + i] ? 1.0 : -1.0;
        const KernelModel model = svm_fit(x.train, labels, opts);
        const RVector pred = svm_predict(model, x.test);
        std::vector<int> predicted(static_cast<std::size_t>(cfg.split.n_test));
        for (int i = 0; i < cfg.split.n_test; ++i) predicted[i] = pred(i) > 0.0 ? 1 : 0;
        const std::span<const int> truth(bits->data() + test_begin, static_cast<std::size_t>(cfg.split.n_test));
        m[std::string("accuracy_") + name] = accuracy_rescaled(predicted, truth);
        m[std::string("support_vectors_") + name] = static_cast<double>(model.support_vectors.rows());
    }
    return m;
}

Metrics spectra_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed) {
    const Realization r = draw_realization(cfg, point, seed);
    const RVector e = herm_eigenvalues(r.hamiltonian);
    LevelSpacingOptions opts;
    opts.central_half = cfg.central_half;
    return Metrics{{"r", level_spacing_ratio(std::span<const double>(e.data(), static_cast<std::size_t>(e.size())),
                                             opts)}};
}

Metrics diagnostics_realization(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed) {
    Realization r = draw_realization(cfg, point, seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const DensityMatrix rho_s = encode_werner(unit(r.rng));
    const DensityMatrix rho_r = DensityMatrix::basis_state(cfg.n_total - cfg.n_aux, 0);
    const auto times = cfg.time_grid();
    const auto chi = chi_norm_trajectory(r.hamiltonian, rho_s, rho_r, times);
    const auto neg = negativity_trajectory(r.hamiltonian, rho_s, rho_r, times);
    Metrics m;
    for (std::size_t i = 0; i < times.size(); ++i) {
        m[metric_key("chi_", i)] = chi[i];
        m[metric_key("negativity_", i)] = neg[i];
    }
    return m;
}

SweepResult run_grid_point(const ExperimentConfig& cfg, const GridPoint& point) {
    const auto start = Clock::now();
    Metrics (*pipeline)(const ExperimentConfig&, const GridPoint&, std::uint64_t) = nullptr;
    switch (cfg.task) {
    case Task::Memory:
        pipeline = memory_realization;
        break;
    case Task::Multitask:
        pipeline = multitask_realization;
        break;
    case Task::Spectra:
        pipeline = spectra_realization;
        break;
    case Task::Diagnostics:
        pipeline = diagnostics_realization;
        break;
    }

    const auto n = static_cast<std::size_t>(cfg.realizations);
    std::vector<std::uint64_t> seeds(n);
    for (std::size_t i = 0; i < n; ++i) seeds[i] = derive_seed(cfg.master_seed, point.index, i);

    std::vector<std::optional<Metrics>> outcomes(n);
    std::vector<std::string> errors(n);
    parallel_for(n, cfg.workers, [&](std::size_t i) {
        try {
            outcomes[i] = pipeline(cfg, point, seeds[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    SweepResult result;
    result.point = point;
    result.seeds = seeds;
    result.fingerprint = fingerprint(cfg);
    std::map<std::string, std::vector<double>> columns;
    for (std::size_t i = 0; i < n; ++i) {
        if (!outcomes[i]) {
            ++result.n_failed;
            result.failures.push_back("realization " + std::to_string(i) + ": " + errors[i]);
            std::cerr << "[qrc] grid point " << point.index << " realization " << i << " failed: " << errors[i]
                      << '\n';
            continue;
        }
        ++result.n_realizations;
        for (const auto& [key, value] : *outcomes[i]) columns[key].push_back(value);
    }
    if (static_cast<double>(result.n_failed) > cfg.max_failure_fraction * static_cast<double>(n)) {
        throw SweepAborted("grid point " + std::to_string(point.index) + ": " + std::to_string(result.n_failed) +
                           " of " + std::to_string(n) + " realizations failed");
    }
    for (const auto& [key, values] : columns) result.metrics[key] = summarize(values);
    result.seconds = seconds_since(start);
    return result;
}

namespace {

std::vector<SweepResult> run_all(const ExperimentConfig& cfg, Task expected) {
    cfg.validate();
    if (cfg.task != expected) throw ConfigError("config task is '" + to_string(cfg.task) + "'");
    std::vector<SweepResult> out;
    for (const auto& point : grid_points(cfg)) {
        out.push_back(run_grid_point(cfg, point));
        std::cerr << "[qrc] " << to_string(cfg.task) << " point " << point.index << " (k=" << point.k
                  << ", dt=" << point.dt << ", delta_x=" << point.delta_x << ", jx=" << point.jx << ") done in "
                  << out.back().seconds << " s\n";
    }
    return out;
}

} // namespace

std::vector<SweepResult> run_memory_experiment(const ExperimentConfig& cfg) { return run_all(cfg, Task::Memory); }

std::vector<SweepResult> run_spectra_experiment(const ExperimentConfig& cfg) { return run_all(cfg, Task::Spectra); }

std::vector<SweepResult> run_diagnostics_experiment(const ExperimentConfig& cfg) {
    return run_all(cfg, Task::Diagnostics);
}

MultitaskOutcome run_multitask_experiment(const ExperimentConfig& cfg) {
    if (!cfg.critical_scan) return MultitaskOutcome{run_all(cfg, Task::Multitask), {}};

    cfg.validate();
    if (cfg.task != Task::Multitask) throw ConfigError("config task is '" + to_string(cfg.task) + "'");
    const auto points = grid_points(cfg);
    auto lookup = [&](int k, double dt, double dx, double jx) -> const GridPoint& {
        for (const auto& p : points) {
            if (p.k == k && p.dt == dt && p.delta_x == dx && p.jx == jx) return p;
        }
        throw Error("grid point not found");
    };

    MultitaskOutcome outcome;
    for (double dt : cfg.dt_values) {
        for (double jx : cfg.jx_values) {
            const AccuracyFn accuracy = [&](int k, double dx) {
                const GridPoint& p = lookup(k, dt, dx, jx);
                outcome.results.push_back(run_grid_point(cfg, p));
                std::cerr << "[qrc] multitask scan k=" << k << " delta_x=" << dx << " xor="
                          << outcome.results.back().metrics.at("accuracy_xor").mean << '\n';
                return outcome.results.back().metrics.at("accuracy_xor").mean;
            };
            const auto scan = critical_disorder_scan(cfg.k_values, cfg.threshold, cfg.delta_x_values, accuracy);
            for (const auto& [k, crit] : scan) outcome.critical[{k, dt, jx}] = crit;
        }
    }
    std::sort(outcome.results.begin(), outcome.results.end(),
              [](const SweepResult& a, const SweepResult& b) { return a.point.index < b.point.index; });
    return outcome;
}

void write_memory_outputs(const ExperimentConfig& cfg, const std::vector<SweepResult>& results, double seconds) {
    auto per_tau = open_output(cfg, "memory.csv");
    per_tau << "delta_x,j_x,k,dt,tau,capacity_mean,capacity_stderr,mse_mean,mse_stderr,n_realizations,"
               "config_fingerprint\n";
    auto total = open_output(cfg, "memory_total.csv");
    total << "delta_x,j_x,k,dt,total_capacity_mean,total_capacity_stderr,n_realizations,config_fingerprint\n";
    for (const auto& r : results) {
        const auto& p = r.point;
        for (int tau = 1; tau <= cfg.tau_max; ++tau) {
            const Stat c = r.metrics.at("capacity_tau" + std::to_string(tau));
            const Stat e = r.metrics.at("mse_tau" + std::to_string(tau));
            per_tau << p.delta_x << ',' << p.jx << ',' << p.k << ',' << p.dt << ',' << tau << ',' << c.mean << ','
                    << c.stderr_ << ',' << e.mean << ',' << e.stderr_ << ',' << r.n_realizations << ','
                    << r.fingerprint << '\n';
        }
        const Stat t = r.metrics.at("total_capacity");
        total << p.delta_x << ',' << p.jx << ',' << p.k << ',' << p.dt << ',' << t.mean << ',' << t.stderr_ << ','
              << r.n_realizations << ',' << r.fingerprint << '\n';
    }
    write_manifest(cfg, manifest(cfg, results, seconds));
}

void write_multitask_outputs(const ExperimentConfig& cfg, const MultitaskOutcome& outcome, double seconds) {
    auto os = open_output(cfg, "multitask.csv");
    os << "delta_x,j_x,k,dt,operation,accuracy_mean,accuracy_stderr,n_realizations,config_fingerprint\n";
    for (const auto& r : outcome.results) {
        const auto& p = r.point;
        for (const char* op : {"and", "or", "xor"}) {
            const Stat s = r.metrics.at(std::string("accuracy_") + op);
            os << p.delta_x << ',' << p.jx << ',' << p.k << ',' << p.dt << ',' << op << ',' << s.mean << ','
               << s.stderr_ << ',' << r.n_realizations << ',' << r.fingerprint << '\n';
        }
    }
    nlohmann::json m = manifest(cfg, outcome.results, seconds);
    if (cfg.critical_scan) {
        auto crit = open_output(cfg, "critical_disorder.csv");
        crit << "k,dt,j_x,threshold,delta_x_c,right_censored,left_censored,config_fingerprint\n";
        const std::string fp = fingerprint(cfg);
        for (const auto& [key, c] : outcome.critical) {
            const auto& [k, dt, jx] = key;
            crit << k << ',' << dt << ',' << jx << ',' << cfg.threshold << ',' << c.value << ','
                 << (c.right_censored ? 1 : 0) << ',' << (c.left_censored ? 1 : 0) << ',' << fp << '\n';
        }
    }
    write_manifest(cfg, m);
}

void write_spectra_outputs(const ExperimentConfig& cfg, const std::vector<SweepResult>& results, double seconds) {
    auto os = open_output(cfg, "spectra.csv");
    os << "delta_x,j_x,k,n_total,r_mean,r_stderr,n_realizations,config_fingerprint\n";
    for (const auto& r : results) {
        const auto& p = r.point;
        const Stat s = r.metrics.at("r");
        os << p.delta_x << ',' << p.jx << ',' << p.k << ',' << cfg.n_total << ',' << s.mean << ',' << s.stderr_ << ','
           << r.n_realizations << ',' << r.fingerprint << '\n';
    }
    write_manifest(cfg, manifest(cfg, results, seconds));
}

void write_diagnostics_outputs(const ExperimentConfig& cfg, const std::vector<SweepResult>& results, double seconds) {
    auto os = open_output(cfg, "diagnostics.csv");
    os << "delta_x,j_x,k,t,chi_mean,chi_stderr,negativity_mean,negativity_stderr,n_realizations,config_fingerprint\n";
    const auto times = cfg.time_grid();
    for (const auto& r : results) {
        const auto& p = r.point;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Stat c = r.metrics.at(metric_key("chi_", i));
            const Stat e = r.metrics.at(metric_key("negativity_", i));
            os << p.delta_x << ',' << p.jx << ',' << p.k << ',' << times[i] << ',' << c.mean << ',' << c.stderr_ << ','
               << e.mean << ',' << e.stderr_ << ',' << r.n_realizations << ',' << r.fingerprint << '\n';
        }
    }
    write_manifest(cfg, manifest(cfg, results, seconds));
}

nlohmann::json graph_to_json(const Graph& g, std::uint64_t seed) {
    nlohmann::json j;
    j["n"] = g.n_vertices;
    j["k"] = g.degree;
    j["seed"] = seed;
    nlohmann::json edges = nlohmann::json::array();
    for (auto [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    return j;
}

} // namespace qrc
