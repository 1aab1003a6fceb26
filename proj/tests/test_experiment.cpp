#include "qrc/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace qrc;

namespace {

ExperimentConfig small_memory() {
    ExperimentConfig cfg;
    cfg.task = Task::Memory;
    cfg.n_total = 5;
    cfg.k_values = {2, 4};
    cfg.delta_x_values = {1.0};
    cfg.realizations = 6;
    cfg.split = {60, 200, 60};
    cfg.tau_max = 2;
    return cfg;
}

} // namespace

TEST_CASE("config JSON round trip") {
    ExperimentConfig cfg = small_memory();
    cfg.jx_values = {0.0, 3.0};
    cfg.hamiltonian.delta_z = 0.3;
    cfg.master_seed = 77;
    cfg.lambda = 1e-4;
    cfg.times = {0.5, 2.0};
    const nlohmann::json j = to_json(cfg);
    const ExperimentConfig back = config_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(fingerprint(back) == fingerprint(cfg));
    CHECK(back.split.n_train == 200);
    CHECK(back.hamiltonian.delta_z == 0.3);
}

TEST_CASE("config errors") {
    nlohmann::json j = to_json(small_memory());
    j["bogus"] = 1;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"task", "juggling"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"realizations", "many"}}), ConfigError);

    ExperimentConfig cfg = small_memory();
    cfg.k_values = {3};
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // 5 * 3 is odd
    cfg.k_values = {1};
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // never connected
    cfg = small_memory();
    cfg.n_aux = 3;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_memory();
    cfg.lambda = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("fingerprint ignores execution settings") {
    ExperimentConfig a = small_memory();
    ExperimentConfig b = a;
    b.workers = 8;
    b.out_dir = "elsewhere";
    CHECK(fingerprint(a) == fingerprint(b));
    b.master_seed = 2;
    CHECK(fingerprint(a) != fingerprint(b));
    CHECK(fingerprint(a).size() == 16);
}

TEST_CASE("derived seeds") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 3; ++m)
        for (std::size_t g = 0; g < 10; ++g)
            for (std::size_t r = 0; r < 100; ++r) seen.insert(derive_seed(m, g, r));
    CHECK(seen.size() == 3000);
}

TEST_CASE("grid ordering") {
    ExperimentConfig cfg;
    cfg.k_values = {2, 3};
    cfg.delta_x_values = {0.0, 5.0};
    cfg.jx_values = {0.0, 1.0};
    const auto pts = grid_points(cfg);
    REQUIRE(pts.size() == 8);
    CHECK(pts[0].k == 2);
    CHECK(pts[1].jx == 1.0);
    CHECK(pts[2].delta_x == 5.0);
    CHECK(pts[4].k == 3);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].index == i);
}

TEST_CASE("summary statistics") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const Stat s = summarize(v);
    CHECK(s.mean == 2.5);
    CHECK(s.count == 4);
    CHECK(s.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(summarize(std::vector<double>{7.0}).stderr_ == 0.0);
}

TEST_CASE("worker count does not change results") {
    ExperimentConfig one = small_memory();
    ExperimentConfig many = one;
    many.workers = 8;
    const auto a = run_memory_experiment(one);
    const auto b = run_memory_experiment(many);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].seeds == b[i].seeds);
        REQUIRE(a[i].metrics.size() == b[i].metrics.size());
        for (const auto& [key, stat] : a[i].metrics) {
            CHECK(stat.mean == b[i].metrics.at(key).mean);
            CHECK(stat.stderr_ == b[i].metrics.at(key).stderr_);
        }
    }
}

TEST_CASE("failing realizations abort the sweep") {
    ExperimentConfig cfg;
    cfg.task = Task::Spectra;
    cfg.n_total = 4;
    cfg.realizations = 3;
    GridPoint p;
    p.k = 1; // no connected 1-regular graph on 4 vertices
    CHECK_THROWS_AS(run_grid_point(cfg, p), SweepAborted);
}

TEST_CASE("pipelines produce their metrics") {
    ExperimentConfig cfg = small_memory();
    GridPoint p;
    p.k = 2;
    p.delta_x = 1.0;
    const Metrics mem = memory_realization(cfg, p, 5);
    CHECK(mem.count("total_capacity") == 1);
    CHECK(mem.at("total_capacity") >= 0.0);
    CHECK(mem.at("total_capacity") <= 1.0);
    CHECK(mem.count("mse_tau1") == 1);

    cfg.task = Task::Multitask;
    const Metrics mt = multitask_realization(cfg, p, 5);
    for (const char* key : {"accuracy_and", "accuracy_or", "accuracy_xor"}) {
        CHECK(mt.at(key) >= 0.0);
        CHECK(mt.at(key) <= 1.0);
    }

    cfg.task = Task::Spectra;
    const double r = spectra_realization(cfg, p, 5).at("r");
    CHECK(r > 0.0);
    CHECK(r < 1.0);

    cfg.task = Task::Diagnostics;
    cfg.times = {0.0, 1.0};
    const Metrics d = diagnostics_realization(cfg, p, 5);
    CHECK(d.size() == 4);
}

TEST_CASE("outputs are written with the fingerprint") {
    ExperimentConfig cfg;
    cfg.task = Task::Spectra;
    cfg.n_total = 6;
    cfg.k_values = {3};
    cfg.realizations = 4;
    cfg.out_dir = (std::filesystem::temp_directory_path() / "qrc_test_outputs").string();
    std::filesystem::remove_all(cfg.out_dir);
    const auto results = run_spectra_experiment(cfg);
    write_spectra_outputs(cfg, results, 0.0);
    std::ifstream csv(std::filesystem::path(cfg.out_dir) / "spectra.csv");
    std::string header;
    std::string row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header.find("config_fingerprint") != std::string::npos);
    CHECK(row.find(fingerprint(cfg)) != std::string::npos);

    std::ifstream manifest(std::filesystem::path(cfg.out_dir) / "manifest.json");
    const nlohmann::json m = nlohmann::json::parse(manifest);
    CHECK(m.at("config_fingerprint") == fingerprint(cfg));
    std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("graph record") {
    const Graph g{4, 3, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    const auto j = graph_to_json(g, 9);
    CHECK(j.at("n") == 4);
    CHECK(j.at("k") == 3);
    CHECK(j.at("seed") == 9);
    CHECK(j.at("edges").size() == 6);
}
