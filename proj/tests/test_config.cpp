#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "edgecache/config.hpp"
#include "edgecache/errors.hpp"

using namespace edgecache;

TEST_CASE("decibel conversions are exact inverses") {
    CHECK(db_to_linear(20.0) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(db_to_linear(16.9) == doctest::Approx(48.977881936844595).epsilon(1e-12));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(linear_to_db(db_to_linear(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
}

TEST_CASE("both presets validate and expose the documented schedule") {
    const RunConfig desk = desk_config();
    desk.validate();
    CHECK(desk.n_cycles == 2500);
    CHECK(desk.eval_cycles() == 500);
    CHECK(desk.train_cycles() == 2000);
    CHECK(desk.world.topology.n_stations == 3);
    CHECK(desk.world.topology.n_users == 12);
    CHECK(desk.world.workload.catalog_size == 50);
    CHECK(desk.world.cache_capacity == 5);
    CHECK(desk.world.topology.station_power_w ==
          doctest::Approx(db_to_linear(16.9)).epsilon(1e-12));
    CHECK(desk.world.topology.cloud.tx_power_w == doctest::Approx(100.0).epsilon(1e-12));

    const RunConfig paper = paper_config();
    paper.validate();
    CHECK(paper.n_cycles == 40000);
    CHECK(paper.world.topology.n_stations == 5);
    CHECK(paper.world.topology.n_users == 30);
    CHECK(paper.world.workload.catalog_size == 500);
    CHECK(paper.world.cache_capacity == 40);
    CHECK(paper.world.workload.drift_period == 10000);
    CHECK(paper.beta_list.size() == 6);

    CHECK(preset_config("desk").n_cycles == desk.n_cycles);
    CHECK(preset_config("paper").n_cycles == paper.n_cycles);
    CHECK_THROWS_AS(preset_config("enormous"), ConfigError);
}

TEST_CASE("overrides apply partially and convert powers from dB") {
    RunConfig cfg = desk_config();
    const nlohmann::json doc{
        {"n_cycles", 1200},
        {"seeds", {7, 8}},
        {"world",
         {{"topology", {{"n_users", 9}, {"station_power_db", 10.0}}},
          {"channel", {{"bandwidth_hz", 2e6}}},
          {"workload", {{"zipf_exponent", 0.9}}}}},
        {"learner", {{"actor_rate", 0.003}}},
    };
    apply_overrides(cfg, doc);
    CHECK(cfg.n_cycles == 1200);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{7, 8});
    CHECK(cfg.world.topology.n_users == 9);
    CHECK(cfg.world.topology.station_power_w == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(cfg.world.channel.bandwidth_hz == 2e6);
    CHECK(cfg.world.workload.zipf_exponent == 0.9);
    CHECK(cfg.learner.actor_rate == 0.003);
    // Untouched fields keep their preset values.
    CHECK(cfg.world.topology.n_stations == 3);
    CHECK(cfg.world.cache_capacity == 5);
}

TEST_CASE("unknown override keys are rejected by name") {
    RunConfig cfg = desk_config();
    try {
        apply_overrides(cfg, nlohmann::json{{"n_cycels", 100}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("n_cycels") != std::string::npos);
    }
    try {
        apply_overrides(
            cfg, nlohmann::json{{"world", {{"topology", {{"radius", 1.0}}}}}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("radius") != std::string::npos);
    }
}

TEST_CASE("config files overlay the chosen preset") {
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "edgecache_test_config.json";
    {
        std::ofstream out(path);
        out << R"({"n_cycles": 300, "world": {"topology": {"n_stations": 2}}})";
    }
    const RunConfig cfg = load_config("desk", path.string());
    CHECK(cfg.n_cycles == 300);
    CHECK(cfg.world.topology.n_stations == 2);
    CHECK(cfg.world.workload.catalog_size == 50);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_config("desk", "/nonexistent/edgecache.json"), ConfigError);
}

TEST_CASE("serialized configs round-trip through the override parser") {
    RunConfig cfg = desk_config();
    cfg.n_cycles = 777;
    cfg.world.workload.zipf_exponent = 1.1;
    cfg.world.topology.station_power_w = db_to_linear(12.0);

    const nlohmann::json j = to_json(cfg);
    RunConfig restored = desk_config();
    apply_overrides(restored, j);
    CHECK(restored.n_cycles == 777);
    CHECK(restored.world.workload.zipf_exponent == 1.1);
    CHECK(restored.world.topology.station_power_w ==
          doctest::Approx(db_to_linear(12.0)).epsilon(1e-12));
    CHECK(restored.seeds == cfg.seeds);
    CHECK(restored.policies == cfg.policies);
    CHECK(restored.world.cache_capacity == cfg.world.cache_capacity);
    CHECK(restored.learner.actor_rate == cfg.learner.actor_rate);

    // Everything except the dB round-trip of the powers is exact.
    nlohmann::json a = to_json(restored);
    nlohmann::json b = j;
    for (nlohmann::json* doc : {&a, &b}) {
        (*doc)["world"]["topology"].erase("station_power_db");
        (*doc)["world"]["topology"]["cloud"].erase("tx_power_db");
    }
    CHECK(a == b);
}

TEST_CASE("validation catches inconsistent run settings") {
    RunConfig cfg = desk_config();
    cfg.world.cache_capacity = 51;  // larger than the catalog
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = desk_config();
    cfg.eval_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = desk_config();
    cfg.policies = {"marl", "random"};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = desk_config();
    cfg.sigma_list = {0.0, 0.1};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = desk_config();
    cfg.jobs = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = desk_config();
    cfg.seeds.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = desk_config();
    cfg.n_cycles = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
