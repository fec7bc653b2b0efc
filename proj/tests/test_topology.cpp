#include <doctest.h>

#include <cmath>
#include <set>

#include "edgecache/errors.hpp"
#include "edgecache/random.hpp"
#include "edgecache/topology.hpp"

#include "helpers.hpp"

using namespace edgecache;

namespace {

TopologyParams layout_params(int n_stations, int n_users, double radius, double width,
                             double height) {
    TopologyParams p;
    p.n_stations = n_stations;
    p.n_users = n_users;
    p.cell_radius_m = radius;
    p.arena_width_m = width;
    p.arena_height_m = height;
    p.station_power_w = 48.977881936844595;
    p.cloud.tx_power_w = 100.0;
    p.cloud.backhaul_distance_m = 10000.0;
    return p;
}

}  // namespace

TEST_CASE("generated layout places everything and covers every user") {
    const Topology topo = Topology::generate(7, layout_params(5, 30, 2200.0, 6000.0, 6000.0));
    CHECK(topo.n_stations() == 5);
    CHECK(topo.n_users() == 30);
    for (int j = 0; j < topo.n_users(); ++j) {
        int covering = 0;
        for (int i = 0; i < topo.n_stations(); ++i)
            if (topo.covered(i, j)) ++covering;
        CHECK(covering >= 1);
    }
}

TEST_CASE("single station, single user: forced coverage") {
    const Topology topo = Topology::generate(3, layout_params(1, 1, 400.0, 1000.0, 1000.0));
    CHECK(topo.covered(0, 0));
    CHECK(topo.station_user_distance(0, 0) <= 400.0);
}

TEST_CASE("same seed regenerates bit-identical positions") {
    const TopologyParams p = layout_params(4, 20, 900.0, 2500.0, 2000.0);
    const Topology a = Topology::generate(42, p);
    const Topology b = Topology::generate(42, p);
    REQUIRE(a.n_stations() == b.n_stations());
    REQUIRE(a.n_users() == b.n_users());
    for (int i = 0; i < a.n_stations(); ++i) {
        CHECK(a.stations()[i].position.x == b.stations()[i].position.x);
        CHECK(a.stations()[i].position.y == b.stations()[i].position.y);
    }
    for (int j = 0; j < a.n_users(); ++j) {
        CHECK(a.users()[j].position.x == b.users()[j].position.x);
        CHECK(a.users()[j].position.y == b.users()[j].position.y);
    }
}

TEST_CASE("coverage matches a brute-force distance check on 1000 random pairs") {
    const Topology topo = Topology::generate(11, layout_params(6, 40, 800.0, 2400.0, 1600.0));
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
        const int i = static_cast<int>(rng.uniform_int(topo.n_stations()));
        const int j = static_cast<int>(rng.uniform_int(topo.n_users()));
        const double dx = topo.stations()[i].position.x - topo.users()[j].position.x;
        const double dy = topo.stations()[i].position.y - topo.users()[j].position.y;
        const bool expect = std::sqrt(dx * dx + dy * dy) <= topo.stations()[i].radius_m;
        CHECK(topo.covered(i, j) == expect);
    }
}

TEST_CASE("coverage boundary is inclusive") {
    // Station 0 at the origin with radius 100; station 1 exists so the
    // just-outside user is still covered by someone.
    nlohmann::json j;
    j["cloud"] = {{"tx_power_w", 100.0}, {"backhaul_distance_m", 10000.0}};
    j["stations"] = nlohmann::json::array(
        {{{"id", 0}, {"x", 0.0}, {"y", 0.0}, {"radius_m", 100.0}, {"tx_power_w", 50.0}},
         {{"id", 1}, {"x", 300.0}, {"y", 0.0}, {"radius_m", 250.0}, {"tx_power_w", 50.0}}});
    j["users"] = nlohmann::json::array({{{"id", 0}, {"x", 0.0}, {"y", 0.0}, {"group", 0}},
                                        {{"id", 1}, {"x", 100.0}, {"y", 0.0}, {"group", 0}},
                                        {{"id", 2}, {"x", 101.0}, {"y", 0.0}, {"group", 0}}});
    const Topology topo = Topology::from_json(j);
    CHECK(topo.covered(0, 0));   // distance 0
    CHECK(topo.covered(0, 1));   // distance exactly R
    CHECK(!topo.covered(0, 2));  // distance R + 1
    CHECK(topo.covered(1, 2));
}

TEST_CASE("connectable user lists are exact and ascending; union covers everyone") {
    nlohmann::json j;
    j["cloud"] = {{"tx_power_w", 100.0}, {"backhaul_distance_m", 10000.0}};
    j["stations"] = nlohmann::json::array(
        {{{"id", 0}, {"x", 0.0}, {"y", 0.0}, {"radius_m", 100.0}, {"tx_power_w", 50.0}},
         {{"id", 1}, {"x", 300.0}, {"y", 0.0}, {"radius_m", 250.0}, {"tx_power_w", 50.0}},
         {{"id", 2}, {"x", 5000.0}, {"y", 5000.0}, {"radius_m", 100.0}, {"tx_power_w", 50.0}}});
    j["users"] = nlohmann::json::array({{{"id", 0}, {"x", 0.0}, {"y", 0.0}, {"group", 0}},
                                        {{"id", 1}, {"x", 100.0}, {"y", 0.0}, {"group", 0}},
                                        {{"id", 2}, {"x", 101.0}, {"y", 0.0}, {"group", 0}}});
    const Topology topo = Topology::from_json(j);
    CHECK(topo.connectable_users(0) == std::vector<int>{0, 1});
    CHECK(topo.connectable_users(1) == std::vector<int>{1, 2});
    CHECK(topo.connectable_users(2).empty());

    std::set<int> all;
    for (int i = 0; i < topo.n_stations(); ++i)
        all.insert(topo.connectable_users(i).begin(), topo.connectable_users(i).end());
    CHECK(all == std::set<int>{0, 1, 2});

    // Generated layouts satisfy the same union property.
    const Topology generated = Topology::generate(9, layout_params(3, 15, 700.0, 1500.0, 1000.0));
    std::set<int> seen;
    for (int i = 0; i < generated.n_stations(); ++i)
        seen.insert(generated.connectable_users(i).begin(), generated.connectable_users(i).end());
    CHECK(static_cast<int>(seen.size()) == generated.n_users());
}

TEST_CASE("nearest covering station picks the closer of two overlapping cells") {
    const Topology topo = testutil::two_station_map();
    CHECK(topo.nearest_covering_station(0) == 0);  // 500 m beats 900 m
    CHECK(topo.nearest_covering_station(1) == 0);
    CHECK(topo.nearest_covering_station(2) == 1);
}

TEST_CASE("topology JSON round-trip preserves geometry and coverage") {
    const Topology a = Topology::generate(13, layout_params(4, 18, 750.0, 2000.0, 1400.0));
    const Topology b = Topology::from_json(a.to_json());
    REQUIRE(b.n_stations() == a.n_stations());
    REQUIRE(b.n_users() == a.n_users());
    for (int i = 0; i < a.n_stations(); ++i) {
        CHECK(b.stations()[i].position.x == a.stations()[i].position.x);
        CHECK(b.stations()[i].position.y == a.stations()[i].position.y);
        CHECK(b.stations()[i].radius_m == a.stations()[i].radius_m);
    }
    for (int i = 0; i < a.n_stations(); ++i)
        for (int j = 0; j < a.n_users(); ++j) CHECK(b.covered(i, j) == a.covered(i, j));
    for (int j = 0; j < a.n_users(); ++j)
        CHECK(b.nearest_covering_station(j) == a.nearest_covering_station(j));
    CHECK(b.cloud().backhaul_distance_m == a.cloud().backhaul_distance_m);
}

TEST_CASE("degenerate layout parameters are rejected") {
    CHECK_THROWS_AS(Topology::generate(1, layout_params(0, 5, 100.0, 1000.0, 1000.0)),
                    ConfigError);
    CHECK_THROWS_AS(Topology::generate(1, layout_params(2, 5, -1.0, 1000.0, 1000.0)),
                    ConfigError);
    CHECK_THROWS_AS(Topology::generate(1, layout_params(2, 5, 100.0, 0.0, 1000.0)), ConfigError);
    TopologyParams p = layout_params(2, 5, 100.0, 1000.0, 1000.0);
    p.station_power_w = 0.0;
    CHECK_THROWS_AS(Topology::generate(1, p), ConfigError);
}
