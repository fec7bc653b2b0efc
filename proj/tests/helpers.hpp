#pragma once

#include <json.hpp>

#include "edgecache/config.hpp"
#include "edgecache/metrics.hpp"
#include "edgecache/topology.hpp"

namespace testutil {

// Two overlapping cells with hand-checkable distances:
//   user 0 at (500,0):  500 m from station 0, 900 m from station 1 (both cover)
//   user 1 at (-200,0): station 0 only
//   user 2 at (1600,0): station 1 only
inline edgecache::Topology two_station_map(double backhaul_m = 10000.0) {
    nlohmann::json j;
    j["cloud"] = {{"tx_power_w", 100.0}, {"backhaul_distance_m", backhaul_m}};
    j["stations"] = nlohmann::json::array(
        {{{"id", 0}, {"x", 0.0}, {"y", 0.0}, {"radius_m", 1000.0}, {"tx_power_w", 48.977881936844595}},
         {{"id", 1},
          {"x", 1400.0},
          {"y", 0.0},
          {"radius_m", 1000.0},
          {"tx_power_w", 48.977881936844595}}});
    j["users"] = nlohmann::json::array({{{"id", 0}, {"x", 500.0}, {"y", 0.0}, {"group", 0}},
                                        {{"id", 1}, {"x", -200.0}, {"y", 0.0}, {"group", 0}},
                                        {{"id", 2}, {"x", 1600.0}, {"y", 0.0}, {"group", 0}}});
    return edgecache::Topology::from_json(j);
}

// Small, fast world for integration tests: short backhaul and small files keep
// the per-frame Monte-Carlo loops tiny.
inline edgecache::RunConfig tiny_config() {
    edgecache::RunConfig cfg = edgecache::desk_config();
    cfg.world.topology.n_stations = 2;
    cfg.world.topology.n_users = 5;
    cfg.world.topology.cell_radius_m = 700.0;
    cfg.world.topology.arena_width_m = 1200.0;
    cfg.world.topology.arena_height_m = 800.0;
    cfg.world.topology.cloud.backhaul_distance_m = 2000.0;
    cfg.world.workload.catalog_size = 12;
    cfg.world.workload.n_groups = 2;
    cfg.world.cache_capacity = 3;
    cfg.world.file_units = 10.0;
    cfg.n_cycles = 40;
    cfg.eval_fraction = 0.25;
    cfg.seeds = {1};
    return cfg;
}

// Constant-delay stub: every hit costs `hit_frames`, every miss `miss_frames`.
struct FixedDelays final : edgecache::DelayModel {
    double hit_frames;
    double miss_frames;
    FixedDelays(double hit_f, double miss_f) : hit_frames(hit_f), miss_frames(miss_f) {}
    edgecache::DelaySample hit(int, int, edgecache::Rng&) override { return {hit_frames, false}; }
    edgecache::DelaySample miss(int, edgecache::Rng&) override { return {miss_frames, false}; }
};

}  // namespace testutil
