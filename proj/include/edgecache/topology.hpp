#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgecache/random.hpp"

namespace edgecache {

struct Point {
    double x = 0.0;  // meters
    double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

struct BaseStation {
    int id = 0;
    Point position;
    double radius_m = 0.0;
    double tx_power_w = 0.0;
};

struct CloudDataCenter {
    double tx_power_w = 0.0;
    double backhaul_distance_m = 0.0;  // distance used for every cloud -> station link
};

struct User {
    int id = 0;
    Point position;
    int group = 0;
};

struct TopologyParams {
    int n_stations = 0;
    int n_users = 0;
    double cell_radius_m = 0.0;
    double arena_width_m = 0.0;
    double arena_height_m = 0.0;
    double station_power_w = 0.0;
    CloudDataCenter cloud;
};

/// Geometric layout of stations and users. Immutable after construction;
/// coverage uses an inclusive boundary (distance == radius counts as covered).
class Topology {
public:
    /// Stations go on a jittered grid inside the arena; users are rejection
    /// sampled uniformly over the union of the station disks, so every user
    /// ends up covered by at least one station. Deterministic given the seed.
    static Topology generate(std::uint64_t seed, const TopologyParams& params);

    bool covered(int station, int user) const;
    double station_user_distance(int station, int user) const;

    /// User ids connectable to a station, ascending. The length of this list
    /// is the station's per-cycle candidate count.
    const std::vector<int>& connectable_users(int station) const;

    /// Nearest covering station for a user (the relay on a cache miss).
    int nearest_covering_station(int user) const;

    int n_stations() const { return static_cast<int>(stations_.size()); }
    int n_users() const { return static_cast<int>(users_.size()); }
    const std::vector<BaseStation>& stations() const { return stations_; }
    const std::vector<User>& users() const { return users_; }
    std::vector<User>& users() { return users_; }
    const CloudDataCenter& cloud() const { return cloud_; }

    nlohmann::json to_json() const;
    static Topology from_json(const nlohmann::json& j);

private:
    Topology() = default;
    void rebuild_derived();

    std::vector<BaseStation> stations_;
    std::vector<User> users_;
    CloudDataCenter cloud_;
    std::vector<std::vector<bool>> coverage_;    // [station][user]
    std::vector<std::vector<int>> connectable_;  // per station, ascending user ids
    std::vector<int> nearest_station_;           // per user
};

}  // namespace edgecache
