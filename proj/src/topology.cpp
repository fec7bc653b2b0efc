#include "edgecache/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgecache/errors.hpp"

namespace edgecache {

Topology Topology::generate(std::uint64_t seed, const TopologyParams& p) {
    if (p.n_stations < 1 || p.n_users < 1) {
        throw ConfigError("topology: need at least one station and one user");
    }
    if (p.cell_radius_m <= 0.0 || p.arena_width_m <= 0.0 || p.arena_height_m <= 0.0) {
        throw ConfigError("topology: radius and arena dimensions must be positive");
    }
    if (p.station_power_w <= 0.0 || p.cloud.tx_power_w <= 0.0 || p.cloud.backhaul_distance_m <= 0.0) {
        throw ConfigError("topology: powers and backhaul distance must be positive");
    }

    Rng rng(seed);
    Topology topo;
    topo.cloud_ = p.cloud;

    // Jittered grid: cells overlap when the grid pitch is below 2R, which is
    // the normal operating regime here.
    const double aspect = p.arena_width_m / p.arena_height_m;
    int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(p.n_stations * aspect))));
    int rows = (p.n_stations + cols - 1) / cols;
    const double cell_w = p.arena_width_m / cols;
    const double cell_h = p.arena_height_m / rows;
    const double jitter = 0.25 * std::min(cell_w, cell_h);

    for (int i = 0; i < p.n_stations; ++i) {
        const int c = i % cols;
        const int r = i / cols;
        BaseStation bs;
        bs.id = i;
        bs.position.x = (c + 0.5) * cell_w + rng.uniform(-jitter, jitter);
        bs.position.y = (r + 0.5) * cell_h + rng.uniform(-jitter, jitter);
        bs.radius_m = p.cell_radius_m;
        bs.tx_power_w = p.station_power_w;
        topo.stations_.push_back(bs);
    }

    // Rejection sample users uniformly over the union of disks. The sampling
    // box is the station bounding box padded by R so disk parts outside the
    // arena still get uniform mass.
    double min_x = std::numeric_limits<double>::max(), max_x = std::numeric_limits<double>::lowest();
    double min_y = std::numeric_limits<double>::max(), max_y = std::numeric_limits<double>::lowest();
    for (const auto& bs : topo.stations_) {
        min_x = std::min(min_x, bs.position.x);
        max_x = std::max(max_x, bs.position.x);
        min_y = std::min(min_y, bs.position.y);
        max_y = std::max(max_y, bs.position.y);
    }
    min_x -= p.cell_radius_m;
    max_x += p.cell_radius_m;
    min_y -= p.cell_radius_m;
    max_y += p.cell_radius_m;

    constexpr int kMaxAttemptsPerUser = 100000;
    for (int j = 0; j < p.n_users; ++j) {
        User u;
        u.id = j;
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttemptsPerUser; ++attempt) {
            Point candidate{rng.uniform(min_x, max_x), rng.uniform(min_y, max_y)};
            for (const auto& bs : topo.stations_) {
                if (distance(bs.position, candidate) <= bs.radius_m) {
                    u.position = candidate;
                    placed = true;
                    break;
                }
            }
            if (placed) break;
        }
        if (!placed) throw ConfigError("topology: failed to place a user inside any cell");
        topo.users_.push_back(u);
    }

    topo.rebuild_derived();
    return topo;
}

void Topology::rebuild_derived() {
    const int n = n_stations();
    const int u = n_users();
    coverage_.assign(n, std::vector<bool>(u, false));
    connectable_.assign(n, {});
    nearest_station_.assign(u, -1);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < u; ++j) {
            const double d = distance(stations_[i].position, users_[j].position);
            if (d <= stations_[i].radius_m) {
                coverage_[i][j] = true;
                connectable_[i].push_back(j);
            }
        }
    }
    for (int j = 0; j < u; ++j) {
        double best = std::numeric_limits<double>::max();
        for (int i = 0; i < n; ++i) {
            if (!coverage_[i][j]) continue;
            const double d = distance(stations_[i].position, users_[j].position);
            if (d < best) {
                best = d;
                nearest_station_[j] = i;
            }
        }
        if (nearest_station_[j] < 0) {
            throw ConfigError("topology: user without a covering station");
        }
    }
}

bool Topology::covered(int station, int user) const {
    return coverage_.at(station).at(user);
}

double Topology::station_user_distance(int station, int user) const {
    return distance(stations_.at(station).position, users_.at(user).position);
}

const std::vector<int>& Topology::connectable_users(int station) const {
    return connectable_.at(station);
}

int Topology::nearest_covering_station(int user) const {
    return nearest_station_.at(user);
}

nlohmann::json Topology::to_json() const {
    nlohmann::json j;
    j["cloud"] = {{"tx_power_w", cloud_.tx_power_w},
                  {"backhaul_distance_m", cloud_.backhaul_distance_m}};
    for (const auto& bs : stations_) {
        j["stations"].push_back({{"id", bs.id},
                                 {"x", bs.position.x},
                                 {"y", bs.position.y},
                                 {"radius_m", bs.radius_m},
                                 {"tx_power_w", bs.tx_power_w}});
    }
    for (const auto& u : users_) {
        j["users"].push_back({{"id", u.id}, {"x", u.position.x}, {"y", u.position.y}, {"group", u.group}});
    }
    return j;
}

Topology Topology::from_json(const nlohmann::json& j) {
    Topology topo;
    topo.cloud_.tx_power_w = j.at("cloud").at("tx_power_w").get<double>();
    topo.cloud_.backhaul_distance_m = j.at("cloud").at("backhaul_distance_m").get<double>();
    for (const auto& s : j.at("stations")) {
        BaseStation bs;
        bs.id = s.at("id").get<int>();
        bs.position = {s.at("x").get<double>(), s.at("y").get<double>()};
        bs.radius_m = s.at("radius_m").get<double>();
        bs.tx_power_w = s.at("tx_power_w").get<double>();
        if (bs.radius_m <= 0.0 || bs.tx_power_w <= 0.0) {
            throw ConfigError("topology json: station radius and power must be positive");
        }
        topo.stations_.push_back(bs);
    }
    for (const auto& s : j.at("users")) {
        User u;
        u.id = s.at("id").get<int>();
        u.position = {s.at("x").get<double>(), s.at("y").get<double>()};
        u.group = s.value("group", 0);
        topo.users_.push_back(u);
    }
    topo.rebuild_derived();
    return topo;
}

}  // namespace edgecache
