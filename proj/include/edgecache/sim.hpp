#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <json.hpp>

#include "edgecache/cache.hpp"
#include "edgecache/features.hpp"
#include "edgecache/metrics.hpp"
#include "edgecache/topology.hpp"
#include "edgecache/workload.hpp"

namespace edgecache {

/// Everything needed to instantiate one simulated network.
struct WorldConfig {
    TopologyParams topology;
    ChannelParams channel;
    double file_units = 1e4;
    WorkloadParams workload;  // n_users is overridden from the topology
    int cache_capacity = 0;
    std::array<int, 3> feature_windows{10, 100, 1000};
};

/// One seeded instance: topology, workload, caches, feature windows and the
/// derived RNG streams. Sub-streams ("topology", "workload", "channel",
/// "actions", "init") are derived independently from the run seed so that,
/// e.g., the request trace is identical across policies sharing a seed.
class SimWorld {
public:
    SimWorld(const WorldConfig& config, std::uint64_t seed);

    /// Same world, but delays come from the given model instead of the fading
    /// channel (deterministic stubs in tests).
    SimWorld(const WorldConfig& config, std::uint64_t seed,
             std::unique_ptr<DelayModel> delays);

    const Topology& topology() const { return topology_; }
    Workload& workload() { return workload_; }
    const Workload& workload() const { return workload_; }
    FeatureWindows& features() { return features_; }
    const FeatureWindows& features() const { return features_; }
    std::vector<CacheState>& caches() { return caches_; }
    const std::vector<CacheState>& caches() const { return caches_; }
    const WorldConfig& config() const { return config_; }
    std::uint64_t seed() const { return seed_; }
    Rng& channel_rng() { return channel_rng_; }

    int n_stations() const { return topology_.n_stations(); }
    int n_users() const { return topology_.n_users(); }
    int cache_capacity() const { return config_.cache_capacity; }

    /// Advances the workload epoch at positive multiples of drift_period.
    void maybe_advance_epoch(long cycle);

    /// One request per user, user order.
    std::vector<int> sample_requests();

    /// Delivery accounting for a full cycle against the current caches.
    CycleOutcome account(std::span<const int> requests, long cycle);

    /// Delivery accounting for a single user against the current caches.
    UserOutcome account_one(int user, int file);

    /// Records each request at every station covering its user.
    void record_features(std::span<const int> requests);

    /// Files requested this cycle by the station's connectable users, aligned
    /// to connectable_users(station) order.
    std::vector<int> candidate_files(int station, std::span<const int> requests) const;

    nlohmann::json save_state() const;
    void load_state(const nlohmann::json& j);

private:
    WorldConfig config_;
    std::uint64_t seed_ = 0;
    Topology topology_;
    Workload workload_;
    std::vector<CacheState> caches_;
    FeatureWindows features_;
    std::unique_ptr<DelayModel> delay_model_;
    Rng channel_rng_;
};

/// Per-cycle hook for trace export, Φ auditing and test probes.
using CycleObserver =
    std::function<void(long cycle, const CycleOutcome&, const std::vector<int>& requests)>;

/// One classical-policy cycle: per user (ascending), resolve the delivery
/// against the caches as they stand mid-cycle, then feed the request to every
/// covering station's eviction policy.
CycleOutcome run_baseline_cycle(SimWorld& world, BaselinePolicy policy,
                                std::span<const int> requests, long cycle);

/// Runs one of the classical policies for n_cycles, sampling requests from
/// the world's workload. Returns per-cycle η.
std::vector<double> run_baseline_policy(SimWorld& world, BaselinePolicy policy,
                                        long start_cycle, long n_cycles,
                                        const CycleObserver& observer = {});

}  // namespace edgecache
