#pragma once

#include <span>
#include <vector>

#include "edgecache/cache.hpp"
#include "edgecache/channel.hpp"
#include "edgecache/random.hpp"
#include "edgecache/topology.hpp"

namespace edgecache {

struct DelaySample {
    double frames = 0.0;
    bool truncated = false;
};

/// Delay source behind the accounting, swappable for deterministic stubs in
/// tests. `hit` is a direct station->user hop; `miss` is the full
/// cloud->relay->user path.
class DelayModel {
public:
    virtual ~DelayModel() = default;
    virtual DelaySample hit(int station, int user, Rng& rng) = 0;
    virtual DelaySample miss(int user, Rng& rng) = 0;
};

/// Monte-Carlo delays over the fading channel model.
class ChannelDelayModel : public DelayModel {
public:
    ChannelDelayModel(const Topology& topology, ChannelParams params, FileSize file)
        : topology_(&topology), params_(params), file_(file) {}

    DelaySample hit(int station, int user, Rng& rng) override;
    DelaySample miss(int user, Rng& rng) override;

private:
    const Topology* topology_;
    ChannelParams params_;
    FileSize file_;
};

struct UserOutcome {
    int user = -1;
    int file = -1;
    int serving_station = -1;  // -1 = miss (served via cloud)
    double realized_frames = 0.0;    // D_j
    double baseline_frames = 0.0;    // D̂_j, the always-miss counterfactual
    double reduction_frames = 0.0;   // ΔD_j >= 0
    bool truncated = false;
};

struct CycleOutcome {
    long cycle = 0;
    std::vector<UserOutcome> users;
    double mean_reduction = 0.0;  // ΔD
    double mean_baseline = 0.0;   // (1/U)·Σ D̂_j
    double eta = 0.0;             // percent
    bool any_truncated = false;
};

/// Resolves one user's delivery against the current caches. On a hit the
/// counterfactual miss path is sampled independently (it was never realized);
/// on a miss realized and counterfactual coincide, so ΔD_j = 0.
UserOutcome account_user(const Topology& topology, std::span<const CacheState> caches,
                         int user, int file, DelayModel& delays, Rng& rng);

/// Per-user accounting over a full cycle against fixed caches, users in
/// ascending id order. Throws AccountingError when mean D̂ is zero.
CycleOutcome cycle_delay_accounting(const Topology& topology,
                                    std::span<const CacheState> caches,
                                    std::span<const int> requests, DelayModel& delays,
                                    Rng& rng, long cycle);

/// Aggregates per-user rows into ΔD, mean D̂ and η. Shared by the cycle
/// accounting and by sequential (baseline) drivers that interleave cache
/// updates between users.
void finalize_outcome(CycleOutcome& outcome);

/// η = ΔD / ((1/U)·Σ D̂_j) × 100, recomputed from the per-user rows.
double eta(const CycleOutcome& outcome);

/// Prefix means η̄_T of a per-cycle series.
std::vector<double> running_average(std::span<const double> series);

}  // namespace edgecache
