#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "edgecache/random.hpp"

namespace edgecache {

struct ZipfParams {
    double exponent = 1.3;  // 0 gives a uniform catalog
    int catalog_size = 0;
};

/// Zipf probability of the file at rank k (0-based), normalized over the catalog.
double zipf_pmf(int rank, const ZipfParams& params);

/// Cumulative distribution over ranks 0..M-1, for inverse-CDF sampling.
std::vector<double> zipf_cdf(const ZipfParams& params);

struct PreferenceProfile {
    int user_id = 0;
    int group = 0;
    std::vector<int> rank;  // rank[k] = file id preferred at rank k; a permutation of 0..M-1
};

/// Group base permutations plus per-user perturbed copies. Users in a group
/// share a base ranking; each user then applies `perturbation_swaps` random
/// adjacent transpositions, which bounds the Kendall tau distance to the base
/// by that count. Group membership is uniform and independent of location.
struct ProfileSet {
    std::vector<std::vector<int>> group_bases;  // [group][rank] -> file
    std::vector<PreferenceProfile> profiles;    // one per user
};
ProfileSet build_profiles(Rng& rng, int n_users, int n_groups, int catalog_size,
                          int perturbation_swaps);

/// Draws a rank from the Zipf CDF and maps it through the user's ranking.
int sample_request(const PreferenceProfile& profile, const std::vector<double>& cdf, Rng& rng);

struct PopularityEpoch {
    long start_cycle = 0;
    ZipfParams zipf;
    ProfileSet preferences;
    std::vector<double> rank_cdf;
};

struct WorkloadParams {
    int catalog_size = 50;
    int n_users = 0;
    int n_groups = 5;
    double zipf_exponent = 1.3;
    int perturbation_swaps = -1;  // -1: ceil(0.05 * M)
    bool drift_enabled = false;
    long drift_period = 10000;
    double drift_beta_min = 1.1;
    double drift_beta_max = 1.5;
    bool drift_randomizes_first_epoch = false;  // drift experiments draw beta for epoch 0 too
};

/// Request generator with optional popularity drift. Epoch changes redraw the
/// group bases, the per-user perturbations and the Zipf exponent; agents are
/// never told when that happens.
class Workload {
public:
    Workload(const WorkloadParams& params, std::uint64_t seed);

    /// Redraws the epoch at positive multiples of drift_period (no-op otherwise
    /// or when drift is disabled).
    void advance_epoch(long cycle);

    /// One request for every user, in user order. All draws come from the
    /// workload's own stream so the trace is identical across policies.
    std::vector<int> sample_cycle();

    int sample_request_for(int user);

    const PopularityEpoch& epoch() const { return epoch_; }
    const WorkloadParams& params() const { return params_; }
    int effective_swaps() const;

    nlohmann::json save_state() const;
    void load_state(const nlohmann::json& j);

private:
    void redraw_epoch(long start_cycle, double beta);

    WorkloadParams params_;
    Rng rng_;
    PopularityEpoch epoch_;
};

}  // namespace edgecache
