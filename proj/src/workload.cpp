#include "edgecache/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edgecache/errors.hpp"

namespace edgecache {

double zipf_pmf(int rank, const ZipfParams& params) {
    if (rank < 0 || rank >= params.catalog_size) {
        throw std::invalid_argument("zipf_pmf: rank out of range");
    }
    double norm = 0.0;
    for (int m = 1; m <= params.catalog_size; ++m) {
        norm += std::pow(static_cast<double>(m), -params.exponent);
    }
    return std::pow(static_cast<double>(rank + 1), -params.exponent) / norm;
}

std::vector<double> zipf_cdf(const ZipfParams& params) {
    if (params.catalog_size < 1) throw std::invalid_argument("zipf_cdf: empty catalog");
    std::vector<double> cdf(params.catalog_size);
    double norm = 0.0;
    for (int m = 1; m <= params.catalog_size; ++m) {
        norm += std::pow(static_cast<double>(m), -params.exponent);
    }
    double acc = 0.0;
    for (int k = 0; k < params.catalog_size; ++k) {
        acc += std::pow(static_cast<double>(k + 1), -params.exponent) / norm;
        cdf[k] = acc;
    }
    cdf.back() = 1.0;  // guard against rounding in the tail
    return cdf;
}

namespace {

std::vector<int> random_permutation(Rng& rng, int n) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

}  // namespace

ProfileSet build_profiles(Rng& rng, int n_users, int n_groups, int catalog_size,
                          int perturbation_swaps) {
    if (n_groups < 1) throw std::invalid_argument("build_profiles: need at least one group");
    if (n_users < 1) throw std::invalid_argument("build_profiles: need at least one user");
    if (catalog_size < 1) throw std::invalid_argument("build_profiles: empty catalog");

    ProfileSet set;
    set.group_bases.reserve(n_groups);
    for (int g = 0; g < n_groups; ++g) {
        set.group_bases.push_back(random_permutation(rng, catalog_size));
    }
    set.profiles.reserve(n_users);
    for (int u = 0; u < n_users; ++u) {
        PreferenceProfile profile;
        profile.user_id = u;
        profile.group = static_cast<int>(rng.uniform_int(n_groups));
        profile.rank = set.group_bases[profile.group];
        for (int s = 0; s < perturbation_swaps && catalog_size > 1; ++s) {
            const int pos = static_cast<int>(rng.uniform_int(catalog_size - 1));
            std::swap(profile.rank[pos], profile.rank[pos + 1]);
        }
        set.profiles.push_back(std::move(profile));
    }
    return set;
}

int sample_request(const PreferenceProfile& profile, const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const int k = static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                            static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    return profile.rank[k];
}

Workload::Workload(const WorkloadParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {
    if (params_.catalog_size < 1) throw ConfigError("workload: catalog_size must be >= 1");
    if (params_.n_users < 1) throw ConfigError("workload: n_users must be >= 1");
    if (params_.n_groups < 1) throw ConfigError("workload: n_groups must be >= 1");
    if (params_.zipf_exponent < 0.0) throw ConfigError("workload: zipf exponent must be >= 0");
    double beta = params_.zipf_exponent;
    if (params_.drift_enabled && params_.drift_randomizes_first_epoch) {
        beta = rng_.uniform(params_.drift_beta_min, params_.drift_beta_max);
    }
    redraw_epoch(0, beta);
}

int Workload::effective_swaps() const {
    if (params_.perturbation_swaps >= 0) return params_.perturbation_swaps;
    return static_cast<int>(std::ceil(0.05 * params_.catalog_size));
}

void Workload::redraw_epoch(long start_cycle, double beta) {
    epoch_.start_cycle = start_cycle;
    epoch_.zipf = ZipfParams{beta, params_.catalog_size};
    epoch_.preferences = build_profiles(rng_, params_.n_users, params_.n_groups,
                                        params_.catalog_size, effective_swaps());
    epoch_.rank_cdf = zipf_cdf(epoch_.zipf);
}

void Workload::advance_epoch(long cycle) {
    if (!params_.drift_enabled || cycle <= 0) return;
    if (cycle % params_.drift_period != 0) return;
    if (epoch_.start_cycle == cycle) return;  // already advanced this cycle
    const double beta = rng_.uniform(params_.drift_beta_min, params_.drift_beta_max);
    redraw_epoch(cycle, beta);
}

std::vector<int> Workload::sample_cycle() {
    std::vector<int> requests(params_.n_users);
    for (int u = 0; u < params_.n_users; ++u) {
        requests[u] = sample_request(epoch_.preferences.profiles[u], epoch_.rank_cdf, rng_);
    }
    return requests;
}

int Workload::sample_request_for(int user) {
    return sample_request(epoch_.preferences.profiles.at(user), epoch_.rank_cdf, rng_);
}

nlohmann::json Workload::save_state() const {
    nlohmann::json j;
    j["rng"] = rng_.save_state();
    j["epoch"]["start_cycle"] = epoch_.start_cycle;
    j["epoch"]["beta"] = epoch_.zipf.exponent;
    j["epoch"]["group_bases"] = epoch_.preferences.group_bases;
    nlohmann::json profs = nlohmann::json::array();
    for (const auto& p : epoch_.preferences.profiles) {
        profs.push_back({{"user", p.user_id}, {"group", p.group}, {"rank", p.rank}});
    }
    j["epoch"]["profiles"] = profs;
    return j;
}

void Workload::load_state(const nlohmann::json& j) {
    rng_.load_state(j.at("rng").get<std::string>());
    epoch_.start_cycle = j.at("epoch").at("start_cycle").get<long>();
    epoch_.zipf = ZipfParams{j.at("epoch").at("beta").get<double>(), params_.catalog_size};
    epoch_.preferences.group_bases =
        j.at("epoch").at("group_bases").get<std::vector<std::vector<int>>>();
    epoch_.preferences.profiles.clear();
    for (const auto& p : j.at("epoch").at("profiles")) {
        PreferenceProfile profile;
        profile.user_id = p.at("user").get<int>();
        profile.group = p.at("group").get<int>();
        profile.rank = p.at("rank").get<std::vector<int>>();
        epoch_.preferences.profiles.push_back(std::move(profile));
    }
    epoch_.rank_cdf = zipf_cdf(epoch_.zipf);
}

}  // namespace edgecache
