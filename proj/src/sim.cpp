#include "edgecache/sim.hpp"

#include <stdexcept>

#include "edgecache/errors.hpp"

namespace edgecache {

namespace {

WorkloadParams resolve_workload(const WorldConfig& config, int n_users) {
    WorkloadParams w = config.workload;
    w.n_users = n_users;
    return w;
}

}  // namespace

SimWorld::SimWorld(const WorldConfig& config, std::uint64_t seed)
    : SimWorld(config, seed, nullptr) {}

SimWorld::SimWorld(const WorldConfig& config, std::uint64_t seed,
                   std::unique_ptr<DelayModel> delays)
    : config_(config),
      seed_(seed),
      topology_(Topology::generate(derive_seed(seed, "topology"), config.topology)),
      workload_(resolve_workload(config, topology_.n_users()), derive_seed(seed, "workload")),
      features_(topology_.n_stations(), config.workload.catalog_size, config.feature_windows),
      delay_model_(std::move(delays)),
      channel_rng_(derive_seed(seed, "channel")) {
    if (!delay_model_)
        delay_model_ = std::make_unique<ChannelDelayModel>(
            topology_, config.channel, FileSize::from_units(config.file_units));
    if (config.cache_capacity <= 0 ||
        config.cache_capacity > config.workload.catalog_size)
        throw ConfigError("cache capacity must be in 1..catalog_size");
    caches_.reserve(topology_.n_stations());
    for (int i = 0; i < topology_.n_stations(); ++i)
        caches_.emplace_back(i, config.cache_capacity);
    // Group labels on the topology are informational; the workload owns them.
    for (const PreferenceProfile& p : workload_.epoch().preferences.profiles)
        topology_.users()[p.user_id].group = p.group;
}

void SimWorld::maybe_advance_epoch(long cycle) {
    const WorkloadParams& w = workload_.params();
    if (!w.drift_enabled || cycle <= 0 || cycle % w.drift_period != 0) return;
    workload_.advance_epoch(cycle);
    for (const PreferenceProfile& p : workload_.epoch().preferences.profiles)
        topology_.users()[p.user_id].group = p.group;
}

std::vector<int> SimWorld::sample_requests() { return workload_.sample_cycle(); }

CycleOutcome SimWorld::account(std::span<const int> requests, long cycle) {
    return cycle_delay_accounting(topology_, caches_, requests, *delay_model_,
                                  channel_rng_, cycle);
}

UserOutcome SimWorld::account_one(int user, int file) {
    return account_user(topology_, caches_, user, file, *delay_model_, channel_rng_);
}

void SimWorld::record_features(std::span<const int> requests) {
    for (int user = 0; user < n_users(); ++user)
        for (int station = 0; station < n_stations(); ++station)
            if (topology_.covered(station, user))
                features_.record(station, requests[user]);
}

std::vector<int> SimWorld::candidate_files(int station,
                                           std::span<const int> requests) const {
    const std::vector<int>& connectable = topology_.connectable_users(station);
    std::vector<int> files;
    files.reserve(connectable.size());
    for (int user : connectable) files.push_back(requests[user]);
    return files;
}

nlohmann::json SimWorld::save_state() const {
    nlohmann::json caches = nlohmann::json::array();
    for (const CacheState& c : caches_) caches.push_back(c.to_json());
    return nlohmann::json{{"workload", workload_.save_state()},
                          {"features", features_.save_state()},
                          {"caches", std::move(caches)},
                          {"channel_rng", channel_rng_.save_state()}};
}

void SimWorld::load_state(const nlohmann::json& j) {
    workload_.load_state(j.at("workload"));
    features_.load_state(j.at("features"));
    const nlohmann::json& caches = j.at("caches");
    if (caches.size() != caches_.size())
        throw std::invalid_argument("cache count mismatch");
    for (std::size_t i = 0; i < caches_.size(); ++i)
        caches_[i] = CacheState::from_json(caches.at(i));
    channel_rng_.load_state(j.at("channel_rng").get<std::string>());
    for (const PreferenceProfile& p : workload_.epoch().preferences.profiles)
        topology_.users()[p.user_id].group = p.group;
}

CycleOutcome run_baseline_cycle(SimWorld& world, BaselinePolicy policy,
                                std::span<const int> requests, long cycle) {
    if (static_cast<int>(requests.size()) != world.n_users())
        throw std::invalid_argument("one request per user is required");
    const Topology& topo = world.topology();
    CycleOutcome outcome;
    outcome.cycle = cycle;
    outcome.users.reserve(requests.size());
    for (int user = 0; user < world.n_users(); ++user) {
        outcome.users.push_back(world.account_one(user, requests[user]));
        for (int station = 0; station < world.n_stations(); ++station)
            if (topo.covered(station, user))
                world.caches()[station].baseline_step(policy, requests[user], cycle);
    }
    finalize_outcome(outcome);
    return outcome;
}

std::vector<double> run_baseline_policy(SimWorld& world, BaselinePolicy policy,
                                        long start_cycle, long n_cycles,
                                        const CycleObserver& observer) {
    std::vector<double> etas;
    etas.reserve(n_cycles);
    for (long step = 0; step < n_cycles; ++step) {
        const long cycle = start_cycle + step;
        world.maybe_advance_epoch(cycle);
        const std::vector<int> requests = world.sample_requests();
        const CycleOutcome outcome = run_baseline_cycle(world, policy, requests, cycle);
        etas.push_back(outcome.eta);
        if (observer) observer(cycle, outcome, requests);
    }
    return etas;
}

}  // namespace edgecache
