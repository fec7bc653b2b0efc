#include "edgecache/marl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "edgecache/errors.hpp"

namespace edgecache {

namespace {

std::vector<int> layer_plan(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes;
    sizes.reserve(hidden.size() + 2);
    sizes.push_back(in);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

}  // namespace

void Hyperparams::validate() const {
    if (!(discount > 0.0 && discount < 1.0))
        throw ConfigError("discount must lie in (0,1)");
    if (!(actor_rate > 0.0 && actor_rate < 1.0))
        throw ConfigError("actor rate must lie in (0,1)");
    if (!(critic_rate > 0.0 && critic_rate < 1.0))
        throw ConfigError("critic rate must lie in (0,1)");
    if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
    for (int h : actor_hidden)
        if (h <= 0) throw ConfigError("actor hidden sizes must be positive");
    for (int h : critic_hidden)
        if (h <= 0) throw ConfigError("critic hidden sizes must be positive");
}

Agent::Agent(int station_id, int observation_size, int n_actions,
             const std::vector<int>& hidden, Rng& init_rng)
    : station_id_(station_id),
      n_actions_(n_actions),
      net_(layer_plan(observation_size, hidden, n_actions), init_rng,
           /*zero_init_output=*/true) {}

std::vector<double> Agent::logits(std::span<const double> observation) const {
    return net_.forward(observation);
}

std::vector<double> Agent::action_probabilities(std::span<const double> observation,
                                                double temperature) const {
    std::vector<double> l = logits(observation);
    for (double& v : l) v /= temperature;
    return masked_softmax(l);
}

ActionChoice Agent::select(std::span<const double> observation, double temperature,
                           Rng& rng) const {
    const std::vector<double> probs = action_probabilities(observation, temperature);
    const double u = rng.uniform();
    double acc = 0.0;
    int chosen = -1;
    int last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] > 0.0) last_positive = static_cast<int>(k);
        acc += probs[k];
        if (u < acc) {
            chosen = static_cast<int>(k);
            break;
        }
    }
    if (chosen < 0) chosen = last_positive;  // float residue at u ≈ 1
    return {chosen, std::log(probs[chosen])};
}

int Agent::greedy(std::span<const double> observation) const {
    const std::vector<double> l = logits(observation);
    return static_cast<int>(std::max_element(l.begin(), l.end()) - l.begin());
}

void Agent::update(std::span<const double> observation, int action, double td_error,
                   double rate, double temperature) {
    Mlp::Trace trace = net_.forward_trace(observation);
    std::vector<double> scaled = trace.activations.back();
    for (double& v : scaled) v /= temperature;
    const std::vector<double> probs = masked_softmax(scaled);
    // ∇_logits log π(a) = (1[k=a] − π_k) / temperature
    std::vector<double> output_grad(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k)
        output_grad[k] =
            ((static_cast<int>(k) == action ? 1.0 : 0.0) - probs[k]) / temperature;
    const std::vector<double> grad = net_.backward(trace, output_grad);
    net_.apply_step(grad, rate * td_error);  // ascend
}

Critic::Critic(int state_size, const std::vector<int>& hidden, Rng& init_rng)
    : net_(layer_plan(state_size, hidden, 1), init_rng, /*zero_init_output=*/true) {}

double Critic::value(std::span<const double> state) const {
    return net_.forward(state)[0];
}

double Critic::td_error(std::span<const double> state, double reward,
                        std::span<const double> next_state, double discount) const {
    return reward + discount * value(next_state) - value(state);
}

void Critic::update(std::span<const double> state, double td_error, double rate) {
    Mlp::Trace trace = net_.forward_trace(state);
    // d(δ²)/dV(state) = −2δ with the bootstrap target frozen; descend.
    const std::vector<double> grad =
        net_.backward(trace, std::vector<double>{-2.0 * td_error});
    net_.apply_step(grad, -rate);
}

Trainer::Trainer(SimWorld& world, const Hyperparams& hp, std::uint64_t seed)
    : world_(&world), hp_(hp), action_rng_(derive_seed(seed, "actions")) {
    hp_.validate();
    Rng init_rng(derive_seed(seed, "init"));
    critic_ = Critic(world.features().global_state_size(), hp_.critic_hidden, init_rng);
    const int obs_size = world.features().observation_size();
    agents_.reserve(world.n_stations());
    for (int i = 0; i < world.n_stations(); ++i) {
        const int n_conn = static_cast<int>(world.topology().connectable_users(i).size());
        agents_.emplace_back(i, obs_size,
                             action_space_size(world.cache_capacity(), n_conn),
                             hp_.actor_hidden, init_rng);
    }
    pending_.observations.resize(world.n_stations());
    pending_.actions.assign(world.n_stations(), 0);
    pending_.acted.assign(world.n_stations(), 0);
}

TrainLogRow Trainer::step(bool learn, bool greedy, const CycleObserver& observer) {
    SimWorld& world = *world_;
    world.maybe_advance_epoch(cycle_);
    const std::vector<int> requests = world.sample_requests();
    const CycleOutcome outcome = world.account(requests, cycle_);
    const double reward =
        hp_.normalize_reward ? outcome.eta / 100.0 : outcome.mean_reduction;
    world.record_features(requests);
    std::vector<double> state = world.features().global_state();

    TrainLogRow row;
    row.cycle = cycle_;
    row.eta = outcome.eta;
    if (learn && pending_.valid) {
        const double delta = critic_.td_error(pending_.state, reward, state, hp_.discount);
        critic_.update(pending_.state, delta, hp_.critic_rate);
        for (std::size_t i = 0; i < agents_.size(); ++i)
            if (pending_.acted[i])
                agents_[i].update(pending_.observations[i], pending_.actions[i], delta,
                                  hp_.actor_rate, hp_.temperature);
        row.reward = reward;
        row.td_error = delta;
    }

    Pending next;
    if (learn) {
        next.valid = true;
        next.state = std::move(state);
        next.observations.resize(agents_.size());
        next.actions.assign(agents_.size(), 0);
        next.acted.assign(agents_.size(), 0);
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        CacheState& cache = world.caches()[i];
        const std::vector<int> candidates =
            world.candidate_files(static_cast<int>(i), requests);
        if (!cache.full()) {
            // Warm-fill with the first 𝒞 distinct locally requested files.
            for (int file : candidates) {
                cache.insert_if_absent(file, cycle_);
                if (cache.full()) break;
            }
            continue;
        }
        if (candidates.empty()) continue;  // station covers no user
        std::vector<double> obs = world.features().observation(static_cast<int>(i));
        const int action_id =
            greedy ? agents_[i].greedy(obs)
                   : agents_[i].select(obs, hp_.temperature, action_rng_).action;
        cache.apply(decode_action(action_id, cache.capacity(),
                                  static_cast<int>(candidates.size())),
                    candidates, cycle_);
        if (learn) {
            next.observations[i] = std::move(obs);
            next.actions[i] = action_id;
            next.acted[i] = 1;
        }
    }
    if (learn) pending_ = std::move(next);
    if (observer) observer(cycle_, outcome, requests);
    cycle_ += 1;
    return row;
}

std::vector<TrainLogRow> Trainer::train(long n_cycles, const CycleObserver& observer) {
    std::vector<TrainLogRow> log;
    log.reserve(n_cycles);
    for (long k = 0; k < n_cycles; ++k) {
        try {
            log.push_back(step(/*learn=*/true, /*greedy=*/false, observer));
        } catch (const TrainingFault&) {
            write_fault_checkpoint();
            throw;
        }
    }
    return log;
}

std::vector<TrainLogRow> Trainer::evaluate(long n_cycles, const CycleObserver& observer) {
    std::vector<TrainLogRow> log;
    log.reserve(n_cycles);
    for (long k = 0; k < n_cycles; ++k)
        log.push_back(step(/*learn=*/false, /*greedy=*/true, observer));
    return log;
}

void Trainer::write_fault_checkpoint() const {
    if (fault_checkpoint_path.empty()) return;
    std::ofstream out(fault_checkpoint_path);
    if (out) out << checkpoint().dump(2) << '\n';
}

nlohmann::json Trainer::checkpoint() const {
    nlohmann::json agents = nlohmann::json::array();
    for (const Agent& a : agents_) agents.push_back(a.net().save_state());
    nlohmann::json pending{{"valid", pending_.valid}};
    if (pending_.valid) {
        pending["state"] = pending_.state;
        pending["observations"] = pending_.observations;
        pending["actions"] = pending_.actions;
        pending["acted"] = std::vector<int>(pending_.acted.begin(), pending_.acted.end());
    }
    return nlohmann::json{{"format_version", 1},
                          {"cycle", cycle_},
                          {"critic", critic_.net().save_state()},
                          {"agents", std::move(agents)},
                          {"action_rng", action_rng_.save_state()},
                          {"pending", std::move(pending)},
                          {"world", world_->save_state()}};
}

void Trainer::restore(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != 1)
        throw ConfigError("unsupported checkpoint version");
    const nlohmann::json& agents = j.at("agents");
    if (agents.size() != agents_.size())
        throw ConfigError("checkpoint agent count mismatch");
    critic_.net().load_state(j.at("critic"));
    for (std::size_t i = 0; i < agents_.size(); ++i)
        agents_[i].net().load_state(agents.at(i));
    action_rng_.load_state(j.at("action_rng").get<std::string>());
    cycle_ = j.at("cycle").get<long>();
    const nlohmann::json& pending = j.at("pending");
    pending_ = Pending{};
    pending_.observations.resize(agents_.size());
    pending_.actions.assign(agents_.size(), 0);
    pending_.acted.assign(agents_.size(), 0);
    if (pending.at("valid").get<bool>()) {
        pending_.valid = true;
        pending_.state = pending.at("state").get<std::vector<double>>();
        pending_.observations =
            pending.at("observations").get<std::vector<std::vector<double>>>();
        pending_.actions = pending.at("actions").get<std::vector<int>>();
        const std::vector<int> acted = pending.at("acted").get<std::vector<int>>();
        pending_.acted.assign(acted.begin(), acted.end());
    }
    world_->load_state(j.at("world"));
}

}  // namespace edgecache
