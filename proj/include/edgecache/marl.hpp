#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgecache/mlp.hpp"
#include "edgecache/random.hpp"
#include "edgecache/sim.hpp"

namespace edgecache {

struct Hyperparams {
    double discount = 0.95;
    double actor_rate = 1e-4;
    double critic_rate = 1e-3;
    double temperature = 1.0;
    bool normalize_reward = true;  // reward = ΔD / mean(D̂) instead of raw ΔD
    std::vector<int> actor_hidden{128, 64};
    std::vector<int> critic_hidden{256, 128};

    void validate() const;  // throws ConfigError on out-of-range values
};

struct ActionChoice {
    int action = 0;
    double log_prob = 0.0;
};

/// One station's policy network over its 𝒞·L+1 actions.
class Agent {
public:
    Agent(int station_id, int observation_size, int n_actions,
          const std::vector<int>& hidden, Rng& init_rng);

    ActionChoice select(std::span<const double> observation, double temperature,
                        Rng& rng) const;
    int greedy(std::span<const double> observation) const;

    /// Probabilities over all actions at the given temperature (test hook).
    std::vector<double> action_probabilities(std::span<const double> observation,
                                             double temperature) const;

    /// θ += rate · δ · ∇ log π(action | observation).
    void update(std::span<const double> observation, int action, double td_error,
                double rate, double temperature);

    int station_id() const { return station_id_; }
    int n_actions() const { return n_actions_; }
    const Mlp& net() const { return net_; }
    Mlp& net() { return net_; }

private:
    std::vector<double> logits(std::span<const double> observation) const;

    int station_id_ = -1;
    int n_actions_ = 0;
    Mlp net_;
};

/// Centralized state-value estimator V(x).
class Critic {
public:
    Critic(int state_size, const std::vector<int>& hidden, Rng& init_rng);
    Critic() = default;  // unusable until assigned

    double value(std::span<const double> state) const;
    double td_error(std::span<const double> state, double reward,
                    std::span<const double> next_state, double discount) const;

    /// One semi-gradient descent step on δ² with the bootstrap target held
    /// constant: θ += rate · 2δ · ∇V(state).
    void update(std::span<const double> state, double td_error, double rate);

    const Mlp& net() const { return net_; }
    Mlp& net() { return net_; }

private:
    Mlp net_;
};

struct TrainLogRow {
    long cycle = 0;
    double reward = 0.0;    // credited to the previous cycle's transition
    double td_error = 0.0;  // 0 while no transition is pending (warm-up)
    double eta = 0.0;       // this cycle's η
};

/// Drives Algorithm-1 training over a SimWorld: shared feature extraction,
/// per-station actors, one centralized critic, one-cycle-lookahead reward.
/// Stations warm-fill their caches with the first 𝒞 distinct locally
/// requested files and only act (and learn) once full.
class Trainer {
public:
    Trainer(SimWorld& world, const Hyperparams& hp, std::uint64_t seed);

    /// Sampled actions + critic/actor updates. Throws TrainingFault after
    /// writing fault_checkpoint_path (when set) if parameters go non-finite.
    std::vector<TrainLogRow> train(long n_cycles, const CycleObserver& observer = {});

    /// Greedy actions, no updates, no pending transition.
    std::vector<TrainLogRow> evaluate(long n_cycles, const CycleObserver& observer = {});

    nlohmann::json checkpoint() const;
    void restore(const nlohmann::json& j);

    long cycle() const { return cycle_; }
    const Hyperparams& hyperparams() const { return hp_; }
    const Agent& agent(int i) const { return agents_.at(i); }
    Agent& agent(int i) { return agents_.at(i); }
    const Critic& critic() const { return critic_; }
    Critic& critic() { return critic_; }
    SimWorld& world() { return *world_; }

    std::string fault_checkpoint_path;  // empty: skip the emergency dump

private:
    struct Pending {
        bool valid = false;
        std::vector<double> state;
        std::vector<std::vector<double>> observations;  // per station, empty if idle
        std::vector<int> actions;                       // per station
        std::vector<char> acted;                        // per station
    };

    TrainLogRow step(bool learn, bool greedy, const CycleObserver& observer);
    void write_fault_checkpoint() const;

    SimWorld* world_;
    Hyperparams hp_;
    std::vector<Agent> agents_;
    Critic critic_;
    Rng action_rng_;
    long cycle_ = 0;
    Pending pending_;
};

}  // namespace edgecache
