#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgecache/marl.hpp"
#include "edgecache/sim.hpp"

namespace edgecache {

/// Full experiment description: world + learner + run schedule. All fields
/// have working defaults from the desk/paper presets; a config file supplies
/// partial overrides on top.
struct RunConfig {
    WorldConfig world;
    Hyperparams learner;
    long n_cycles = 2500;
    double eval_fraction = 0.2;  // trailing greedy window for reported η
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::vector<std::string> policies{"marl", "lru", "lfu", "fifo"};
    std::vector<double> beta_list{0.5, 0.9, 1.3};
    std::vector<double> sigma_list{0.04, 0.1, 0.2, 0.4, 1.0};
    int drift_epochs = 4;
    int jobs = 1;
    long checkpoint_every = 0;  // cycles; 0 disables periodic checkpoints

    long eval_cycles() const;
    long train_cycles() const { return n_cycles - eval_cycles(); }
    void validate() const;  // throws ConfigError
};

/// CI-sized network: 3 strongly-overlapping cells, 12 users, 50 files.
RunConfig desk_config();

/// Full-size network: 5 cells, 30 users, 500 files, 40000 cycles.
RunConfig paper_config();

RunConfig preset_config(const std::string& scale);  // "desk" | "paper"

/// Applies a partial JSON override document onto a config. Unknown keys are
/// rejected. Transmit powers appear in the document in dB ("*_db") and are
/// stored internally in watts.
void apply_overrides(RunConfig& config, const nlohmann::json& overrides);

/// Parses a config file (JSON) and applies it over the given preset.
RunConfig load_config(const std::string& scale, const std::string& config_path);

nlohmann::json to_json(const RunConfig& config);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace edgecache
