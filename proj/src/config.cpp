#include "edgecache/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "edgecache/errors.hpp"

namespace edgecache {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

long RunConfig::eval_cycles() const {
    return static_cast<long>(std::llround(static_cast<double>(n_cycles) * eval_fraction));
}

void RunConfig::validate() const {
    const auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (n_cycles < 0) fail("n_cycles must be >= 0");
    if (eval_fraction < 0.0 || eval_fraction > 1.0) fail("eval_fraction must be in [0, 1]");
    if (seeds.empty()) fail("at least one seed is required");
    if (policies.empty()) fail("at least one policy is required");
    static const std::set<std::string> known_policies{"marl", "lru", "lfu", "fifo"};
    for (const auto& p : policies)
        if (!known_policies.count(p)) fail("unknown policy: " + p);
    if (beta_list.empty()) fail("beta_list must not be empty");
    for (double b : beta_list)
        if (b < 0.0) fail("zipf exponents must be >= 0");
    if (sigma_list.empty()) fail("sigma_list must not be empty");
    for (double s : sigma_list)
        if (s <= 0.0 || s > 1.0) fail("cache size ratios must be in (0, 1]");
    if (drift_epochs < 1) fail("drift_epochs must be >= 1");
    if (jobs < 1) fail("jobs must be >= 1");
    if (checkpoint_every < 0) fail("checkpoint_every must be >= 0");

    const auto& t = world.topology;
    if (t.n_stations < 1) fail("n_stations must be >= 1");
    if (t.n_users < 1) fail("n_users must be >= 1");
    if (t.cell_radius_m <= 0.0) fail("cell_radius_m must be > 0");
    if (t.arena_width_m <= 0.0 || t.arena_height_m <= 0.0) fail("arena dimensions must be > 0");
    if (t.station_power_w <= 0.0) fail("station_power_w must be > 0");
    if (t.cloud.tx_power_w <= 0.0) fail("cloud tx_power_w must be > 0");
    if (t.cloud.backhaul_distance_m <= 0.0) fail("backhaul_distance_m must be > 0");

    const auto& c = world.channel;
    if (c.bandwidth_hz <= 0.0) fail("bandwidth_hz must be > 0");
    if (c.noise_psd_w_per_hz <= 0.0) fail("noise_psd_w_per_hz must be > 0");
    if (c.frame_seconds <= 0.0) fail("frame_seconds must be > 0");
    if (c.pathloss_exponent <= 0.0) fail("pathloss_exponent must be > 0");
    if (c.max_frames < 1) fail("max_frames must be >= 1");

    if (world.file_units <= 0.0) fail("file_units must be > 0");
    if (world.cache_capacity < 1) fail("cache_capacity must be >= 1");
    if (world.cache_capacity > world.workload.catalog_size)
        fail("cache_capacity must not exceed the catalog size");
    for (int w : world.feature_windows)
        if (w < 1) fail("feature windows must be >= 1");

    const auto& wl = world.workload;
    if (wl.catalog_size < 1) fail("catalog_size must be >= 1");
    if (wl.n_groups < 1) fail("n_groups must be >= 1");
    if (wl.zipf_exponent < 0.0) fail("zipf_exponent must be >= 0");
    if (wl.perturbation_swaps < -1) fail("perturbation_swaps must be >= -1");
    if (wl.drift_period < 1) fail("drift_period must be >= 1");
    if (wl.drift_beta_min < 0.0 || wl.drift_beta_max < wl.drift_beta_min)
        fail("drift beta range must satisfy 0 <= min <= max");

    learner.validate();
}

RunConfig desk_config() {
    RunConfig cfg;
    cfg.world.topology.n_stations = 3;
    cfg.world.topology.n_users = 12;
    cfg.world.topology.cell_radius_m = 800.0;
    cfg.world.topology.arena_width_m = 1400.0;
    cfg.world.topology.arena_height_m = 1000.0;
    cfg.world.topology.station_power_w = db_to_linear(16.9);
    cfg.world.topology.cloud.tx_power_w = db_to_linear(20.0);
    cfg.world.topology.cloud.backhaul_distance_m = 10000.0;
    cfg.world.file_units = 100.0;
    cfg.world.cache_capacity = 5;
    cfg.world.workload.catalog_size = 50;
    cfg.world.workload.n_groups = 5;
    cfg.world.workload.zipf_exponent = 1.3;
    cfg.world.workload.drift_period = 2000;
    cfg.learner.actor_rate = 0.02;
    cfg.learner.critic_rate = 0.02;
    cfg.n_cycles = 2500;
    return cfg;
}

RunConfig paper_config() {
    RunConfig cfg;
    cfg.world.topology.n_stations = 5;
    cfg.world.topology.n_users = 30;
    cfg.world.topology.cell_radius_m = 800.0;
    cfg.world.topology.arena_width_m = 2400.0;
    cfg.world.topology.arena_height_m = 1600.0;
    cfg.world.topology.station_power_w = db_to_linear(16.9);
    cfg.world.topology.cloud.tx_power_w = db_to_linear(20.0);
    cfg.world.topology.cloud.backhaul_distance_m = 10000.0;
    cfg.world.file_units = 1e4;
    cfg.world.cache_capacity = 40;
    cfg.world.workload.catalog_size = 500;
    cfg.world.workload.n_groups = 5;
    cfg.world.workload.zipf_exponent = 1.3;
    cfg.world.workload.drift_period = 10000;
    cfg.learner.actor_rate = 1e-4;
    cfg.learner.critic_rate = 1e-3;
    cfg.n_cycles = 40000;
    cfg.beta_list = {0.5, 0.7, 0.9, 1.1, 1.3, 1.5};
    return cfg;
}

RunConfig preset_config(const std::string& scale) {
    if (scale == "desk") return desk_config();
    if (scale == "paper") return paper_config();
    throw ConfigError("unknown scale: " + scale + " (expected desk or paper)");
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& section) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key))
            throw ConfigError("unknown config key: " + section + key);
    }
}

void apply_topology(TopologyParams& t, const nlohmann::json& j) {
    reject_unknown(j,
                   {"n_stations", "n_users", "cell_radius_m", "arena_width_m", "arena_height_m",
                    "station_power_db", "cloud"},
                   "world.topology.");
    if (j.contains("n_stations")) t.n_stations = j.at("n_stations").get<int>();
    if (j.contains("n_users")) t.n_users = j.at("n_users").get<int>();
    if (j.contains("cell_radius_m")) t.cell_radius_m = j.at("cell_radius_m").get<double>();
    if (j.contains("arena_width_m")) t.arena_width_m = j.at("arena_width_m").get<double>();
    if (j.contains("arena_height_m")) t.arena_height_m = j.at("arena_height_m").get<double>();
    if (j.contains("station_power_db"))
        t.station_power_w = db_to_linear(j.at("station_power_db").get<double>());
    if (j.contains("cloud")) {
        const auto& jc = j.at("cloud");
        reject_unknown(jc, {"tx_power_db", "backhaul_distance_m"}, "world.topology.cloud.");
        if (jc.contains("tx_power_db"))
            t.cloud.tx_power_w = db_to_linear(jc.at("tx_power_db").get<double>());
        if (jc.contains("backhaul_distance_m"))
            t.cloud.backhaul_distance_m = jc.at("backhaul_distance_m").get<double>();
    }
}

void apply_channel(ChannelParams& c, const nlohmann::json& j) {
    reject_unknown(j,
                   {"bandwidth_hz", "noise_psd_w_per_hz", "frame_seconds", "pathloss_exponent",
                    "max_frames"},
                   "world.channel.");
    if (j.contains("bandwidth_hz")) c.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    if (j.contains("noise_psd_w_per_hz"))
        c.noise_psd_w_per_hz = j.at("noise_psd_w_per_hz").get<double>();
    if (j.contains("frame_seconds")) c.frame_seconds = j.at("frame_seconds").get<double>();
    if (j.contains("pathloss_exponent"))
        c.pathloss_exponent = j.at("pathloss_exponent").get<double>();
    if (j.contains("max_frames")) c.max_frames = j.at("max_frames").get<long>();
}

void apply_workload(WorkloadParams& w, const nlohmann::json& j) {
    reject_unknown(j,
                   {"catalog_size", "n_groups", "zipf_exponent", "perturbation_swaps",
                    "drift_enabled", "drift_period", "drift_beta_min", "drift_beta_max",
                    "drift_randomizes_first_epoch"},
                   "world.workload.");
    if (j.contains("catalog_size")) w.catalog_size = j.at("catalog_size").get<int>();
    if (j.contains("n_groups")) w.n_groups = j.at("n_groups").get<int>();
    if (j.contains("zipf_exponent")) w.zipf_exponent = j.at("zipf_exponent").get<double>();
    if (j.contains("perturbation_swaps"))
        w.perturbation_swaps = j.at("perturbation_swaps").get<int>();
    if (j.contains("drift_enabled")) w.drift_enabled = j.at("drift_enabled").get<bool>();
    if (j.contains("drift_period")) w.drift_period = j.at("drift_period").get<long>();
    if (j.contains("drift_beta_min")) w.drift_beta_min = j.at("drift_beta_min").get<double>();
    if (j.contains("drift_beta_max")) w.drift_beta_max = j.at("drift_beta_max").get<double>();
    if (j.contains("drift_randomizes_first_epoch"))
        w.drift_randomizes_first_epoch = j.at("drift_randomizes_first_epoch").get<bool>();
}

void apply_world(WorldConfig& w, const nlohmann::json& j) {
    reject_unknown(
        j, {"topology", "channel", "workload", "file_units", "cache_capacity", "feature_windows"},
        "world.");
    if (j.contains("topology")) apply_topology(w.topology, j.at("topology"));
    if (j.contains("channel")) apply_channel(w.channel, j.at("channel"));
    if (j.contains("workload")) apply_workload(w.workload, j.at("workload"));
    if (j.contains("file_units")) w.file_units = j.at("file_units").get<double>();
    if (j.contains("cache_capacity")) w.cache_capacity = j.at("cache_capacity").get<int>();
    if (j.contains("feature_windows")) {
        const auto windows = j.at("feature_windows").get<std::vector<int>>();
        if (windows.size() != 3) throw ConfigError("feature_windows must list three lengths");
        std::copy(windows.begin(), windows.end(), w.feature_windows.begin());
    }
}

void apply_learner(Hyperparams& h, const nlohmann::json& j) {
    reject_unknown(j,
                   {"discount", "actor_rate", "critic_rate", "temperature", "normalize_reward",
                    "actor_hidden", "critic_hidden"},
                   "learner.");
    if (j.contains("discount")) h.discount = j.at("discount").get<double>();
    if (j.contains("actor_rate")) h.actor_rate = j.at("actor_rate").get<double>();
    if (j.contains("critic_rate")) h.critic_rate = j.at("critic_rate").get<double>();
    if (j.contains("temperature")) h.temperature = j.at("temperature").get<double>();
    if (j.contains("normalize_reward")) h.normalize_reward = j.at("normalize_reward").get<bool>();
    if (j.contains("actor_hidden")) h.actor_hidden = j.at("actor_hidden").get<std::vector<int>>();
    if (j.contains("critic_hidden"))
        h.critic_hidden = j.at("critic_hidden").get<std::vector<int>>();
}

}  // namespace

void apply_overrides(RunConfig& config, const nlohmann::json& overrides) {
    if (!overrides.is_object()) throw ConfigError("config document must be a JSON object");
    reject_unknown(overrides,
                   {"world", "learner", "n_cycles", "eval_fraction", "seeds", "policies",
                    "beta_list", "sigma_list", "drift_epochs", "jobs", "checkpoint_every"},
                   "");
    const auto& j = overrides;
    if (j.contains("world")) apply_world(config.world, j.at("world"));
    if (j.contains("learner")) apply_learner(config.learner, j.at("learner"));
    if (j.contains("n_cycles")) config.n_cycles = j.at("n_cycles").get<long>();
    if (j.contains("eval_fraction")) config.eval_fraction = j.at("eval_fraction").get<double>();
    if (j.contains("seeds")) config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("policies")) config.policies = j.at("policies").get<std::vector<std::string>>();
    if (j.contains("beta_list")) config.beta_list = j.at("beta_list").get<std::vector<double>>();
    if (j.contains("sigma_list"))
        config.sigma_list = j.at("sigma_list").get<std::vector<double>>();
    if (j.contains("drift_epochs")) config.drift_epochs = j.at("drift_epochs").get<int>();
    if (j.contains("jobs")) config.jobs = j.at("jobs").get<int>();
    if (j.contains("checkpoint_every"))
        config.checkpoint_every = j.at("checkpoint_every").get<long>();
    config.validate();
}

RunConfig load_config(const std::string& scale, const std::string& config_path) {
    RunConfig cfg = preset_config(scale);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config parse error in " + config_path + ": " + e.what());
        }
        apply_overrides(cfg, j);
    } else {
        cfg.validate();
    }
    return cfg;
}

nlohmann::json to_json(const RunConfig& config) {
    const auto& t = config.world.topology;
    const auto& c = config.world.channel;
    const auto& w = config.world.workload;
    const auto& h = config.learner;
    return nlohmann::json{
        {"world",
         {{"topology",
           {{"n_stations", t.n_stations},
            {"n_users", t.n_users},
            {"cell_radius_m", t.cell_radius_m},
            {"arena_width_m", t.arena_width_m},
            {"arena_height_m", t.arena_height_m},
            {"station_power_db", linear_to_db(t.station_power_w)},
            {"cloud",
             {{"tx_power_db", linear_to_db(t.cloud.tx_power_w)},
              {"backhaul_distance_m", t.cloud.backhaul_distance_m}}}}},
          {"channel",
           {{"bandwidth_hz", c.bandwidth_hz},
            {"noise_psd_w_per_hz", c.noise_psd_w_per_hz},
            {"frame_seconds", c.frame_seconds},
            {"pathloss_exponent", c.pathloss_exponent},
            {"max_frames", c.max_frames}}},
          {"workload",
           {{"catalog_size", w.catalog_size},
            {"n_groups", w.n_groups},
            {"zipf_exponent", w.zipf_exponent},
            {"perturbation_swaps", w.perturbation_swaps},
            {"drift_enabled", w.drift_enabled},
            {"drift_period", w.drift_period},
            {"drift_beta_min", w.drift_beta_min},
            {"drift_beta_max", w.drift_beta_max},
            {"drift_randomizes_first_epoch", w.drift_randomizes_first_epoch}}},
          {"file_units", config.world.file_units},
          {"cache_capacity", config.world.cache_capacity},
          {"feature_windows", config.world.feature_windows}}},
        {"learner",
         {{"discount", h.discount},
          {"actor_rate", h.actor_rate},
          {"critic_rate", h.critic_rate},
          {"temperature", h.temperature},
          {"normalize_reward", h.normalize_reward},
          {"actor_hidden", h.actor_hidden},
          {"critic_hidden", h.critic_hidden}}},
        {"n_cycles", config.n_cycles},
        {"eval_fraction", config.eval_fraction},
        {"seeds", config.seeds},
        {"policies", config.policies},
        {"beta_list", config.beta_list},
        {"sigma_list", config.sigma_list},
        {"drift_epochs", config.drift_epochs},
        {"jobs", config.jobs},
        {"checkpoint_every", config.checkpoint_every}};
}

}  // namespace edgecache
