#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgecache/errors.hpp"
#include "edgecache/experiments.hpp"

namespace fs = std::filesystem;
using namespace edgecache;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string scale = "desk";
    std::string out_dir = "out";
    std::string policy = "all";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 0;     // 0: keep the config value
    long cycles = 0;  // 0: keep the config value
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_policy = true) {
    cmd->add_option("--config", opts.config_path, "JSON config overriding the preset")
        ->check(CLI::ExistingFile);
    cmd->add_option("--scale", opts.scale, "preset: desk (CI-sized) or paper (full-size)")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--out", opts.out_dir, "output directory (default: out)");
    cmd->add_option("--seed", opts.seed, "run seed; replaces the config seed list")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    if (with_policy)
        cmd->add_option("--policy", opts.policy, "restrict to one policy")
            ->check(CLI::IsMember({"marl", "lru", "lfu", "fifo", "all"}));
    cmd->add_option("--jobs", opts.jobs, "worker threads for sweep points")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cycles", opts.cycles, "override the cycle count")
        ->check(CLI::PositiveNumber);
}

RunConfig resolve(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts.scale, opts.config_path);
    if (opts.seed_given) cfg.seeds = {opts.seed};
    if (opts.policy != "all") cfg.policies = {opts.policy};
    if (opts.jobs > 0) cfg.jobs = opts.jobs;
    if (opts.cycles > 0) cfg.n_cycles = opts.cycles;
    cfg.validate();
    return cfg;
}

void print_sweep_summary(const char* axis_name, const std::vector<SweepRow>& rows) {
    for (const ChartSeries& s : sweep_chart_series(rows))
        for (std::size_t i = 0; i < s.x.size(); ++i)
            std::printf("%s=%-6s policy=%-5s mean_eta=%s\n", axis_name,
                        format_double(s.x[i]).c_str(), s.name.c_str(),
                        format_double(s.y[i]).c_str());
}

std::vector<ChartSeries> drift_chart_series(const DriftResult& result) {
    std::vector<ChartSeries> series;
    for (std::size_t p = 0; p < result.policies.size(); ++p) {
        const std::vector<double>& bar = result.eta_bar[p];
        const std::size_t stride = std::max<std::size_t>(1, bar.size() / 1200);
        ChartSeries s{result.policies[p], {}, {}};
        for (std::size_t i = 0; i < bar.size(); i += stride) {
            s.x.push_back(static_cast<double>(i));
            s.y.push_back(bar[i]);
        }
        if (!bar.empty() && (bar.size() - 1) % stride != 0) {
            s.x.push_back(static_cast<double>(bar.size() - 1));
            s.y.push_back(bar.back());
        }
        series.push_back(std::move(s));
    }
    return series;
}

int cmd_sweep_beta(const CommonOpts& opts) {
    const RunConfig cfg = resolve(opts);
    const std::vector<SweepRow> rows = run_beta_sweep(cfg);
    fs::create_directories(opts.out_dir);
    const std::string csv = (fs::path(opts.out_dir) / "sweep_beta.csv").string();
    write_sweep_csv(csv, rows);
    write_line_chart_svg((fs::path(opts.out_dir) / "sweep_beta.svg").string(),
                         "Delay reduction vs popularity skew", "zipf exponent", "eta (%)",
                         sweep_chart_series(rows));
    print_sweep_summary("beta", rows);
    std::printf("wrote %s\n", csv.c_str());
    return 0;
}

int cmd_sweep_cache(const CommonOpts& opts) {
    const RunConfig cfg = resolve(opts);
    const std::vector<SweepRow> rows = run_cache_ratio_sweep(cfg);
    fs::create_directories(opts.out_dir);
    const std::string csv = (fs::path(opts.out_dir) / "sweep_cache.csv").string();
    write_sweep_csv(csv, rows);
    write_line_chart_svg((fs::path(opts.out_dir) / "sweep_cache.svg").string(),
                         "Delay reduction vs cache ratio", "cache ratio", "eta (%)",
                         sweep_chart_series(rows));
    print_sweep_summary("sigma", rows);
    std::printf("wrote %s\n", csv.c_str());
    return 0;
}

int cmd_drift(const CommonOpts& opts) {
    const RunConfig cfg = resolve(opts);
    const std::uint64_t seed = cfg.seeds.front();
    const DriftResult result = run_drift(cfg, seed);
    fs::create_directories(opts.out_dir);
    const std::string csv = (fs::path(opts.out_dir) / "drift.csv").string();
    write_drift_csv(csv, result);
    write_line_chart_svg((fs::path(opts.out_dir) / "drift.svg").string(),
                         "Running-average delay reduction under popularity drift", "cycle",
                         "eta_bar (%)", drift_chart_series(result));
    nlohmann::json epochs = nlohmann::json::array();
    for (const EpochInfo& e : result.epochs)
        epochs.push_back({{"start_cycle", e.start_cycle}, {"zipf_exponent", e.zipf_exponent}});
    {
        std::ofstream out((fs::path(opts.out_dir) / "drift_epochs.json").string(),
                          std::ios::binary);
        out << epochs.dump(2) << '\n';
    }
    for (std::size_t p = 0; p < result.policies.size(); ++p)
        std::printf("policy=%-5s final_eta_bar=%s\n", result.policies[p].c_str(),
                    format_double(result.eta_bar[p].back()).c_str());
    std::printf("wrote %s\n", csv.c_str());
    return 0;
}

int cmd_train(const CommonOpts& opts, bool export_trace) {
    CommonOpts train_opts = opts;
    train_opts.policy = "all";  // the policy flag does not apply here
    const RunConfig cfg = resolve(train_opts);
    const std::uint64_t seed = cfg.seeds.front();
    const TrainResult result = run_train(cfg, seed, opts.out_dir, export_trace);
    double eval_mean = 0.0;
    const long window = std::min<long>(cfg.eval_cycles(), static_cast<long>(result.log.size()));
    for (std::size_t i = result.log.size() - window; i < result.log.size(); ++i)
        eval_mean += result.log[i].eta;
    if (window > 0) eval_mean /= static_cast<double>(window);
    std::printf("trained %ld cycles, eval mean eta=%s\n", static_cast<long>(result.log.size()),
                format_double(eval_mean).c_str());
    std::printf("wrote %s\n", result.log_path.c_str());
    std::printf("wrote %s\n", result.checkpoint_path.c_str());
    if (!result.trace_path.empty()) std::printf("wrote %s\n", result.trace_path.c_str());
    return 0;
}

int cmd_replay(const CommonOpts& opts, const std::string& trace_path,
               const std::string& checkpoint_path) {
    if (opts.policy == "all")
        throw ConfigError("replay needs a single --policy (marl, lru, lfu or fifo)");
    const RunConfig cfg = resolve(opts);
    const std::uint64_t seed = cfg.seeds.front();
    const std::vector<std::vector<int>> trace =
        read_trace_csv(trace_path, cfg.world.topology.n_users);
    const std::vector<double> etas = run_replay(cfg, opts.policy, seed, trace, checkpoint_path);
    const std::vector<double> bar = etas.empty() ? std::vector<double>{} : running_average(etas);
    fs::create_directories(opts.out_dir);
    const std::string csv = (fs::path(opts.out_dir) / "replay.csv").string();
    {
        std::ofstream out(csv, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file: " + csv);
        out << "cycle,eta,eta_bar\n";
        for (std::size_t i = 0; i < etas.size(); ++i)
            out << i << ',' << format_double(etas[i]) << ',' << format_double(bar[i]) << '\n';
    }
    if (!bar.empty())
        std::printf("replayed %zu cycles, final eta_bar=%s\n", etas.size(),
                    format_double(bar.back()).c_str());
    std::printf("wrote %s\n", csv.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative edge-cache simulator: multi-agent actor-critic vs classical "
                 "eviction policies"};
    app.require_subcommand(1);

    CommonOpts sweep_beta_opts;
    add_common(app.add_subcommand("sweep-beta", "mean eta across Zipf exponents"),
               sweep_beta_opts);
    CommonOpts sweep_cache_opts;
    add_common(app.add_subcommand("sweep-cache", "mean eta across cache-size ratios"),
               sweep_cache_opts);
    CommonOpts drift_opts;
    add_common(app.add_subcommand("drift", "running-average eta under popularity drift"),
               drift_opts);

    CommonOpts train_opts;
    bool export_trace = false;
    CLI::App* train_cmd = app.add_subcommand("train", "single MARL training run with artifacts");
    add_common(train_cmd, train_opts, /*with_policy=*/false);
    train_cmd->add_flag("--export-trace", export_trace, "dump the request trace as CSV");

    CommonOpts replay_opts;
    std::string trace_path;
    std::string checkpoint_path;
    CLI::App* replay_cmd =
        app.add_subcommand("replay", "replay a recorded request trace against one policy");
    add_common(replay_cmd, replay_opts);
    replay_cmd->add_option("--trace", trace_path, "trace CSV (cycle,user,file)")
        ->required()
        ->check(CLI::ExistingFile);
    replay_cmd->add_option("--checkpoint", checkpoint_path, "trained checkpoint (marl only)")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("sweep-beta")) return cmd_sweep_beta(sweep_beta_opts);
        if (app.got_subcommand("sweep-cache")) return cmd_sweep_cache(sweep_cache_opts);
        if (app.got_subcommand("drift")) return cmd_drift(drift_opts);
        if (app.got_subcommand("train")) return cmd_train(train_opts, export_trace);
        if (app.got_subcommand("replay"))
            return cmd_replay(replay_opts, trace_path, checkpoint_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
