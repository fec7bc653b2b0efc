#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgecache/config.hpp"
#include "edgecache/marl.hpp"

namespace edgecache {

struct SweepRow {
    double axis = 0.0;  // zipf exponent or cache ratio
    std::string policy;
    std::uint64_t seed = 0;
    double eta = 0.0;  // mean η over the trailing evaluation window
};

/// Per-cycle η for one full (policy, seed) run. MARL trains with sampled
/// actions for the leading cycles and finishes with greedy evaluation; the
/// classical policies run online over the whole horizon. Within a seed every
/// policy sees the identical request trace.
std::vector<double> run_policy_cycles(const RunConfig& config, const std::string& policy,
                                      std::uint64_t seed, const CycleObserver& observer = {});

/// Mean η over the last eval_cycles() of run_policy_cycles.
double run_policy_once(const RunConfig& config, const std::string& policy, std::uint64_t seed);

/// One row per (axis value, policy, seed), axis-major order. Points run in
/// parallel when config.jobs > 1; the row order is independent of the worker
/// schedule.
std::vector<SweepRow> run_beta_sweep(const RunConfig& config);
std::vector<SweepRow> run_cache_ratio_sweep(const RunConfig& config);  // σ·M must be integral

struct EpochInfo {
    long start_cycle = 0;
    double zipf_exponent = 0.0;
};

struct DriftResult {
    std::vector<std::string> policies;
    std::vector<std::vector<double>> eta;      // [policy][cycle]
    std::vector<std::vector<double>> eta_bar;  // running averages of the above
    std::vector<EpochInfo> epochs;             // logged metadata, hidden from agents
};

/// Time-varying popularity run: drift_epochs × drift_period cycles, every
/// policy measured each cycle. MARL keeps learning (sampled actions) through
/// the changes; there is no separate evaluation phase.
DriftResult run_drift(const RunConfig& config, std::uint64_t seed);

struct TrainResult {
    std::vector<TrainLogRow> log;  // training rows then evaluation rows
    std::string log_path;
    std::string checkpoint_path;
    std::string trace_path;  // empty unless the trace was exported
};

/// One MARL training run with artifacts: training-log CSV, periodic
/// checkpoints every config.checkpoint_every cycles (0 disables), a final
/// checkpoint, and optionally the request trace.
TrainResult run_train(const RunConfig& config, std::uint64_t seed, const std::string& out_dir,
                      bool export_trace);

/// Replays a recorded request trace against one policy. Classical policies
/// update online; "marl" requires a checkpoint and acts greedily. Returns
/// per-cycle η.
std::vector<double> run_replay(const RunConfig& config, const std::string& policy,
                               std::uint64_t seed,
                               const std::vector<std::vector<int>>& trace,
                               const std::string& checkpoint_path = "");

// --- deterministic artifact writers (byte-stable given identical inputs) ---

std::string format_double(double v);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
void write_drift_csv(const std::string& path, const DriftResult& result);
void write_train_log_csv(const std::string& path, const std::vector<TrainLogRow>& rows);

void write_trace_csv(const std::string& path, const std::vector<std::vector<int>>& trace);
std::vector<std::vector<int>> read_trace_csv(const std::string& path, int n_users);

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal self-contained SVG line chart. CSV is the contract; this is the
/// convenience view of the same numbers.
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<ChartSeries>& series);

/// Seed-mean η per (axis, policy), axis-major — the plotted view of sweep rows.
std::vector<ChartSeries> sweep_chart_series(const std::vector<SweepRow>& rows);

}  // namespace edgecache
