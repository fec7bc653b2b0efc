#include "edgecache/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "edgecache/errors.hpp"

namespace edgecache {

namespace {

BaselinePolicy parse_baseline(const std::string& policy) {
    if (policy == "lru") return BaselinePolicy::Lru;
    if (policy == "lfu") return BaselinePolicy::Lfu;
    if (policy == "fifo") return BaselinePolicy::Fifo;
    throw ConfigError("unknown baseline policy: " + policy);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    return out;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace

std::vector<double> run_policy_cycles(const RunConfig& config, const std::string& policy,
                                      std::uint64_t seed, const CycleObserver& observer) {
    SimWorld world(config.world, seed);
    if (policy == "marl") {
        Trainer trainer(world, config.learner, seed);
        std::vector<double> etas;
        etas.reserve(config.n_cycles);
        for (const TrainLogRow& row : trainer.train(config.train_cycles(), observer))
            etas.push_back(row.eta);
        for (const TrainLogRow& row : trainer.evaluate(config.eval_cycles(), observer))
            etas.push_back(row.eta);
        return etas;
    }
    return run_baseline_policy(world, parse_baseline(policy), 0, config.n_cycles, observer);
}

double run_policy_once(const RunConfig& config, const std::string& policy, std::uint64_t seed) {
    const std::vector<double> etas = run_policy_cycles(config, policy, seed);
    const long window = std::min<long>(config.eval_cycles(), static_cast<long>(etas.size()));
    if (window <= 0) throw ConfigError("evaluation window is empty");
    double sum = 0.0;
    for (std::size_t i = etas.size() - static_cast<std::size_t>(window); i < etas.size(); ++i)
        sum += etas[i];
    return sum / static_cast<double>(window);
}

namespace {

struct SweepPoint {
    double axis = 0.0;
    RunConfig config;
    std::string policy;
    std::uint64_t seed = 0;
};

// Workers pull point indices from a shared counter; the output row order is
// fixed by the point list, not the schedule.
std::vector<SweepRow> run_points(const std::vector<SweepPoint>& points, int jobs) {
    std::vector<SweepRow> rows(points.size());
    if (points.empty()) return rows;
    const auto run_one = [&](std::size_t i) {
        const SweepPoint& p = points[i];
        rows[i] = SweepRow{p.axis, p.policy, p.seed, run_policy_once(p.config, p.policy, p.seed)};
    };
    const int n_workers = std::max(1, std::min(jobs, static_cast<int>(points.size())));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < points.size(); ++i) run_one(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                run_one(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

}  // namespace

std::vector<SweepRow> run_beta_sweep(const RunConfig& config) {
    config.validate();
    std::vector<SweepPoint> points;
    points.reserve(config.beta_list.size() * config.policies.size() * config.seeds.size());
    for (double beta : config.beta_list)
        for (const std::string& policy : config.policies)
            for (std::uint64_t seed : config.seeds) {
                SweepPoint p{beta, config, policy, seed};
                p.config.world.workload.zipf_exponent = beta;
                points.push_back(std::move(p));
            }
    return run_points(points, config.jobs);
}

std::vector<SweepRow> run_cache_ratio_sweep(const RunConfig& config) {
    config.validate();
    const int catalog = config.world.workload.catalog_size;
    std::vector<SweepPoint> points;
    points.reserve(config.sigma_list.size() * config.policies.size() * config.seeds.size());
    for (double sigma : config.sigma_list) {
        const double scaled = sigma * catalog;
        const long capacity = std::llround(scaled);
        if (capacity < 1 || std::abs(scaled - static_cast<double>(capacity)) > 1e-9)
            throw ConfigError("cache ratio " + format_double(sigma) +
                              " does not give an integral capacity for catalog size " +
                              std::to_string(catalog));
        for (const std::string& policy : config.policies)
            for (std::uint64_t seed : config.seeds) {
                SweepPoint p{sigma, config, policy, seed};
                p.config.world.cache_capacity = static_cast<int>(capacity);
                points.push_back(std::move(p));
            }
    }
    return run_points(points, config.jobs);
}

DriftResult run_drift(const RunConfig& config, std::uint64_t seed) {
    RunConfig point = config;
    point.world.workload.drift_enabled = true;
    point.world.workload.drift_randomizes_first_epoch = true;
    point.n_cycles = static_cast<long>(config.drift_epochs) * point.world.workload.drift_period;
    point.eval_fraction = 0.0;  // MARL keeps learning; η is measured online
    point.validate();

    DriftResult result;
    result.policies = point.policies;
    for (const std::string& policy : point.policies) {
        SimWorld world(point.world, seed);
        std::vector<EpochInfo> epochs;
        long last_start = -1;
        const CycleObserver observer = [&](long, const CycleOutcome&, const std::vector<int>&) {
            const PopularityEpoch& ep = world.workload().epoch();
            if (ep.start_cycle != last_start) {
                last_start = ep.start_cycle;
                epochs.push_back(EpochInfo{ep.start_cycle, ep.zipf.exponent});
            }
        };
        std::vector<double> etas;
        if (policy == "marl") {
            Trainer trainer(world, point.learner, seed);
            etas.reserve(point.n_cycles);
            for (const TrainLogRow& row : trainer.train(point.n_cycles, observer))
                etas.push_back(row.eta);
        } else {
            etas = run_baseline_policy(world, parse_baseline(policy), 0, point.n_cycles, observer);
        }
        result.eta_bar.push_back(running_average(etas));
        result.eta.push_back(std::move(etas));
        // All policies replay the same workload stream, so the epoch schedule
        // is identical across them; keep the first.
        if (result.epochs.empty()) result.epochs = std::move(epochs);
    }
    return result;
}

TrainResult run_train(const RunConfig& config, std::uint64_t seed, const std::string& out_dir,
                      bool export_trace) {
    config.validate();
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    SimWorld world(config.world, seed);
    Trainer trainer(world, config.learner, seed);
    trainer.fault_checkpoint_path = (fs::path(out_dir) / "checkpoint_fault.json").string();

    std::vector<std::vector<int>> trace;
    CycleObserver observer;
    if (export_trace)
        observer = [&trace](long, const CycleOutcome&, const std::vector<int>& requests) {
            trace.push_back(requests);
        };

    TrainResult result;
    long remaining = config.train_cycles();
    const long chunk = config.checkpoint_every > 0 ? config.checkpoint_every
                                                   : std::max<long>(remaining, 1);
    while (remaining > 0) {
        const long n = std::min(chunk, remaining);
        const std::vector<TrainLogRow> rows = trainer.train(n, observer);
        result.log.insert(result.log.end(), rows.begin(), rows.end());
        remaining -= n;
        if (config.checkpoint_every > 0 && remaining > 0) {
            char name[48];
            std::snprintf(name, sizeof(name), "checkpoint_%08ld.json", trainer.cycle());
            write_json_file((fs::path(out_dir) / name).string(), trainer.checkpoint());
        }
    }
    const std::vector<TrainLogRow> eval_rows = trainer.evaluate(config.eval_cycles(), observer);
    result.log.insert(result.log.end(), eval_rows.begin(), eval_rows.end());

    result.log_path = (fs::path(out_dir) / "train_log.csv").string();
    write_train_log_csv(result.log_path, result.log);
    result.checkpoint_path = (fs::path(out_dir) / "checkpoint_final.json").string();
    write_json_file(result.checkpoint_path, trainer.checkpoint());
    if (export_trace) {
        result.trace_path = (fs::path(out_dir) / "trace.csv").string();
        write_trace_csv(result.trace_path, trace);
    }
    return result;
}

std::vector<double> run_replay(const RunConfig& config, const std::string& policy,
                               std::uint64_t seed, const std::vector<std::vector<int>>& trace,
                               const std::string& checkpoint_path) {
    config.validate();
    SimWorld world(config.world, seed);
    const int catalog = config.world.workload.catalog_size;
    for (const std::vector<int>& requests : trace) {
        if (static_cast<int>(requests.size()) != world.n_users())
            throw ConfigError("trace row width does not match the user count");
        for (int file : requests)
            if (file < 0 || file >= catalog) throw ConfigError("trace file id out of range");
    }

    std::vector<double> etas;
    etas.reserve(trace.size());
    if (policy == "marl") {
        if (checkpoint_path.empty())
            throw ConfigError("marl replay requires --checkpoint");
        Trainer trainer(world, config.learner, seed);
        std::ifstream in(checkpoint_path);
        if (!in) throw ConfigError("cannot open checkpoint: " + checkpoint_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("checkpoint parse error: ") + e.what());
        }
        trainer.restore(j);
        long cycle = trainer.cycle();
        for (const std::vector<int>& requests : trace) {
            const CycleOutcome outcome = world.account(requests, cycle);
            world.record_features(requests);
            for (int station = 0; station < world.n_stations(); ++station) {
                const std::vector<int> candidates = world.candidate_files(station, requests);
                CacheState& cache = world.caches()[station];
                if (!cache.full()) {
                    for (int file : candidates) {
                        cache.insert_if_absent(file, cycle);
                        if (cache.full()) break;
                    }
                    continue;
                }
                if (candidates.empty()) continue;
                const std::vector<double> obs = world.features().observation(station);
                const int action_id = trainer.agent(station).greedy(obs);
                cache.apply(decode_action(action_id, world.cache_capacity(),
                                          static_cast<int>(candidates.size())),
                            candidates, cycle);
            }
            etas.push_back(outcome.eta);
            ++cycle;
        }
        return etas;
    }
    const BaselinePolicy pol = parse_baseline(policy);
    long cycle = 0;
    for (const std::vector<int>& requests : trace) {
        etas.push_back(run_baseline_cycle(world, pol, requests, cycle).eta);
        ++cycle;
    }
    return etas;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    auto out = open_out(path);
    out << "axis,policy,seed,eta\n";
    for (const SweepRow& row : rows)
        out << format_double(row.axis) << ',' << row.policy << ',' << row.seed << ','
            << format_double(row.eta) << '\n';
}

void write_drift_csv(const std::string& path, const DriftResult& result) {
    auto out = open_out(path);
    out << "cycle,policy,eta_bar\n";
    std::size_t n_cycles = 0;
    for (const std::vector<double>& series : result.eta_bar)
        n_cycles = std::max(n_cycles, series.size());
    for (std::size_t cycle = 0; cycle < n_cycles; ++cycle)
        for (std::size_t p = 0; p < result.policies.size(); ++p) {
            if (cycle >= result.eta_bar[p].size()) continue;
            out << cycle << ',' << result.policies[p] << ','
                << format_double(result.eta_bar[p][cycle]) << '\n';
        }
}

void write_train_log_csv(const std::string& path, const std::vector<TrainLogRow>& rows) {
    auto out = open_out(path);
    out << "cycle,reward,td_error,eta\n";
    for (const TrainLogRow& row : rows)
        out << row.cycle << ',' << format_double(row.reward) << ','
            << format_double(row.td_error) << ',' << format_double(row.eta) << '\n';
}

void write_trace_csv(const std::string& path, const std::vector<std::vector<int>>& trace) {
    auto out = open_out(path);
    out << "cycle,user,file\n";
    for (std::size_t cycle = 0; cycle < trace.size(); ++cycle)
        for (std::size_t user = 0; user < trace[cycle].size(); ++user)
            out << cycle << ',' << user << ',' << trace[cycle][user] << '\n';
}

std::vector<std::vector<int>> read_trace_csv(const std::string& path, int n_users) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "cycle,user,file")
        throw ConfigError("trace file must start with header cycle,user,file");
    std::vector<std::vector<int>> trace;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        long cycle = 0;
        int user = 0;
        int file = 0;
        if (std::sscanf(line.c_str(), "%ld,%d,%d", &cycle, &user, &file) != 3)
            throw ConfigError("malformed trace row at line " + std::to_string(line_no));
        const long expected_cycle = user == 0 ? static_cast<long>(trace.size())
                                              : static_cast<long>(trace.size()) - 1;
        if (cycle != expected_cycle || user < 0 || user >= n_users ||
            (user == 0 ? false : user != static_cast<int>(trace.back().size())))
            throw ConfigError("trace rows must cover users 0.." + std::to_string(n_users - 1) +
                              " per cycle in order (line " + std::to_string(line_no) + ")");
        if (user == 0) trace.emplace_back();
        trace.back().push_back(file);
    }
    if (!trace.empty() && static_cast<int>(trace.back().size()) != n_users)
        throw ConfigError("trace ends mid-cycle");
    return trace;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<ChartSeries>& series) {
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    constexpr int kPaletteSize = 8;
    const double width = 880.0, height = 520.0;
    const double x0 = 70.0, x1 = 660.0, y0 = 40.0, y1 = 460.0;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool any = false;
    for (const ChartSeries& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    if (xmax - xmin < 1e-12) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    const double ypad = std::max((ymax - ymin) * 0.05, 1e-9);
    ymin -= ypad;
    ymax += ypad;
    if (ymax - ymin < 1e-12) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const auto px = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); };
    const auto py = [&](double y) { return y1 - (y - ymin) / (ymax - ymin) * (y1 - y0); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << svg_num(width) << ' '
        << svg_num(height) << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg << "<text x=\"" << svg_num((x0 + x1) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-size=\"16\" fill=\"#202020\">" << xml_escape(title) << "</text>\n";

    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        const double gx = px(fx), gy = py(fy);
        svg << "<line x1=\"" << svg_num(gx) << "\" y1=\"" << svg_num(y0) << "\" x2=\""
            << svg_num(gx) << "\" y2=\"" << svg_num(y1) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<line x1=\"" << svg_num(x0) << "\" y1=\"" << svg_num(gy) << "\" x2=\""
            << svg_num(x1) << "\" y2=\"" << svg_num(gy) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << svg_num(gx) << "\" y=\"" << svg_num(y1 + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#404040\">"
            << xml_escape(tick_label(fx)) << "</text>\n";
        svg << "<text x=\"" << svg_num(x0 - 8) << "\" y=\"" << svg_num(gy + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#404040\">"
            << xml_escape(tick_label(fy)) << "</text>\n";
    }
    svg << "<rect x=\"" << svg_num(x0) << "\" y=\"" << svg_num(y0) << "\" width=\""
        << svg_num(x1 - x0) << "\" height=\"" << svg_num(y1 - y0)
        << "\" fill=\"none\" stroke=\"#404040\"/>\n";
    svg << "<text x=\"" << svg_num((x0 + x1) / 2) << "\" y=\"" << svg_num(y1 + 42)
        << "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#202020\">" << xml_escape(x_label)
        << "</text>\n";
    svg << "<text x=\"18\" y=\"" << svg_num((y0 + y1) / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#202020\" transform=\"rotate(-90 18 "
        << svg_num((y0 + y1) / 2) << ")\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const ChartSeries& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (i) svg << ' ';
            svg << svg_num(px(s.x[i])) << ',' << svg_num(py(s.y[i]));
        }
        svg << "\"/>\n";
        const double ly = y0 + 16.0 + 22.0 * static_cast<double>(si);
        svg << "<line x1=\"" << svg_num(x1 + 16) << "\" y1=\"" << svg_num(ly) << "\" x2=\""
            << svg_num(x1 + 44) << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2.5\"/>\n";
        svg << "<text x=\"" << svg_num(x1 + 50) << "\" y=\"" << svg_num(ly + 4)
            << "\" font-size=\"12\" fill=\"#202020\">" << xml_escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";

    auto out = open_out(path);
    out << svg.str();
}

std::vector<ChartSeries> sweep_chart_series(const std::vector<SweepRow>& rows) {
    std::vector<ChartSeries> series;
    std::vector<std::vector<int>> counts;
    for (const SweepRow& row : rows) {
        std::size_t si = 0;
        while (si < series.size() && series[si].name != row.policy) ++si;
        if (si == series.size()) {
            series.push_back(ChartSeries{row.policy, {}, {}});
            counts.emplace_back();
        }
        ChartSeries& s = series[si];
        std::vector<int>& c = counts[si];
        std::size_t pi = 0;
        while (pi < s.x.size() && s.x[pi] != row.axis) ++pi;
        if (pi == s.x.size()) {
            s.x.push_back(row.axis);
            s.y.push_back(0.0);
            c.push_back(0);
        }
        s.y[pi] += row.eta;
        c[pi] += 1;
    }
    for (std::size_t si = 0; si < series.size(); ++si)
        for (std::size_t pi = 0; pi < series[si].y.size(); ++pi)
            series[si].y[pi] /= static_cast<double>(counts[si][pi]);
    return series;
}

}  // namespace edgecache
