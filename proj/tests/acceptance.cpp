// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL] line;
// the exit code is the number of failures. `--only N` runs a single criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "edgecache/cache.hpp"
#include "edgecache/channel.hpp"
#include "edgecache/config.hpp"
#include "edgecache/experiments.hpp"
#include "edgecache/marl.hpp"
#include "edgecache/metrics.hpp"
#include "edgecache/mlp.hpp"
#include "edgecache/random.hpp"
#include "edgecache/sim.hpp"
#include "edgecache/workload.hpp"

using namespace edgecache;

namespace {

// ---------------------------------------------------------------- criterion 1

bool links_match_brute_force() {
    ChannelParams params;
    const double powers[] = {48.977881936844595, 100.0};
    const double units[] = {1.0, 10.0, 100.0};
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        Rng pick(10000 + static_cast<std::uint64_t>(i));
        const Link link{powers[pick.uniform_int(2)], pick.uniform(1.0, 2000.0)};
        const FileSize file = FileSize::from_units(units[pick.uniform_int(3)]);
        const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(i);

        Rng impl_rng(seed);
        const TransmissionResult res = transmission_delay(file, link, params, impl_rng);

        Rng oracle_rng(seed);
        double delivered = 0.0;
        double before = 0.0;
        long frames = 0;
        while (delivered < file.bits && frames < params.max_frames) {
            const double z = sample_fading(link, params, oracle_rng);
            before = delivered;
            delivered += params.frame_seconds * capacity(z, link, params);
            ++frames;
        }
        const bool truncated = delivered < file.bits;
        if (res.frames != frames || res.truncated != truncated ||
            (!truncated && !(before < file.bits && delivered >= file.bits)) ||
            !(impl_rng == oracle_rng)) {
            ++failures;
        }
    }
    // Truncation path, same replay contract.
    ChannelParams capped = params;
    capped.max_frames = 5;
    Rng rng(77);
    const TransmissionResult res =
        transmission_delay(FileSize{1e12}, Link{48.977881936844595, 10000.0}, capped, rng);
    if (res.frames != 5 || !res.truncated) ++failures;
    std::printf("       link replays: %d/1000 mismatched\n", failures);
    return failures == 0;
}

bool zipf_sums_to_one() {
    double worst = 0.0;
    for (const double beta : {0.0, 0.5, 1.3, 3.0})
        for (const int catalog : {1, 2, 50, 500, 10000}) {
            double sum = 0.0;
            for (int k = 0; k < catalog; ++k) sum += zipf_pmf(k, {beta, catalog});
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    std::printf("       zipf normalization worst |sum-1| = %.3g\n", worst);
    return worst <= 1e-12;
}

bool eta_recomputes() {
    RunConfig cfg = desk_config();
    SimWorld world(cfg.world, 42);
    double worst = 0.0;
    for (long cycle = 0; cycle < 100; ++cycle) {
        const std::vector<int> requests = world.sample_requests();
        const CycleOutcome outcome = world.account(requests, cycle);
        double sum_reduction = 0.0;
        double sum_baseline = 0.0;
        for (const UserOutcome& u : outcome.users) {
            sum_reduction += u.reduction_frames;
            sum_baseline += u.baseline_frames;
        }
        worst = std::max(worst, std::abs(outcome.eta - sum_reduction / sum_baseline * 100.0));
        // Evolve the caches so the mix of hits and misses varies.
        for (int user = 0; user < world.n_users(); ++user)
            for (int station = 0; station < world.n_stations(); ++station)
                if (world.topology().covered(station, user))
                    world.caches()[station].baseline_step(BaselinePolicy::Lru,
                                                          requests[user], cycle);
    }
    std::printf("       eta recomputation worst |diff| = %.3g\n", worst);
    return worst <= 1e-9;
}

bool criterion_formula_oracles() {
    const bool links = links_match_brute_force();
    const bool zipf = zipf_sums_to_one();
    const bool etas = eta_recomputes();
    return links && zipf && etas;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_gradients() {
    Rng rng(2024);
    double worst = 0.0;
    for (int config = 0; config < 100; ++config) {
        std::vector<int> shape;
        shape.push_back(1 + static_cast<int>(rng.uniform_int(8)));
        const int depth = 1 + static_cast<int>(rng.uniform_int(3));
        for (int d = 0; d < depth; ++d)
            shape.push_back(1 + static_cast<int>(rng.uniform_int(12)));
        shape.push_back(1 + static_cast<int>(rng.uniform_int(8)));

        Mlp net(shape, rng);
        std::vector<double> x(static_cast<size_t>(shape.front()));
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        std::vector<double> g(static_cast<size_t>(shape.back()));
        for (double& v : g) v = rng.uniform(-1.0, 1.0);

        const Mlp::Trace trace = net.forward_trace(x);
        const std::vector<double> grad = net.backward(trace, g);

        const auto loss = [&](const Mlp& m) {
            const std::vector<double> out = m.forward(x);
            double acc = 0.0;
            for (size_t i = 0; i < out.size(); ++i) acc += g[i] * out[i];
            return acc;
        };

        const double h = 1e-5;
        std::vector<double> params = net.params();
        for (size_t k = 0; k < params.size(); ++k) {
            const double saved = params[k];
            Mlp probe = net;
            params[k] = saved + h;
            probe.set_params(params);
            const double up = loss(probe);
            params[k] = saved - h;
            probe.set_params(params);
            const double down = loss(probe);
            params[k] = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double rel = std::abs(numeric - grad[k]) /
                               std::max({std::abs(numeric), std::abs(grad[k]), 1e-6});
            worst = std::max(worst, rel);
        }
    }
    std::printf("       worst relative gradient error = %.3g\n", worst);
    return worst < 1e-4;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_baseline_traces() {
    const auto files = [](const CacheState& cache) {
        std::vector<int> out;
        for (const CacheSlot& slot : cache.slots()) out.push_back(slot.file);
        std::sort(out.begin(), out.end());
        return out;
    };
    constexpr int A = 0, B = 1, C = 2;
    const auto run_trace = [](BaselinePolicy policy, const std::vector<int>& trace) {
        CacheState cache(0, 2);
        long cycle = 0;
        for (const int f : trace) cache.baseline_step(policy, f, cycle++);
        return cache;
    };
    bool ok = true;

    const CacheState lru = run_trace(BaselinePolicy::Lru, {A, B, A, C});
    ok = ok && files(lru) == std::vector<int>{A, C};

    const CacheState fifo = run_trace(BaselinePolicy::Fifo, {A, B, A, C});
    ok = ok && files(fifo) == std::vector<int>{B, C};

    const CacheState lfu = run_trace(BaselinePolicy::Lfu, {A, A, B, C});
    ok = ok && files(lfu) == std::vector<int>{A, C};

    std::printf("       LRU {%d} FIFO {%d} LFU {%d} traces reproduced\n",
                files(lru) == std::vector<int>{A, C}, files(fifo) == std::vector<int>{B, C},
                files(lfu) == std::vector<int>{A, C});
    return ok;
}

// ---------------------------------------------------------------- criterion 4

RunConfig tiny_mdp_config() {
    RunConfig cfg = desk_config();
    cfg.world.topology.n_stations = 1;
    cfg.world.topology.n_users = 1;
    cfg.world.topology.cell_radius_m = 600.0;
    cfg.world.topology.arena_width_m = 600.0;
    cfg.world.topology.arena_height_m = 600.0;
    cfg.world.workload.catalog_size = 2;
    cfg.world.workload.n_groups = 1;
    cfg.world.workload.zipf_exponent = 3.0;
    cfg.world.workload.perturbation_swaps = 0;
    cfg.world.cache_capacity = 1;
    cfg.learner.actor_hidden = {32, 16};
    cfg.learner.critic_hidden = {32, 16};
    return cfg;
}

bool criterion_tiny_mdp() {
    const RunConfig cfg = tiny_mdp_config();
    bool ok = true;
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        SimWorld world(cfg.world, seed);
        Trainer trainer(world, cfg.learner, seed);
        trainer.train(5000);

        const int dominant = world.workload().epoch().preferences.profiles[0].rank[0];
        long held = 0;
        const long eval_cycles = 500;
        trainer.evaluate(eval_cycles,
                         [&](long, const CycleOutcome&, const std::vector<int>&) {
                             if (world.caches()[0].contains(dominant)) ++held;
                         });
        const double fraction = static_cast<double>(held) / static_cast<double>(eval_cycles);
        std::printf("       seed %llu: dominant file cached %.1f%% of evaluation cycles\n",
                    static_cast<unsigned long long>(seed), fraction * 100.0);
        ok = ok && fraction >= 0.9;
    }
    return ok;
}

// ------------------------------------------------------- criteria 5 and 6

// axis -> policy -> mean eta over seeds
std::map<double, std::map<std::string, double>> seed_means(const std::vector<SweepRow>& rows) {
    std::map<double, std::map<std::string, double>> sums;
    std::map<double, std::map<std::string, int>> counts;
    for (const SweepRow& row : rows) {
        sums[row.axis][row.policy] += row.eta;
        counts[row.axis][row.policy] += 1;
    }
    for (auto& [axis, by_policy] : sums)
        for (auto& [policy, sum] : by_policy) sum /= counts[axis][policy];
    return sums;
}

bool criterion_beta_ordering() {
    RunConfig cfg = desk_config();
    const std::vector<SweepRow> rows = run_beta_sweep(cfg);
    const auto means = seed_means(rows);

    bool marl_leads = true;
    for (const auto& [beta, by_policy] : means) {
        const double marl = by_policy.at("marl");
        std::printf("       beta=%.1f  marl=%.2f lru=%.2f lfu=%.2f fifo=%.2f\n", beta, marl,
                    by_policy.at("lru"), by_policy.at("lfu"), by_policy.at("fifo"));
        for (const char* baseline : {"lru", "lfu", "fifo"})
            if (marl < by_policy.at(baseline)) marl_leads = false;
    }

    bool skew_helps = true;
    for (const char* policy : {"marl", "lru", "lfu", "fifo"})
        if (means.at(1.3).at(policy) <= means.at(0.5).at(policy)) {
            std::printf("       %s does not improve from beta 0.5 to 1.3\n", policy);
            skew_helps = false;
        }
    if (!marl_leads) std::printf("       marl fell below a baseline at some beta\n");
    return marl_leads && skew_helps;
}

bool criterion_cache_ratio_shape() {
    RunConfig cfg = desk_config();
    const std::vector<SweepRow> rows = run_cache_ratio_sweep(cfg);
    const auto means = seed_means(rows);
    const std::vector<double> sigmas = cfg.sigma_list;
    const std::vector<std::string> policies = cfg.policies;

    for (const double sigma : sigmas) {
        const auto& by_policy = means.at(sigma);
        std::printf("       sigma=%.2f marl=%.2f lru=%.2f lfu=%.2f fifo=%.2f\n", sigma,
                    by_policy.at("marl"), by_policy.at("lru"), by_policy.at("lfu"),
                    by_policy.at("fifo"));
    }

    bool nondecreasing = true;
    for (const std::string& policy : policies)
        for (size_t i = 1; i < sigmas.size(); ++i) {
            const double prev = means.at(sigmas[i - 1]).at(policy);
            const double next = means.at(sigmas[i]).at(policy);
            if (next < prev - 1.0) {
                std::printf("       %s drops %.2f -> %.2f at sigma=%.2f\n", policy.c_str(),
                            prev, next, sigmas[i]);
                nondecreasing = false;
            }
        }

    double lo = 1e300, hi = -1e300;
    for (const std::string& policy : policies) {
        lo = std::min(lo, means.at(1.0).at(policy));
        hi = std::max(hi, means.at(1.0).at(policy));
    }
    const bool converged = hi - lo <= 1.0;
    if (!converged)
        std::printf("       policies spread %.2f points at sigma=1.0\n", hi - lo);

    // Diminishing returns per unit of cache ratio at the top of the curve.
    bool diminishing = true;
    for (const std::string& policy : policies) {
        const double early =
            (means.at(0.1).at(policy) - means.at(0.04).at(policy)) / (0.1 - 0.04);
        const double late = (means.at(1.0).at(policy) - means.at(0.4).at(policy)) / (1.0 - 0.4);
        if (!(late < early)) {
            std::printf("       %s gains %.2f/sigma late vs %.2f/sigma early\n", policy.c_str(),
                        late, early);
            diminishing = false;
        }
    }
    return nondecreasing && converged && diminishing;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_drift_adaptation() {
    RunConfig cfg = desk_config();
    const DriftResult result = run_drift(cfg, 1);

    const auto index_of = [&](const std::string& policy) {
        for (size_t i = 0; i < result.policies.size(); ++i)
            if (result.policies[i] == policy) return i;
        return result.policies.size();
    };
    const size_t marl = index_of("marl");
    const size_t lfu = index_of("lfu");
    if (marl >= result.policies.size() || lfu >= result.policies.size()) {
        std::printf("       drift run missing a required policy\n");
        return false;
    }

    const long period = cfg.world.workload.drift_period;
    const size_t pre_change = static_cast<size_t>(period) - 1;
    const size_t post_change = static_cast<size_t>(2 * period) - 1;
    const size_t final = result.eta_bar[lfu].size() - 1;

    const double lfu_pre = result.eta_bar[lfu][pre_change];
    const double lfu_post = result.eta_bar[lfu][post_change];
    const double lfu_final = result.eta_bar[lfu][final];
    const double marl_final = result.eta_bar[marl][final];

    std::printf("       epochs:");
    for (const EpochInfo& e : result.epochs)
        std::printf(" (start=%ld beta=%.3f)", e.start_cycle, e.zipf_exponent);
    std::printf("\n");
    std::printf("       lfu eta_bar: %.2f before change, %.2f one epoch later, %.2f final\n",
                lfu_pre, lfu_post, lfu_final);
    std::printf("       marl final eta_bar %.2f vs lfu %.2f\n", marl_final, lfu_final);

    const bool lfu_declines = lfu_post < lfu_pre;
    const bool marl_ahead = marl_final > lfu_final;
    if (!lfu_declines) std::printf("       lfu did not decline after the change point\n");
    if (!marl_ahead) std::printf("       marl did not finish ahead of lfu\n");
    return lfu_declines && marl_ahead;
}

// ---------------------------------------------------------------- criterion 8

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool criterion_determinism() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "edgecache_acceptance8";
    fs::remove_all(root);
    fs::create_directories(root);

    RunConfig sweep_cfg = desk_config();
    sweep_cfg.n_cycles = 250;
    sweep_cfg.seeds = {1};
    sweep_cfg.beta_list = {0.9};

    RunConfig drift_cfg = desk_config();
    drift_cfg.world.workload.drift_period = 150;
    drift_cfg.drift_epochs = 2;

    RunConfig train_cfg = desk_config();
    train_cfg.n_cycles = 250;
    train_cfg.checkpoint_every = 100;

    bool ok = true;
    for (const char* tag : {"a", "b"}) {
        const fs::path dir = root / tag;
        fs::create_directories(dir);
        write_sweep_csv((dir / "sweep.csv").string(), run_beta_sweep(sweep_cfg));
        write_drift_csv((dir / "drift.csv").string(), run_drift(drift_cfg, 1));
        run_train(train_cfg, 1, (dir / "train").string(), /*export_trace=*/true);
    }
    for (const char* name : {"sweep.csv", "drift.csv", "train/train_log.csv",
                             "train/trace.csv", "train/checkpoint_final.json",
                             "train/checkpoint_00000100.json"}) {
        const std::string a = slurp(root / "a" / name);
        const std::string b = slurp(root / "b" / name);
        const bool same = !a.empty() && a == b;
        std::printf("       %s: %s (%zu bytes)\n", name,
                    same ? "byte-identical" : "MISMATCH", a.size());
        ok = ok && same;
    }
    fs::remove_all(root);
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    bool (*run)();
};

const Criterion kCriteria[] = {
    {1, "formula oracles (delay replay, zipf normalization, eta)", criterion_formula_oracles},
    {2, "gradient integrity against finite differences", criterion_gradients},
    {3, "baseline eviction hand traces", criterion_baseline_traces},
    {4, "learning sanity on the two-file MDP", criterion_tiny_mdp},
    {5, "beta sweep ordering", criterion_beta_ordering},
    {6, "cache ratio sweep shape", criterion_cache_ratio_shape},
    {7, "adaptation under popularity drift", criterion_drift_adaptation},
    {8, "byte-identical outputs across repeated runs", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 64;
        }
    }

    int failures = 0;
    for (const Criterion& criterion : kCriteria) {
        if (only != 0 && criterion.id != only) continue;
        bool passed = false;
        try {
            passed = criterion.run();
        } catch (const std::exception& e) {
            std::printf("       exception: %s\n", e.what());
        }
        std::printf("[%s] %d. %s\n", passed ? "PASS" : "FAIL", criterion.id, criterion.name);
        std::fflush(stdout);
        if (!passed) ++failures;
    }
    return failures;
}
