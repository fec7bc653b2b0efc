#include "edgecache/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "edgecache/errors.hpp"

namespace edgecache {

DelaySample ChannelDelayModel::hit(int station, int user, Rng& rng) {
    TransmissionResult r = hit_delay(*topology_, user, station, file_, params_, rng);
    return {static_cast<double>(r.frames), r.truncated};
}

DelaySample ChannelDelayModel::miss(int user, Rng& rng) {
    MissDelay m = miss_delay(*topology_, user, file_, params_, rng);
    return {static_cast<double>(m.total.frames), m.total.truncated};
}

UserOutcome account_user(const Topology& topology, std::span<const CacheState> caches,
                         int user, int file, DelayModel& delays, Rng& rng) {
    UserOutcome out;
    out.user = user;
    out.file = file;
    out.serving_station = lookup(caches, topology, user, file);
    if (out.serving_station >= 0) {
        DelaySample real = delays.hit(out.serving_station, user, rng);
        DelaySample counterfactual = delays.miss(user, rng);
        out.realized_frames = real.frames;
        out.baseline_frames = counterfactual.frames;
        out.reduction_frames = std::max(0.0, counterfactual.frames - real.frames);
        out.truncated = real.truncated || counterfactual.truncated;
    } else {
        DelaySample real = delays.miss(user, rng);
        out.realized_frames = real.frames;
        out.baseline_frames = real.frames;
        out.reduction_frames = 0.0;
        out.truncated = real.truncated;
    }
    return out;
}

void finalize_outcome(CycleOutcome& outcome) {
    if (outcome.users.empty()) throw AccountingError("cycle with no users");
    double sum_reduction = 0.0;
    double sum_baseline = 0.0;
    outcome.any_truncated = false;
    for (const UserOutcome& u : outcome.users) {
        sum_reduction += u.reduction_frames;
        sum_baseline += u.baseline_frames;
        outcome.any_truncated = outcome.any_truncated || u.truncated;
    }
    const double n = static_cast<double>(outcome.users.size());
    outcome.mean_reduction = sum_reduction / n;
    outcome.mean_baseline = sum_baseline / n;
    outcome.eta = eta(outcome);
}

CycleOutcome cycle_delay_accounting(const Topology& topology,
                                    std::span<const CacheState> caches,
                                    std::span<const int> requests, DelayModel& delays,
                                    Rng& rng, long cycle) {
    if (static_cast<int>(requests.size()) != topology.n_users())
        throw std::invalid_argument("one request per user required");
    CycleOutcome outcome;
    outcome.cycle = cycle;
    outcome.users.reserve(requests.size());
    for (int user = 0; user < topology.n_users(); ++user)
        outcome.users.push_back(
            account_user(topology, caches, user, requests[user], delays, rng));
    finalize_outcome(outcome);
    return outcome;
}

double eta(const CycleOutcome& outcome) {
    if (outcome.users.empty()) throw AccountingError("eta of an empty cycle");
    double sum_reduction = 0.0;
    double sum_baseline = 0.0;
    for (const UserOutcome& u : outcome.users) {
        sum_reduction += u.reduction_frames;
        sum_baseline += u.baseline_frames;
    }
    if (sum_baseline <= 0.0)
        throw AccountingError("counterfactual delay is zero; eta undefined");
    return sum_reduction / sum_baseline * 100.0;
}

std::vector<double> running_average(std::span<const double> series) {
    std::vector<double> out;
    out.reserve(series.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        acc += series[t];
        out.push_back(acc / static_cast<double>(t + 1));
    }
    return out;
}

}  // namespace edgecache
