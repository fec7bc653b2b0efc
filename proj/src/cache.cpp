#include "edgecache/cache.hpp"

#include <limits>
#include <stdexcept>

#include "edgecache/topology.hpp"

namespace edgecache {

long action_space_size(int cache_len, int n_connectable) {
    if (cache_len < 0 || n_connectable < 0) {
        throw std::invalid_argument("action_space_size: negative dimensions");
    }
    return static_cast<long>(cache_len) * n_connectable + 1;
}

Action decode_action(long id, int cache_len, int n_connectable) {
    if (id < 0 || id >= action_space_size(cache_len, n_connectable)) {
        throw std::invalid_argument("decode_action: id outside the action space");
    }
    if (id == 0) return Action::no_op();
    Action a;
    a.evict_slot = static_cast<int>((id - 1) / n_connectable);
    a.request_slot = static_cast<int>((id - 1) % n_connectable);
    return a;
}

long encode_action(const Action& action, int n_connectable) {
    if (action.is_no_op()) return 0;
    return static_cast<long>(action.evict_slot) * n_connectable + action.request_slot + 1;
}

CacheState::CacheState(int station_id, int capacity)
    : station_id_(station_id), capacity_(capacity) {
    if (capacity < 0) throw std::invalid_argument("CacheState: negative capacity");
    slots_.reserve(capacity);
}

int CacheState::find(int file) const {
    for (int i = 0; i < size(); ++i) {
        if (slots_[i].file == file) return i;
    }
    return -1;
}

bool CacheState::insert_if_absent(int file, long cycle) {
    if (full() || contains(file)) return false;
    slots_.push_back(CacheSlot{file, cycle, 1, cycle});
    return true;
}

void CacheState::apply(const Action& action, std::span<const int> requested_files, long cycle) {
    if (action.is_no_op()) return;
    if (action.evict_slot < 0 || action.evict_slot >= size()) {
        throw std::invalid_argument("apply: evict slot out of range");
    }
    if (action.request_slot < 0 ||
        action.request_slot >= static_cast<int>(requested_files.size())) {
        throw std::invalid_argument("apply: request slot out of range");
    }
    const int file = requested_files[action.request_slot];
    if (contains(file)) return;  // duplicate insert degrades to no-op
    slots_[action.evict_slot] = CacheSlot{file, cycle, 1, cycle};
}

int CacheState::victim_slot(BaselinePolicy policy) const {
    long best = std::numeric_limits<long>::max();
    int victim = 0;
    for (int i = 0; i < size(); ++i) {
        long key = 0;
        switch (policy) {
            case BaselinePolicy::Lru: key = slots_[i].last_used_cycle; break;
            case BaselinePolicy::Lfu: key = slots_[i].use_count; break;
            case BaselinePolicy::Fifo: key = slots_[i].inserted_cycle; break;
        }
        if (key < best) {  // ties keep the lowest slot index
            best = key;
            victim = i;
        }
    }
    return victim;
}

void CacheState::baseline_step(BaselinePolicy policy, int file, long cycle) {
    if (file < 0) throw std::invalid_argument("baseline_step: invalid file id");
    const int hit = find(file);
    if (hit >= 0) {
        slots_[hit].last_used_cycle = cycle;
        slots_[hit].use_count += 1;
        return;  // FIFO keeps the original insertion time
    }
    if (!full()) {
        slots_.push_back(CacheSlot{file, cycle, 1, cycle});
        return;
    }
    if (capacity_ == 0) return;
    slots_[victim_slot(policy)] = CacheSlot{file, cycle, 1, cycle};
}

nlohmann::json CacheState::to_json() const {
    nlohmann::json j;
    j["station"] = station_id_;
    j["capacity"] = capacity_;
    nlohmann::json slots = nlohmann::json::array();
    for (const auto& s : slots_) {
        slots.push_back({{"file", s.file},
                         {"last_used", s.last_used_cycle},
                         {"use_count", s.use_count},
                         {"inserted", s.inserted_cycle}});
    }
    j["slots"] = slots;
    return j;
}

CacheState CacheState::from_json(const nlohmann::json& j) {
    CacheState cache(j.at("station").get<int>(), j.at("capacity").get<int>());
    for (const auto& s : j.at("slots")) {
        CacheSlot slot;
        slot.file = s.at("file").get<int>();
        slot.last_used_cycle = s.at("last_used").get<long>();
        slot.use_count = s.at("use_count").get<long>();
        slot.inserted_cycle = s.at("inserted").get<long>();
        if (static_cast<int>(cache.slots_.size()) >= cache.capacity_) {
            throw std::invalid_argument("CacheState::from_json: more slots than capacity");
        }
        cache.slots_.push_back(slot);
    }
    return cache;
}

CacheMatrix build_cache_matrix(std::span<const CacheState> caches, int catalog_size) {
    CacheMatrix m;
    m.n_stations = static_cast<int>(caches.size());
    m.catalog_size = catalog_size;
    m.cached.assign(m.n_stations, std::vector<bool>(catalog_size, false));
    m.row_sums.assign(m.n_stations, 0);
    for (int i = 0; i < m.n_stations; ++i) {
        for (const auto& slot : caches[i].slots()) {
            if (slot.file < 0 || slot.file >= catalog_size) {
                throw std::invalid_argument("build_cache_matrix: file id outside catalog");
            }
            m.cached[i][slot.file] = true;
            m.row_sums[i] += 1;
        }
    }
    return m;
}

int lookup(std::span<const CacheState> caches, const Topology& topology, int user, int file) {
    int best_station = -1;
    double best_distance = std::numeric_limits<double>::max();
    for (const auto& cache : caches) {
        const int station = cache.station_id();
        if (!topology.covered(station, user)) continue;
        if (!cache.contains(file)) continue;
        const double d = topology.station_user_distance(station, user);
        if (d < best_distance) {  // distance ties keep the lowest station id
            best_distance = d;
            best_station = station;
        }
    }
    return best_station;
}

std::string to_string(BaselinePolicy policy) {
    switch (policy) {
        case BaselinePolicy::Lru: return "lru";
        case BaselinePolicy::Lfu: return "lfu";
        case BaselinePolicy::Fifo: return "fifo";
    }
    return "?";
}

}  // namespace edgecache
