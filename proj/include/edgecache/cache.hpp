#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace edgecache {

class Topology;

enum class BaselinePolicy { Lru, Lfu, Fifo };

struct CacheSlot {
    int file = -1;
    long last_used_cycle = 0;
    long use_count = 0;
    long inserted_cycle = 0;
};

/// Either keep-as-is or replace one cached file with one currently requested
/// file. Indices are 0-based positions into the slot list and the station's
/// connectable-user list.
struct Action {
    int evict_slot = -1;
    int request_slot = -1;
    static Action no_op() { return Action{}; }
    bool is_no_op() const { return evict_slot < 0; }
    bool operator==(const Action&) const = default;
};

/// Total number of action ids: one no-op plus every (cached file, requesting
/// user) pair.
long action_space_size(int cache_len, int n_connectable);

/// Row-major bijection between action ids and Actions. Id 0 is the no-op.
Action decode_action(long id, int cache_len, int n_connectable);
long encode_action(const Action& action, int n_connectable);

/// Per-station cache: an ordered slot list with bookkeeping metadata. Slots
/// are positional; a replacement lands in the evicted slot.
class CacheState {
public:
    CacheState(int station_id, int capacity);

    int station_id() const { return station_id_; }
    int capacity() const { return capacity_; }
    int size() const { return static_cast<int>(slots_.size()); }
    bool full() const { return size() >= capacity_; }
    bool contains(int file) const { return find(file) >= 0; }
    const std::vector<CacheSlot>& slots() const { return slots_; }

    /// Warm-fill/free-slot insertion; no-op when full or already cached.
    bool insert_if_absent(int file, long cycle);

    /// Learned-action application. Replacement with an already cached file
    /// degrades to a no-op so exploration can never create duplicates.
    void apply(const Action& action, std::span<const int> requested_files, long cycle);

    /// One request seen by this station's independent baseline policy.
    void baseline_step(BaselinePolicy policy, int file, long cycle);

    nlohmann::json to_json() const;
    static CacheState from_json(const nlohmann::json& j);

private:
    int find(int file) const;
    int victim_slot(BaselinePolicy policy) const;

    int station_id_ = 0;
    int capacity_ = 0;
    std::vector<CacheSlot> slots_;
};

/// Station-by-file indicator matrix with row sums, rebuilt from slot lists.
struct CacheMatrix {
    int n_stations = 0;
    int catalog_size = 0;
    std::vector<std::vector<bool>> cached;  // [station][file]
    std::vector<int> row_sums;
};
CacheMatrix build_cache_matrix(std::span<const CacheState> caches, int catalog_size);

/// Serving station for a request: the nearest covering station holding the
/// file (expected single-hop delay is monotone in distance), or -1 on a miss.
int lookup(std::span<const CacheState> caches, const Topology& topology, int user, int file);

std::string to_string(BaselinePolicy policy);

}  // namespace edgecache
