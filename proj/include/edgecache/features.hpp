#pragma once

#include <array>
#include <vector>

#include <json.hpp>

namespace edgecache {

/// Per-station sliding windows over the most recent requests, kept at three
/// horizons. An observation is the three per-file count vectors concatenated
/// (short, medium, long), each normalized by its window length so entries stay
/// in [0, 1].
class FeatureWindows {
public:
    static constexpr int kWindows = 3;

    FeatureWindows(int n_stations, int catalog_size,
                   std::array<int, kWindows> window_lengths = {10, 100, 1000});

    /// Appends one request to all three windows of a station, evicting the
    /// oldest entry of any window that is full.
    void record(int station, int file);

    /// Raw per-file counts for one window of one station.
    const std::vector<int>& counts(int station, int window) const;

    /// Normalized observation, length 3 * catalog_size.
    std::vector<double> observation(int station) const;

    /// All observations concatenated in station order, length 3 * M * N.
    std::vector<double> global_state() const;

    int observation_size() const { return kWindows * catalog_size_; }
    int global_state_size() const { return n_stations_ * observation_size(); }
    int n_stations() const { return n_stations_; }
    int catalog_size() const { return catalog_size_; }
    const std::array<int, kWindows>& window_lengths() const { return window_lengths_; }

    nlohmann::json save_state() const;
    void load_state(const nlohmann::json& j);

private:
    struct Ring {
        std::vector<int> entries;  // circular, oldest at head when full
        int head = 0;
        int fill = 0;
    };

    void write_observation(int station, double* out) const;

    int n_stations_ = 0;
    int catalog_size_ = 0;
    std::array<int, kWindows> window_lengths_{};
    std::vector<std::array<Ring, kWindows>> rings_;            // [station][window]
    std::vector<std::array<std::vector<int>, kWindows>> counts_;  // [station][window][file]
};

}  // namespace edgecache
