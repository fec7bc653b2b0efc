#include "edgecache/features.hpp"

#include <stdexcept>

namespace edgecache {

FeatureWindows::FeatureWindows(int n_stations, int catalog_size,
                               std::array<int, kWindows> window_lengths)
    : n_stations_(n_stations), catalog_size_(catalog_size), window_lengths_(window_lengths) {
    if (n_stations <= 0 || catalog_size <= 0)
        throw std::invalid_argument("feature windows need positive dimensions");
    for (int w : window_lengths_)
        if (w <= 0) throw std::invalid_argument("window length must be positive");
    rings_.resize(n_stations_);
    counts_.resize(n_stations_);
    for (int s = 0; s < n_stations_; ++s) {
        for (int w = 0; w < kWindows; ++w) {
            rings_[s][w].entries.assign(window_lengths_[w], -1);
            counts_[s][w].assign(catalog_size_, 0);
        }
    }
}

void FeatureWindows::record(int station, int file) {
    if (station < 0 || station >= n_stations_)
        throw std::out_of_range("station out of range");
    if (file < 0 || file >= catalog_size_)
        throw std::out_of_range("file out of range");
    for (int w = 0; w < kWindows; ++w) {
        Ring& ring = rings_[station][w];
        std::vector<int>& count = counts_[station][w];
        const int cap = window_lengths_[w];
        if (ring.fill == cap) {
            count[ring.entries[ring.head]] -= 1;
        } else {
            ring.fill += 1;
        }
        ring.entries[ring.head] = file;
        ring.head = (ring.head + 1) % cap;
        count[file] += 1;
    }
}

const std::vector<int>& FeatureWindows::counts(int station, int window) const {
    return counts_.at(station).at(window);
}

void FeatureWindows::write_observation(int station, double* out) const {
    for (int w = 0; w < kWindows; ++w) {
        const double inv = 1.0 / window_lengths_[w];
        const std::vector<int>& count = counts_[station][w];
        for (int f = 0; f < catalog_size_; ++f)
            out[w * catalog_size_ + f] = count[f] * inv;
    }
}

std::vector<double> FeatureWindows::observation(int station) const {
    if (station < 0 || station >= n_stations_)
        throw std::out_of_range("station out of range");
    std::vector<double> obs(observation_size());
    write_observation(station, obs.data());
    return obs;
}

std::vector<double> FeatureWindows::global_state() const {
    std::vector<double> state(global_state_size());
    for (int s = 0; s < n_stations_; ++s)
        write_observation(s, state.data() + s * observation_size());
    return state;
}

nlohmann::json FeatureWindows::save_state() const {
    nlohmann::json stations = nlohmann::json::array();
    for (int s = 0; s < n_stations_; ++s) {
        nlohmann::json windows = nlohmann::json::array();
        for (int w = 0; w < kWindows; ++w) {
            const Ring& ring = rings_[s][w];
            // Persist in arrival order so layout details stay internal.
            std::vector<int> ordered;
            ordered.reserve(ring.fill);
            const int cap = window_lengths_[w];
            const int start = (ring.fill == cap) ? ring.head : 0;
            for (int k = 0; k < ring.fill; ++k)
                ordered.push_back(ring.entries[(start + k) % cap]);
            windows.push_back(std::move(ordered));
        }
        stations.push_back(std::move(windows));
    }
    return nlohmann::json{{"n_stations", n_stations_},
                          {"catalog_size", catalog_size_},
                          {"window_lengths", window_lengths_},
                          {"stations", std::move(stations)}};
}

void FeatureWindows::load_state(const nlohmann::json& j) {
    if (j.at("n_stations").get<int>() != n_stations_ ||
        j.at("catalog_size").get<int>() != catalog_size_ ||
        j.at("window_lengths").get<std::array<int, kWindows>>() != window_lengths_)
        throw std::invalid_argument("feature window shape mismatch");
    *this = FeatureWindows(n_stations_, catalog_size_, window_lengths_);
    const nlohmann::json& stations = j.at("stations");
    for (int s = 0; s < n_stations_; ++s) {
        for (int w = 0; w < kWindows; ++w) {
            Ring& ring = rings_[s][w];
            std::vector<int>& count = counts_[s][w];
            for (int file : stations.at(s).at(w)) {
                if (file < 0 || file >= catalog_size_)
                    throw std::invalid_argument("window entry out of range");
                const int cap = window_lengths_[w];
                if (ring.fill == cap) {
                    count[ring.entries[ring.head]] -= 1;
                } else {
                    ring.fill += 1;
                }
                ring.entries[ring.head] = file;
                ring.head = (ring.head + 1) % cap;
                count[file] += 1;
            }
        }
    }
}

}  // namespace edgecache
