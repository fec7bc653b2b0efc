#pragma once

#include <cstdint>

#include "edgecache/random.hpp"

namespace edgecache {

class Topology;

struct ChannelParams {
    double bandwidth_hz = 1e6;
    // Noise PSD picked so a 1 km link at 16.9 dB transmit power sees a mean
    // SNR of 10 dB under the d^-4 path loss model.
    double noise_psd_w_per_hz = 4.8977881936844595e-18;  // 10^-17.31
    double frame_seconds = 1e-3;
    double pathloss_exponent = 4.0;
    long max_frames = 1000000;  // safety cap for unservable links
};

struct Link {
    double tx_power_w = 0.0;
    double distance_m = 0.0;
};

struct FileSize {
    double bits = 0.0;
    static constexpr double kUnitBits = 96.13;
    static FileSize from_units(double units) { return FileSize{units * kUnitBits}; }
};

struct TransmissionResult {
    long frames = 0;
    bool truncated = false;  // max_frames hit before the file fit
};

/// Squared-magnitude Rayleigh gain: exponential with mean distance^-pathloss,
/// drawn fresh per frame.
double sample_fading(const Link& link, const ChannelParams& params, Rng& rng);

/// Per-frame Shannon capacity in bits/s for a given fading gain.
double capacity(double fading_gain, const Link& link, const ChannelParams& params);

/// Smallest frame count whose accumulated per-frame throughput covers the
/// file, with one independent fading draw per frame.
TransmissionResult transmission_delay(const FileSize& file, const Link& link,
                                      const ChannelParams& params, Rng& rng);

/// Cloud -> nearest covering station -> user, the two hops in sequence with
/// independent fading. Returns the total frames and the relay station.
struct MissDelay {
    TransmissionResult total;
    int relay_station = -1;
};
MissDelay miss_delay(const Topology& topology, int user, const FileSize& file,
                     const ChannelParams& params, Rng& rng);

/// Single hop from a covering station to the user. Throws std::invalid_argument
/// if the station does not cover the user.
TransmissionResult hit_delay(const Topology& topology, int user, int station,
                             const FileSize& file, const ChannelParams& params, Rng& rng);

}  // namespace edgecache
