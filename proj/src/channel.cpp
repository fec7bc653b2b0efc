#include "edgecache/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "edgecache/topology.hpp"

namespace edgecache {

namespace {
// Sub-meter link distances are unphysical here and would blow up d^-4.
constexpr double kMinLinkDistance = 1.0;
}  // namespace

double sample_fading(const Link& link, const ChannelParams& params, Rng& rng) {
    const double d = std::max(link.distance_m, kMinLinkDistance);
    const double mean_gain = std::pow(d, -params.pathloss_exponent);
    return rng.exponential(mean_gain);
}

double capacity(double fading_gain, const Link& link, const ChannelParams& params) {
    const double snr = link.tx_power_w * fading_gain /
                       (params.bandwidth_hz * params.noise_psd_w_per_hz);
    return params.bandwidth_hz * std::log2(1.0 + snr);
}

TransmissionResult transmission_delay(const FileSize& file, const Link& link,
                                      const ChannelParams& params, Rng& rng) {
    if (file.bits <= 0.0) throw std::invalid_argument("transmission_delay: file bits must be > 0");
    double delivered = 0.0;
    for (long frame = 1; frame <= params.max_frames; ++frame) {
        const double z = sample_fading(link, params, rng);
        delivered += params.frame_seconds * capacity(z, link, params);
        if (delivered >= file.bits) return {frame, false};
    }
    return {params.max_frames, true};
}

MissDelay miss_delay(const Topology& topology, int user, const FileSize& file,
                     const ChannelParams& params, Rng& rng) {
    const int relay = topology.nearest_covering_station(user);
    const Link cloud_hop{topology.cloud().tx_power_w, topology.cloud().backhaul_distance_m};
    const Link edge_hop{topology.stations()[relay].tx_power_w,
                        topology.station_user_distance(relay, user)};
    // Store-and-forward: the station hop starts after the cloud hop finishes.
    const TransmissionResult a = transmission_delay(file, cloud_hop, params, rng);
    const TransmissionResult b = transmission_delay(file, edge_hop, params, rng);
    return {{a.frames + b.frames, a.truncated || b.truncated}, relay};
}

TransmissionResult hit_delay(const Topology& topology, int user, int station,
                             const FileSize& file, const ChannelParams& params, Rng& rng) {
    if (!topology.covered(station, user)) {
        throw std::invalid_argument("hit_delay: station does not cover user");
    }
    const Link hop{topology.stations()[station].tx_power_w,
                   topology.station_user_distance(station, user)};
    return transmission_delay(file, hop, params, rng);
}

}  // namespace edgecache
