#pragma once

#include <cstdint>
#include <optional>

#include "rtoff/core.hpp"
#include "rtoff/rng.hpp"

namespace rtoff {

// One-way delay model for a point-to-point link. Wireless client links and
// the wired scheduler/worker links are separate instances of this.
struct LinkModel {
    Duration one_way_mean = 30'000;
    Duration one_way_stddev = 10'000;
    // Floor for sampled delays; keeps the normal tail physical. Wired links
    // inside the cluster typically use 0 here.
    Duration min_latency = 1'000;
    std::optional<std::int64_t> bandwidth_bytes_per_sec;
};

// Draws one one-way delay: Normal(mean, stddev) clamped from below.
Duration sample_one_way(const LinkModel& link, Rng& rng);

// One-way delay plus serialization time for a payload of the given size,
// rounded up to whole microseconds. Zero bytes or unlimited bandwidth reduce
// to a plain one-way sample.
Duration transfer_time(const LinkModel& link, std::int64_t payload_bytes, Rng& rng);

// Handshake cost as perceived by the initiator before the first payload can
// be sent: two independent one-way samples.
Duration connection_setup_time(const LinkModel& link, Rng& rng);

} // namespace rtoff
