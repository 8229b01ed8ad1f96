#include "rtoff/link.hpp"

#include <cmath>

#include "rtoff/check.hpp"

namespace rtoff {

Duration sample_one_way(const LinkModel& link, Rng& rng) {
    RTOFF_CHECK(link.min_latency >= 0);
    Duration d;
    if (link.one_way_stddev <= 0) {
        d = link.one_way_mean;
    } else {
        d = std::llround(rng.normal(static_cast<double>(link.one_way_mean),
                                    static_cast<double>(link.one_way_stddev)));
    }
    return d < link.min_latency ? link.min_latency : d;
}

Duration transfer_time(const LinkModel& link, std::int64_t payload_bytes, Rng& rng) {
    RTOFF_CHECK(payload_bytes >= 0);
    Duration t = sample_one_way(link, rng);
    if (link.bandwidth_bytes_per_sec && payload_bytes > 0) {
        std::int64_t bw = *link.bandwidth_bytes_per_sec;
        RTOFF_CHECK(bw > 0);
        t += (payload_bytes * 1'000'000 + bw - 1) / bw; // ceil to whole us
    }
    return t;
}

Duration connection_setup_time(const LinkModel& link, Rng& rng) {
    Duration syn = sample_one_way(link, rng);
    Duration syn_ack = sample_one_way(link, rng);
    return syn + syn_ack;
}

} // namespace rtoff
