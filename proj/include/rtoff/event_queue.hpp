#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rtoff/core.hpp"

namespace rtoff {

// Single-threaded discrete-event loop. Events fire in (fire_time, sequence)
// order; the sequence number breaks ties FIFO by insertion, so equal-time
// events run in the order they were posted. One instance drives one run.
class EventQueue {
public:
    using Handler = std::function<void()>;

    SimTime now() const { return now_; }

    // Fires fn exactly once at now + delay. Posting after the run has
    // completed is an error.
    void post(Duration delay, Handler fn);

    // Same, with an absolute fire time >= now.
    void post_at(SimTime when, Handler fn);

    // Fires every event with fire_time <= t_end, then leaves now == t_end.
    void run_until(SimTime t_end);

    // Drains the queue completely and marks the run as finished.
    void run_all();

    bool empty() const { return heap_.empty(); }
    bool finished() const { return finished_; }
    std::uint64_t posted_count() const { return posted_; }
    std::uint64_t fired_count() const { return fired_; }

private:
    struct Event {
        SimTime at;
        std::uint64_t seq;
        Handler fn;
    };
    struct After {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at)
                return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    Event pop_next();

    std::vector<Event> heap_;
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t posted_ = 0;
    std::uint64_t fired_ = 0;
    bool finished_ = false;
};

} // namespace rtoff
